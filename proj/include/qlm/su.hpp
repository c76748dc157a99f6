#pragma once

// SU(2)/SU(4) generator sets and the Bloch-vector parameterization
// U(p) = exp(−i p·G). Generators follow the generalized Gell-Mann
// construction, normalized to Tr(G²) = 2 so that SU(2) and SU(4) share one
// formula; for d = 2 this reproduces the Pauli matrices (σx, σy, σz).

#include <array>
#include <cmath>
#include <stdexcept>

#include "qlm/linalg.hpp"
#include "qlm/rng.hpp"

namespace qlm {

/// Real parameter vector of length d²−1 driving a d-dimensional unitary.
template <int D>
struct BlochVector {
    static_assert(D == 2 || D == 4, "unsupported dimension");
    static constexpr int size = D * D - 1;
    std::array<double, size> c{};

    double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
    const double& operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

    double norm() const {
        double s = 0.0;
        for (double x : c) s += x * x;
        return std::sqrt(s);
    }

    BlochVector operator-() const {
        BlochVector v;
        for (int i = 0; i < size; ++i) v[i] = -c[static_cast<std::size_t>(i)];
        return v;
    }

    bool finite() const {
        for (double x : c)
            if (!std::isfinite(x)) return false;
        return true;
    }
};

namespace detail {

template <int D>
inline std::array<Matrix<D>, D * D - 1> build_generators() {
    std::array<Matrix<D>, D * D - 1> g;
    int idx = 0;
    // Symmetric: E_jk + E_kj, pairs (j,k) lexicographic with j < k.
    for (int j = 0; j < D; ++j)
        for (int k = j + 1; k < D; ++k) {
            Matrix<D> m;
            m(j, k) = cplx{1.0, 0.0};
            m(k, j) = cplx{1.0, 0.0};
            g[static_cast<std::size_t>(idx++)] = m;
        }
    // Antisymmetric: −i(E_jk − E_kj), same pair order.
    for (int j = 0; j < D; ++j)
        for (int k = j + 1; k < D; ++k) {
            Matrix<D> m;
            m(j, k) = cplx{0.0, -1.0};
            m(k, j) = cplx{0.0, 1.0};
            g[static_cast<std::size_t>(idx++)] = m;
        }
    // Diagonal: sqrt(2/(l(l+1))) · diag(1,...,1,−l,0,...), l = 1..D−1.
    for (int l = 1; l < D; ++l) {
        Matrix<D> m;
        const double scale = std::sqrt(2.0 / (static_cast<double>(l) * (l + 1)));
        for (int j = 0; j < l; ++j) m(j, j) = cplx{scale, 0.0};
        m(l, l) = cplx{-scale * l, 0.0};
        g[static_cast<std::size_t>(idx++)] = m;
    }
    return g;
}

} // namespace detail

/// The d²−1 SU(d) generators in canonical order: 6 symmetric, 6 antisymmetric,
/// 3 diagonal for d=4; (σx, σy, σz) for d=2. Trace-orthogonal: Tr(G_aG_b)=2δ_ab.
template <int D>
inline const std::array<Matrix<D>, D * D - 1>& generator_set() {
    static_assert(D == 2 || D == 4, "unsupported dimension");
    static const std::array<Matrix<D>, D * D - 1> g = detail::build_generators<D>();
    return g;
}

/// Σ p_a G_a (Hermitian and traceless by construction).
template <int D>
inline Matrix<D> bloch_hamiltonian(const BlochVector<D>& p) {
    const auto& gens = generator_set<D>();
    Matrix<D> h;
    for (int a = 0; a < BlochVector<D>::size; ++a) {
        const double pa = p[a];
        if (pa == 0.0) continue;
        const Matrix<D>& g = gens[static_cast<std::size_t>(a)];
        for (std::size_t i = 0; i < h.e.size(); ++i) h.e[i] += pa * g.e[i];
    }
    return h;
}

/// U(p) = exp(−i p·G), computed through the eigendecomposition path.
template <int D>
inline Matrix<D> unitary_from_parameters(const BlochVector<D>& p) {
    if (!p.finite()) throw std::invalid_argument("unitary_from_parameters: non-finite component");
    return exp_neg_i(bloch_hamiltonian(p));
}

/// Projection of a traceless Hermitian matrix onto the generator basis:
/// p_a = Tr(G_a H)/2. Inverse of bloch_hamiltonian.
template <int D>
inline BlochVector<D> bloch_projection(const Matrix<D>& h) {
    const auto& gens = generator_set<D>();
    BlochVector<D> p;
    for (int a = 0; a < BlochVector<D>::size; ++a) {
        const Matrix<D>& g = gens[static_cast<std::size_t>(a)];
        cplx t{0.0, 0.0};
        for (int r = 0; r < D; ++r)
            for (int c = 0; c < D; ++c) t += g(r, c) * h(c, r);
        p[a] = 0.5 * t.real();
    }
    return p;
}

/// Closed form for d=2: cos(‖p‖)·I − i·sin(‖p‖)·(p̂·σ). Independent of the
/// eigendecomposition path; used to cross-check it.
inline Matrix<2> su2_closed_form(const BlochVector<2>& p) {
    const double theta = p.norm();
    if (theta == 0.0) return Matrix<2>::identity();
    const double co = std::cos(theta);
    const double si = std::sin(theta);
    const double nx = p[0] / theta, ny = p[1] / theta, nz = p[2] / theta;
    Matrix<2> u;
    u(0, 0) = cplx{co, -si * nz};
    u(0, 1) = cplx{-si * ny, -si * nx};
    u(1, 0) = cplx{si * ny, -si * nx};
    u(1, 1) = cplx{co, si * nz};
    return u;
}

/// Each component i.i.d. uniform on [−half_range, +half_range).
template <int D>
inline BlochVector<D> sample_parameters(double half_range, TrialRng& rng) {
    if (!(half_range > 0.0)) throw std::invalid_argument("sample_parameters: half_range must be positive");
    BlochVector<D> p;
    for (int a = 0; a < BlochVector<D>::size; ++a) p[a] = rng.uniform(-half_range, half_range);
    return p;
}

} // namespace qlm
