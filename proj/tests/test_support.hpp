#pragma once

// Shared helpers for the test suites. The expm series oracle here is kept
// independent of the eigendecomposition path it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "qlm/deutsch.hpp"
#include "qlm/linalg.hpp"
#include "qlm/rng.hpp"
#include "qlm/su.hpp"

namespace qlm_test {

using qlm::cplx;
using qlm::Matrix;
using qlm::Vector;

/// exp(−iH) by scaling and squaring of the Taylor series. Independent oracle
/// for the eigendecomposition path.
template <int N>
Matrix<N> exp_neg_i_series(const Matrix<N>& h) {
    Matrix<N> a;
    for (std::size_t i = 0; i < h.e.size(); ++i) a.e[i] = cplx{0.0, -1.0} * h.e[i];

    int squarings = 0;
    double norm = a.frobenius_norm();
    while (norm > 0.25) {
        norm *= 0.5;
        ++squarings;
    }
    const double scale = std::ldexp(1.0, -squarings);
    for (auto& x : a.e) x *= scale;

    Matrix<N> result = Matrix<N>::identity();
    Matrix<N> term = Matrix<N>::identity();
    for (int k = 1; k <= 30; ++k) {
        term = term * a;
        for (auto& x : term.e) x /= static_cast<double>(k);
        result = result + term;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

template <int N>
double max_abs_diff(const Matrix<N>& a, const Matrix<N>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.e.size(); ++i) d = std::max(d, std::abs(a.e[i] - b.e[i]));
    return d;
}

template <int N>
double max_abs_diff(const Vector<N>& a, const Vector<N>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.e.size(); ++i) d = std::max(d, std::abs(a.e[i] - b.e[i]));
    return d;
}

/// Frobenius distance after aligning the global phase of b to a.
template <int N>
double phase_aligned_distance(const Matrix<N>& a, const Matrix<N>& b) {
    cplx overlap{0.0, 0.0};
    for (std::size_t i = 0; i < a.e.size(); ++i) overlap += std::conj(b.e[i]) * a.e[i];
    const double mag = std::abs(overlap);
    const cplx phase = mag > 0.0 ? overlap / mag : cplx{1.0, 0.0};
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.e.size(); ++i) d2 += std::norm(a.e[i] - phase * b.e[i]);
    return std::sqrt(d2);
}

template <int N>
Matrix<N> random_hermitian(qlm::TrialRng& rng, double scale = 1.0) {
    Matrix<N> a;
    for (auto& x : a.e) x = cplx{rng.uniform(-scale, scale), rng.uniform(-scale, scale)};
    Matrix<N> h;
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) h(r, c) = 0.5 * (a(r, c) + std::conj(a(c, r)));
    return h;
}

/// Random density operator: normalized G·G† for a random complex G.
template <int N>
Matrix<N> random_density(qlm::TrialRng& rng) {
    Matrix<N> g;
    for (auto& x : g.e) x = cplx{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    Matrix<N> rho = g * g.dagger();
    const double tr = rho.trace().real();
    for (auto& x : rho.e) x /= tr;
    return rho;
}

/// Random single-qubit unitary via the closed-form SU(2) map.
inline Matrix<2> random_su2(qlm::TrialRng& rng) {
    qlm::BlochVector<2> p;
    for (int a = 0; a < 3; ++a) p[a] = rng.uniform(-3.141592653589793, 3.141592653589793);
    return qlm::su2_closed_form(p);
}

/// Two-sided Kolmogorov–Smirnov statistic of samples against the uniform
/// distribution on [lo, hi].
inline double ks_statistic_uniform(std::vector<double> samples, double lo, double hi) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double cdf = (samples[i] - lo) / (hi - lo);
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - cdf));
        d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
    }
    return d;
}

/// Bloch vectors realizing the reference Deutsch circuit inside the machine
/// ansatz: U(p1) = H⊗H and U(p3) = H, both up to a global phase.
inline std::pair<qlm::BlochVector<4>, qlm::BlochVector<2>> deutsch_point() {
    const double half_pi = 1.5707963267948966;
    const Matrix<2> h = qlm::hadamard();
    const Matrix<4> hh = qlm::tensor_product(h, h);
    return {qlm::bloch_projection<4>(half_pi * hh), qlm::bloch_projection<2>(half_pi * h)};
}

} // namespace qlm_test
