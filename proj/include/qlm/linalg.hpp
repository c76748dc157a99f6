#pragma once

// Dense complex linear algebra for the 2- and 4-dimensional Hilbert spaces
// used by the learning machine: Hermitian eigendecomposition (cyclic Jacobi),
// unitary exponentials, Kronecker products, partial trace and state fidelity.
// Everything here is a pure function on small fixed-size value types.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <utility>

#include "qlm/errors.hpp"

namespace qlm {

using cplx = std::complex<double>;

template <int N>
struct Vector {
    static_assert(N > 0);
    std::array<cplx, N> e{};

    cplx& operator[](int i) { return e[static_cast<std::size_t>(i)]; }
    const cplx& operator[](int i) const { return e[static_cast<std::size_t>(i)]; }

    double squared_norm() const {
        double s = 0.0;
        for (const auto& a : e) s += std::norm(a);
        return s;
    }
    double norm() const { return std::sqrt(squared_norm()); }

    static Vector basis(int index) {
        if (index < 0 || index >= N) throw std::invalid_argument("basis index out of range");
        Vector v;
        v[index] = cplx{1.0, 0.0};
        return v;
    }
};

template <int N>
struct Matrix {
    static_assert(N > 0);
    std::array<cplx, static_cast<std::size_t>(N) * N> e{};

    cplx& operator()(int r, int c) { return e[static_cast<std::size_t>(r) * N + c]; }
    const cplx& operator()(int r, int c) const { return e[static_cast<std::size_t>(r) * N + c]; }

    static Matrix identity() {
        Matrix m;
        for (int i = 0; i < N; ++i) m(i, i) = cplx{1.0, 0.0};
        return m;
    }

    Matrix dagger() const {
        Matrix m;
        for (int r = 0; r < N; ++r)
            for (int c = 0; c < N; ++c) m(c, r) = std::conj((*this)(r, c));
        return m;
    }

    cplx trace() const {
        cplx t{0.0, 0.0};
        for (int i = 0; i < N; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& a : e) s += std::norm(a);
        return std::sqrt(s);
    }
};

template <int N>
inline Matrix<N> operator+(const Matrix<N>& a, const Matrix<N>& b) {
    Matrix<N> m;
    for (std::size_t i = 0; i < a.e.size(); ++i) m.e[i] = a.e[i] + b.e[i];
    return m;
}

template <int N>
inline Matrix<N> operator-(const Matrix<N>& a, const Matrix<N>& b) {
    Matrix<N> m;
    for (std::size_t i = 0; i < a.e.size(); ++i) m.e[i] = a.e[i] - b.e[i];
    return m;
}

template <int N>
inline Matrix<N> operator*(cplx s, const Matrix<N>& a) {
    Matrix<N> m;
    for (std::size_t i = 0; i < a.e.size(); ++i) m.e[i] = s * a.e[i];
    return m;
}

template <int N>
inline Matrix<N> operator*(double s, const Matrix<N>& a) { return cplx{s, 0.0} * a; }

template <int N>
inline Matrix<N> operator*(const Matrix<N>& a, const Matrix<N>& b) {
    Matrix<N> m;
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) {
            cplx s{0.0, 0.0};
            for (int k = 0; k < N; ++k) s += a(r, k) * b(k, c);
            m(r, c) = s;
        }
    return m;
}

template <int N>
inline Vector<N> operator*(const Matrix<N>& a, const Vector<N>& v) {
    Vector<N> w;
    for (int r = 0; r < N; ++r) {
        cplx s{0.0, 0.0};
        for (int c = 0; c < N; ++c) s += a(r, c) * v[c];
        w[r] = s;
    }
    return w;
}

/// |v⟩⟨v| as a density operator.
template <int N>
inline Matrix<N> outer(const Vector<N>& v) {
    Matrix<N> m;
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) m(r, c) = v[r] * std::conj(v[c]);
    return m;
}

/// Largest entrywise deviation from M = M†.
template <int N>
inline double hermiticity_defect(const Matrix<N>& m) {
    double d = 0.0;
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) d = std::max(d, std::abs(m(r, c) - std::conj(m(c, r))));
    return d;
}

template <int N>
inline bool is_hermitian(const Matrix<N>& m, double tol = 1e-12) {
    return hermiticity_defect(m) <= tol;
}

/// Frobenius norm of M†M − I.
template <int N>
inline double unitarity_defect(const Matrix<N>& m) {
    return (m.dagger() * m - Matrix<N>::identity()).frobenius_norm();
}

template <int N>
inline bool is_unitary(const Matrix<N>& m, double tol = 1e-10) {
    return unitarity_defect(m) < tol;
}

/// Kronecker product with the A factor as the most significant index block:
/// (A⊗B)(ar*Nb+br, ac*Nb+bc) = A(ar,ac)·B(br,bc).
template <int NA, int NB>
inline Matrix<NA * NB> tensor_product(const Matrix<NA>& a, const Matrix<NB>& b) {
    Matrix<NA * NB> m;
    for (int ar = 0; ar < NA; ++ar)
        for (int ac = 0; ac < NA; ++ac)
            for (int br = 0; br < NB; ++br)
                for (int bc = 0; bc < NB; ++bc)
                    m(ar * NB + br, ac * NB + bc) = a(ar, ac) * b(br, bc);
    return m;
}

template <int N>
struct EigResult {
    std::array<double, N> values;  // ascending
    Matrix<N> vectors;             // column k is the eigenvector of values[k]
};

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Off-diagonal threshold 1e-14 relative to the input Frobenius norm
/// (floored at 1), iteration cap 100 sweeps.
template <int N>
inline EigResult<N> hermitian_eigendecomposition(const Matrix<N>& h) {
    if (!is_hermitian(h, 1e-12))
        throw std::invalid_argument("hermitian_eigendecomposition: input is not Hermitian");

    Matrix<N> a = h;
    Matrix<N> v = Matrix<N>::identity();
    const double stop = 1e-14 * std::max(1.0, h.frobenius_norm());

    bool converged = false;
    for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
        double off2 = 0.0;
        for (int p = 0; p < N; ++p)
            for (int q = p + 1; q < N; ++q) off2 += 2.0 * std::norm(a(p, q));
        if (std::sqrt(off2) <= stop) {
            converged = true;
            break;
        }
        for (int p = 0; p < N; ++p) {
            for (int q = p + 1; q < N; ++q) {
                const double r = std::abs(a(p, q));
                if (r <= stop / (N * N)) continue;

                // Phase that makes a(p,q) real, then a real Jacobi rotation.
                const cplx phase = a(p, q) / r;  // e^{iφ}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * r);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // R differs from identity only in the (p,q) plane:
                //   R(p,p)=c, R(p,q)=s, R(q,p)=-s·e^{-iφ}, R(q,q)=c·e^{-iφ}.
                const cplx rpp{c, 0.0};
                const cplx rpq{s, 0.0};
                const cplx rqp = -s * std::conj(phase);
                const cplx rqq = c * std::conj(phase);

                // A ← R† A R, applied as column then row updates.
                for (int k = 0; k < N; ++k) {
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * rpp + akq * rqp;
                    a(k, q) = akp * rpq + akq * rqq;
                }
                for (int k = 0; k < N; ++k) {
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = std::conj(rpp) * apk + std::conj(rqp) * aqk;
                    a(q, k) = std::conj(rpq) * apk + std::conj(rqq) * aqk;
                }
                a(p, q) = cplx{0.0, 0.0};
                a(q, p) = cplx{0.0, 0.0};
                a(p, p) = cplx{a(p, p).real(), 0.0};
                a(q, q) = cplx{a(q, q).real(), 0.0};

                for (int k = 0; k < N; ++k) {
                    const cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp * rpp + vkq * rqp;
                    v(k, q) = vkp * rpq + vkq * rqq;
                }
            }
        }
    }
    if (!converged)
        throw NumericalError("hermitian_eigendecomposition: no convergence within 100 sweeps");

    std::array<int, N> order;
    for (int i = 0; i < N; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return a(x, x).real() < a(y, y).real(); });

    EigResult<N> res;
    for (int k = 0; k < N; ++k) {
        const int src = order[static_cast<std::size_t>(k)];
        res.values[static_cast<std::size_t>(k)] = a(src, src).real();
        for (int row = 0; row < N; ++row) res.vectors(row, k) = v(row, src);
    }
    return res;
}

/// exp(−iH) for Hermitian H, via eigendecomposition. Result is unitary.
template <int N>
inline Matrix<N> exp_neg_i(const Matrix<N>& h) {
    const EigResult<N> eig = hermitian_eigendecomposition(h);
    std::array<cplx, N> ph;
    for (int k = 0; k < N; ++k) {
        const double lam = eig.values[static_cast<std::size_t>(k)];
        ph[static_cast<std::size_t>(k)] = cplx{std::cos(lam), -std::sin(lam)};
    }
    Matrix<N> u;
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) {
            cplx s{0.0, 0.0};
            for (int k = 0; k < N; ++k)
                s += eig.vectors(r, k) * ph[static_cast<std::size_t>(k)] * std::conj(eig.vectors(c, k));
            u(r, c) = s;
        }
    return u;
}

/// Reduced state of qubit A: ρ_A(i,j) = Σ_k ρ(2i+k, 2j+k).
/// The input must be a valid two-qubit density operator.
inline Matrix<2> partial_trace_over_b(const Matrix<4>& rho) {
    if (!is_hermitian(rho, 1e-12))
        throw std::invalid_argument("partial_trace_over_b: density operator is not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > 1e-10 || std::abs(rho.trace().imag()) > 1e-10)
        throw std::invalid_argument("partial_trace_over_b: trace is not 1");
    const EigResult<4> eig = hermitian_eigendecomposition(rho);
    if (eig.values[0] < -1e-8)
        throw std::invalid_argument("partial_trace_over_b: density operator is not positive semidefinite");

    Matrix<2> out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out(i, j) = rho(2 * i, 2 * j) + rho(2 * i + 1, 2 * j + 1);
    return out;
}

/// ⟨t|ρ|t⟩ for a normalized pure target, clamped to [0,1] against roundoff.
inline double fidelity_pure_target(const Vector<2>& target, const Matrix<2>& rho) {
    if (std::abs(target.squared_norm() - 1.0) > 1e-10)
        throw std::invalid_argument("fidelity_pure_target: target is not normalized");
    if (!is_hermitian(rho, 1e-12))
        throw std::invalid_argument("fidelity_pure_target: rho is not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > 1e-10)
        throw std::invalid_argument("fidelity_pure_target: rho trace is not 1");

    cplx f{0.0, 0.0};
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) f += std::conj(target[r]) * rho(r, c) * target[c];
    return std::clamp(f.real(), 0.0, 1.0);
}

} // namespace qlm
