#pragma once

// The P–U–M pipeline for Deutsch's task: the four binary functions and their
// oracle unitaries, initial state |0⟩_A|1⟩_B, the learned U₁ (two-qubit) and
// U₃ (one-qubit) stages, single-shot measurement of qubit A, and the
// reference Deutsch circuit used as an independent check.
//
// Two-qubit basis convention everywhere: index b = 2·k₁ + k₂ with qubit A the
// most significant bit.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "qlm/linalg.hpp"
#include "qlm/rng.hpp"
#include "qlm/su.hpp"

namespace qlm {

/// One of the four binary functions x_i : {0,1} → {0,1}.
struct BinaryFunction {
    int index;                  // i in {0,1,2,3}
    std::array<int, 2> values;  // (x_i(0), x_i(1)) = (i>>1, i&1)
};

inline BinaryFunction binary_function(int index) {
    if (index < 0 || index > 3) throw std::invalid_argument("binary_function: index must be in {0,1,2,3}");
    return BinaryFunction{index, {(index >> 1) & 1, index & 1}};
}

enum class TaskLabel { Constant, Balanced };

inline TaskLabel label_of(const BinaryFunction& f) {
    return f.values[0] == f.values[1] ? TaskLabel::Constant : TaskLabel::Balanced;
}

struct TaskPair {
    BinaryFunction function;
    TaskLabel label;
};

/// Deutsch's task: all four functions with their constant/balanced labels.
inline std::array<TaskPair, 4> task_set() {
    std::array<TaskPair, 4> t;
    for (int i = 0; i < 4; ++i) {
        const BinaryFunction f = binary_function(i);
        t[static_cast<std::size_t>(i)] = TaskPair{f, label_of(f)};
    }
    return t;
}

struct MachineConfig {
    int memory_size = 20;                       // N
    double step_scale = 0.7853981633974483;     // π/4, half-range of each r component
    double init_half_range = 3.141592653589793; // π, half-range of initial parameters
    std::uint64_t max_iterations = 1000000;
    int target_constant = 0;                    // measurement bit meaning "constant"
    int target_balanced = 1;
    bool baseline_mode = false;                 // no-memory baseline: re-draw all parameters on failure

    // Fixed start point instead of random initial parameters (used by tests
    // and known-good-point checks).
    std::optional<std::pair<BlochVector<4>, BlochVector<2>>> initial_parameters;

    void validate() const {
        if (memory_size < 1) throw std::invalid_argument("memory_size must be >= 1");
        if (!(step_scale > 0.0)) throw std::invalid_argument("step_scale must be positive");
        if (!(init_half_range > 0.0)) throw std::invalid_argument("init_half_range must be positive");
        if (max_iterations < static_cast<std::uint64_t>(memory_size))
            throw std::invalid_argument("max_iterations must be >= memory_size");
        if ((target_constant != 0 && target_constant != 1) || (target_balanced != 0 && target_balanced != 1))
            throw std::invalid_argument("target map entries must be bits");
    }
};

/// U₂(x_i): permutation |k₁,k₂⟩ → |k₁, k₂⊕x_i(k₁)⟩.
inline Matrix<4> oracle_unitary(const BinaryFunction& f) {
    Matrix<4> u;
    for (int k1 = 0; k1 < 2; ++k1)
        for (int k2 = 0; k2 < 2; ++k2) {
            const int col = 2 * k1 + k2;
            const int row = 2 * k1 + (k2 ^ f.values[static_cast<std::size_t>(k1)]);
            u(row, col) = cplx{1.0, 0.0};
        }
    return u;
}

/// Oracle as a basis-index permutation (same map as oracle_unitary).
inline std::array<int, 4> oracle_permutation(const BinaryFunction& f) {
    std::array<int, 4> perm;
    for (int k1 = 0; k1 < 2; ++k1)
        for (int k2 = 0; k2 < 2; ++k2)
            perm[static_cast<std::size_t>(2 * k1 + k2)] = 2 * k1 + (k2 ^ f.values[static_cast<std::size_t>(k1)]);
    return perm;
}

/// Target measurement bit for f under the config's label→bit map.
inline int target_outcome(const BinaryFunction& f, const MachineConfig& cfg) {
    return label_of(f) == TaskLabel::Constant ? cfg.target_constant : cfg.target_balanced;
}

/// |0⟩_A|1⟩_B, i.e. basis index 1.
inline Vector<4> initial_state() { return Vector<4>::basis(1); }

namespace detail {

/// (U₃⊗I)·U₂(f)·U₁ applied to |0⟩_A|1⟩_B, with U₁/U₃ already exponentiated.
inline Vector<4> output_state_from_unitaries(const Matrix<4>& u1, const BinaryFunction& f,
                                             const Matrix<2>& u3) {
    // U₁|e₁⟩ is column 1 of U₁.
    Vector<4> psi;
    for (int r = 0; r < 4; ++r) psi[r] = u1(r, 1);

    const std::array<int, 4> perm = oracle_permutation(f);
    Vector<4> phi;
    for (int j = 0; j < 4; ++j) phi[perm[static_cast<std::size_t>(j)]] = psi[j];

    // (U₃⊗I): mixes indices {0,2} and {1,3} (qubit A is the MSB).
    Vector<4> out;
    for (int k = 0; k < 2; ++k) {
        const cplx x0 = phi[k], x1 = phi[2 + k];
        out[k] = u3(0, 0) * x0 + u3(0, 1) * x1;
        out[2 + k] = u3(1, 0) * x0 + u3(1, 1) * x1;
    }
    return out;
}

} // namespace detail

/// Output state of the machine for input f at parameters (p₁, p₃).
inline Vector<4> machine_output_state(const BlochVector<4>& p1, const BinaryFunction& f,
                                      const BlochVector<2>& p3) {
    return detail::output_state_from_unitaries(unitary_from_parameters(p1), f,
                                               unitary_from_parameters(p3));
}

/// Probability of measuring qubit A as 0.
inline double prob_a_zero(const Vector<4>& psi) {
    return std::norm(psi[0]) + std::norm(psi[1]);
}

/// Single projective measurement of qubit A in the standard basis.
/// Consumes exactly one random draw.
inline int single_shot_measure_a(const Vector<4>& psi, TrialRng& rng) {
    if (std::abs(psi.squared_norm() - 1.0) > 1e-10)
        throw std::invalid_argument("single_shot_measure_a: state is not normalized");
    return rng.uniform01() < prob_a_zero(psi) ? 0 : 1;
}

inline Matrix<2> hadamard() {
    const double s = 1.0 / std::sqrt(2.0);
    Matrix<2> h;
    h(0, 0) = cplx{s, 0.0};
    h(0, 1) = cplx{s, 0.0};
    h(1, 0) = cplx{s, 0.0};
    h(1, 1) = cplx{-s, 0.0};
    return h;
}

struct ReferenceOutcome {
    int outcome;      // deterministic measurement bit of qubit A
    Vector<4> state;  // full two-qubit state after the circuit
};

/// Reference Deutsch circuit (H⊗I)·U_f·(H⊗H) on |0⟩|1⟩. Qubit A ends in
/// |0⟩ for constant f and |1⟩ for balanced f, up to sign.
inline ReferenceOutcome reference_deutsch_outcome(const BinaryFunction& f) {
    const Matrix<2> h = hadamard();
    const Matrix<4> front = tensor_product(h, h);
    const Matrix<4> back = tensor_product(h, Matrix<2>::identity());
    const Vector<4> psi = back * (oracle_unitary(f) * (front * initial_state()));
    return ReferenceOutcome{prob_a_zero(psi) >= 0.5 ? 0 : 1, psi};
}

} // namespace qlm
