#pragma once

// The feedback system: sliding-window success/failure memory, the
// p' = p + (N0/NT)·r update, the halt condition (window full of successes),
// and the per-trial learning loop.

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "qlm/deutsch.hpp"
#include "qlm/linalg.hpp"
#include "qlm/rng.hpp"
#include "qlm/su.hpp"

namespace qlm {

/// Fixed-capacity sliding window of success(1)/failure(0) bits, newest last.
/// When full, recording drops the oldest bit.
class MemoryWindow {
public:
    explicit MemoryWindow(int capacity) : capacity_(capacity), bits_(static_cast<std::size_t>(capacity)) {
        if (capacity < 1) throw std::invalid_argument("MemoryWindow: capacity must be >= 1");
    }

    void record(int bit) {
        if (bit != 0 && bit != 1) throw std::invalid_argument("MemoryWindow: bit must be 0 or 1");
        if (size_ == capacity_) {
            successes_ -= bits_[static_cast<std::size_t>(head_)];
            bits_[static_cast<std::size_t>(head_)] = static_cast<std::uint8_t>(bit);
            head_ = (head_ + 1) % capacity_;
        } else {
            bits_[static_cast<std::size_t>((head_ + size_) % capacity_)] = static_cast<std::uint8_t>(bit);
            ++size_;
        }
        successes_ += bit;
        ++total_recorded_;
    }

    struct Counts {
        int failures;   // N0
        int successes;  // N1
        int window;     // NT = min(N, N0+N1)
    };

    Counts counts() const { return Counts{size_ - successes_, successes_, size_}; }

    /// True iff the window is full and every retained bit is a success.
    bool halt() const { return size_ == capacity_ && successes_ == capacity_; }

    int capacity() const { return capacity_; }
    int size() const { return size_; }
    std::uint64_t total_recorded() const { return total_recorded_; }

    /// Retained bits oldest to newest.
    std::vector<int> bits_in_order() const {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(size_));
        for (int i = 0; i < size_; ++i) out.push_back(bits_[static_cast<std::size_t>((head_ + i) % capacity_)]);
        return out;
    }

private:
    int capacity_;
    std::vector<std::uint8_t> bits_;
    int head_ = 0;
    int size_ = 0;
    int successes_ = 0;
    std::uint64_t total_recorded_ = 0;
};

/// The parameter update: draws an 18-component random vector r (each
/// component i.i.d. uniform on [−step_scale, +step_scale), p₁ components
/// first, then p₃) and returns p' = p + (N0/NT)·r.
inline std::pair<BlochVector<4>, BlochVector<2>> adjust_parameters(const BlochVector<4>& p1,
                                                                   const BlochVector<2>& p3,
                                                                   const MemoryWindow::Counts& counts,
                                                                   double step_scale, TrialRng& rng) {
    if (counts.window <= 0) throw std::invalid_argument("adjust_parameters: window must be non-empty");
    const double factor = static_cast<double>(counts.failures) / counts.window;
    std::pair<BlochVector<4>, BlochVector<2>> out{p1, p3};
    for (int a = 0; a < BlochVector<4>::size; ++a)
        out.first[a] = p1[a] + factor * rng.uniform(-step_scale, step_scale);
    for (int a = 0; a < BlochVector<2>::size; ++a)
        out.second[a] = p3[a] + factor * rng.uniform(-step_scale, step_scale);
    return out;
}

struct TrialResult {
    bool halted = false;
    std::uint64_t halt_iteration = 0;  // meaningful only when halted
    std::uint64_t iterations_used = 0;
    BlochVector<4> final_p1;
    BlochVector<2> final_p3;
    std::array<double, 4> fidelities{};  // ⟨t_x|ρ_x|t_x⟩ per input, from final parameters
    double mean_fidelity = 0.0;
};

/// One iteration of the learning loop, as seen by a trace observer.
/// Counts are taken after recording the outcome.
struct TraceRow {
    std::uint64_t iter;
    int input;
    int outcome;
    int success;
    int n0;
    int n1;
    int nt;
    int halted;
};

/// Per-input fidelities ⟨t_x|ρ_x|t_x⟩ of the reduced qubit-A state against the
/// target basis state, from noiseless output states at the given parameters.
inline std::array<double, 4> machine_fidelities(const BlochVector<4>& p1, const BlochVector<2>& p3,
                                                const MachineConfig& cfg) {
    const Matrix<4> u1 = unitary_from_parameters(p1);
    const Matrix<2> u3 = unitary_from_parameters(p3);
    std::array<double, 4> f;
    for (int i = 0; i < 4; ++i) {
        const BinaryFunction fn = binary_function(i);
        const Vector<4> psi = detail::output_state_from_unitaries(u1, fn, u3);
        const Matrix<2> rho_a = partial_trace_over_b(outer(psi));
        const Vector<2> target = Vector<2>::basis(target_outcome(fn, cfg));
        f[static_cast<std::size_t>(i)] = fidelity_pure_target(target, rho_a);
    }
    return f;
}

/// The learning loop, reporting each iteration (with post-update parameters)
/// to the observer. Fully deterministic given the seed. Draw order per trial:
/// 15+3 initial parameter components, then per iteration one input pick, one
/// measurement draw, and on failure 18 step components (or 15+3 fresh
/// parameters in baseline mode).
template <typename Observer>
inline TrialResult run_trial_observed(const MachineConfig& cfg, std::uint64_t seed, Observer&& observe) {
    cfg.validate();
    TrialRng rng(seed);

    BlochVector<4> p1;
    BlochVector<2> p3;
    if (cfg.initial_parameters) {
        p1 = cfg.initial_parameters->first;
        p3 = cfg.initial_parameters->second;
    } else {
        p1 = sample_parameters<4>(cfg.init_half_range, rng);
        p3 = sample_parameters<2>(cfg.init_half_range, rng);
    }

    Matrix<4> u1 = unitary_from_parameters(p1);
    Matrix<2> u3 = unitary_from_parameters(p3);

    std::array<int, 4> targets;
    for (int i = 0; i < 4; ++i) targets[static_cast<std::size_t>(i)] = target_outcome(binary_function(i), cfg);

    MemoryWindow mem(cfg.memory_size);
    TrialResult result;

    for (std::uint64_t n = 1; n <= cfg.max_iterations; ++n) {
        const int input = rng.uniform_pow2(4);
        const Vector<4> psi =
            detail::output_state_from_unitaries(u1, binary_function(input), u3);
        const int outcome = single_shot_measure_a(psi, rng);
        const int success = outcome == targets[static_cast<std::size_t>(input)] ? 1 : 0;
        mem.record(success);

        const MemoryWindow::Counts counts = mem.counts();
        const bool halted = mem.halt();
        if (!halted && !success) {
            if (cfg.baseline_mode) {
                p1 = sample_parameters<4>(cfg.init_half_range, rng);
                p3 = sample_parameters<2>(cfg.init_half_range, rng);
            } else {
                auto adjusted = adjust_parameters(p1, p3, counts, cfg.step_scale, rng);
                p1 = adjusted.first;
                p3 = adjusted.second;
            }
            u1 = unitary_from_parameters(p1);
            u3 = unitary_from_parameters(p3);
        }
        observe(TraceRow{n, input, outcome, success, counts.failures, counts.successes, counts.window,
                         halted ? 1 : 0},
                p1, p3);
        if (halted) {
            result.halted = true;
            result.halt_iteration = n;
            result.iterations_used = n;
            break;
        }
        result.iterations_used = n;
    }

    result.final_p1 = p1;
    result.final_p3 = p3;
    result.fidelities = machine_fidelities(p1, p3, cfg);
    result.mean_fidelity =
        (result.fidelities[0] + result.fidelities[1] + result.fidelities[2] + result.fidelities[3]) / 4.0;
    return result;
}

inline TrialResult run_trial(const MachineConfig& cfg, std::uint64_t seed) {
    return run_trial_observed(cfg, seed,
                              [](const TraceRow&, const BlochVector<4>&, const BlochVector<2>&) {});
}

} // namespace qlm
