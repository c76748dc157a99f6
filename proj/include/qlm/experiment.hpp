#pragma once

// Monte-Carlo ensembles over learning trials, learning/survival curves,
// exponential and power-law fits, fidelity statistics, memory-size sweeps
// and operator-Schmidt analysis of learned two-qubit unitaries.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

#include "qlm/learning.hpp"
#include "qlm/linalg.hpp"
#include "qlm/rng.hpp"

namespace qlm {

struct EnsembleResult {
    MachineConfig config;
    std::uint64_t master_seed = 0;
    std::vector<TrialResult> trials;

    int trial_count() const { return static_cast<int>(trials.size()); }
    int halted_count() const {
        int h = 0;
        for (const auto& t : trials) h += t.halted ? 1 : 0;
        return h;
    }
    double halt_fraction() const {
        return trials.empty() ? 0.0 : static_cast<double>(halted_count()) / static_cast<double>(trials.size());
    }
};

/// Runs trial_count independent trials; trial i is seeded with
/// mix_seed(master_seed, i). The result is ordered by trial index and does
/// not depend on the parallelism degree (0 = hardware concurrency).
inline EnsembleResult run_ensemble(const MachineConfig& cfg, int trial_count, std::uint64_t master_seed,
                                   unsigned parallelism = 0) {
    if (trial_count < 1) throw std::invalid_argument("run_ensemble: trial_count must be >= 1");
    cfg.validate();

    EnsembleResult ens;
    ens.config = cfg;
    ens.master_seed = master_seed;
    ens.trials.resize(static_cast<std::size_t>(trial_count));

    unsigned threads = parallelism == 0 ? std::thread::hardware_concurrency() : parallelism;
    threads = std::max(1u, std::min(threads, static_cast<unsigned>(trial_count)));

    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        try {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= trial_count) return;
                ens.trials[static_cast<std::size_t>(i)] = run_trial(cfg, mix_seed(master_seed, static_cast<std::uint64_t>(i)));
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return ens;
}

struct CurvePoint {
    std::uint64_t n;
    double learn_p;   // P(n): fraction of trials halted at or before n
    double survive_q; // Q(n) = 1 − P(n)
};

/// Learning/survival curve over n = 1..max observed halt iteration.
/// Censored trials never count as halted. Empty if no trial halted.
inline std::vector<CurvePoint> survival_curve(const EnsembleResult& ens) {
    if (ens.trials.empty()) throw std::invalid_argument("survival_curve: ensemble is empty");

    std::uint64_t max_halt = 0;
    for (const auto& t : ens.trials)
        if (t.halted) max_halt = std::max(max_halt, t.halt_iteration);

    std::vector<CurvePoint> curve;
    if (max_halt == 0) return curve;

    std::vector<std::uint64_t> halted_at(static_cast<std::size_t>(max_halt) + 1, 0);
    for (const auto& t : ens.trials)
        if (t.halted) ++halted_at[static_cast<std::size_t>(t.halt_iteration)];

    curve.reserve(static_cast<std::size_t>(max_halt));
    const double total = static_cast<double>(ens.trials.size());
    std::uint64_t cumulative = 0;
    for (std::uint64_t n = 1; n <= max_halt; ++n) {
        cumulative += halted_at[static_cast<std::size_t>(n)];
        const double p = static_cast<double>(cumulative) / total;
        curve.push_back(CurvePoint{n, p, 1.0 - p});
    }
    return curve;
}

enum class FitKind { Exponential, PowerLaw };

struct CurveFit {
    FitKind kind;
    double param1;    // n_c (exponential) or A (power law)
    double param2;    // intercept diagnostic (exponential) or D (power law)
    double r_squared;
    int points_used;
};

namespace detail {

struct LeastSquares {
    double slope;
    double intercept;
    double r_squared;
};

inline LeastSquares linear_least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw DegenerateFitError("least squares: all abscissae are equal");
    const double slope = sxy / sxx;
    const double ss_res = syy - slope * sxy;
    const double r2 = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
    return LeastSquares{slope, sy / n - slope * mx, r2};
}

} // namespace detail

/// Fits Q(n) = e^{−(n−1)/n_c} by ordinary least squares of ln Q against n−1,
/// using points with band_lo ≤ Q ≤ band_hi. n_c is taken from the slope; the
/// free intercept is reported as a diagnostic in param2.
inline CurveFit fit_exponential_survival(const std::vector<CurvePoint>& curve, double band_lo = 0.02,
                                         double band_hi = 0.98) {
    std::vector<double> x, y;
    bool any_decayed = false;
    for (const auto& pt : curve) {
        if (pt.survive_q < band_hi) any_decayed = true;
        if (pt.survive_q < band_lo || pt.survive_q > band_hi || pt.survive_q <= 0.0) continue;
        x.push_back(static_cast<double>(pt.n) - 1.0);
        y.push_back(std::log(pt.survive_q));
    }
    if (x.size() < 5) {
        if (!any_decayed)
            throw DegenerateFitError("fit_exponential_survival: survival never decays below the fitting band");
        throw TooFewPointsError("fit_exponential_survival: fewer than 5 points in the fitting band");
    }
    const detail::LeastSquares ls = detail::linear_least_squares(x, y);
    if (ls.slope >= 0.0)
        throw DegenerateFitError("fit_exponential_survival: non-negative slope, no exponential decay");
    return CurveFit{FitKind::Exponential, -1.0 / ls.slope, ls.intercept, ls.r_squared,
                    static_cast<int>(x.size())};
}

struct FidelityStats {
    double mean;
    double stddev;  // population standard deviation over halted trials
    int halted_trials;
};

/// Mean and standard deviation of mean_fidelity over halted trials only.
inline FidelityStats ensemble_fidelity(const EnsembleResult& ens) {
    std::vector<double> f;
    for (const auto& t : ens.trials)
        if (t.halted) f.push_back(t.mean_fidelity);
    if (f.empty()) throw std::invalid_argument("ensemble_fidelity: no halted trials");

    double mean = 0.0;
    for (double v : f) mean += v;
    mean /= static_cast<double>(f.size());
    double var = 0.0;
    for (double v : f) var += (v - mean) * (v - mean);
    var /= static_cast<double>(f.size());
    return FidelityStats{mean, std::sqrt(var), static_cast<int>(f.size())};
}

/// Operator-Schmidt coefficients of a two-qubit unitary: singular values of
/// the A|B reshuffling R(2a₁+a₂, 2b₁+b₂) = U(2a₁+b₁, 2a₂+b₂), descending.
/// Σσ² = 4 for unitary U; product_score = σ₁²/4 equals 1 iff U = A⊗B.
struct SchmidtResult {
    std::array<double, 4> coefficients;
    double product_score;
};

inline SchmidtResult operator_schmidt(const Matrix<4>& u) {
    if (!is_unitary(u, 1e-10)) throw std::invalid_argument("operator_schmidt: input is not unitary");

    Matrix<4> r;
    for (int a1 = 0; a1 < 2; ++a1)
        for (int a2 = 0; a2 < 2; ++a2)
            for (int b1 = 0; b1 < 2; ++b1)
                for (int b2 = 0; b2 < 2; ++b2)
                    r(2 * a1 + a2, 2 * b1 + b2) = u(2 * a1 + b1, 2 * a2 + b2);

    // Singular values via the spectrum of R†R.
    const EigResult<4> eig = hermitian_eigendecomposition(r.dagger() * r);
    SchmidtResult out{};
    for (int k = 0; k < 4; ++k)
        out.coefficients[static_cast<std::size_t>(k)] = std::sqrt(std::max(0.0, eig.values[static_cast<std::size_t>(3 - k)]));
    out.product_score = out.coefficients[0] * out.coefficients[0] / 4.0;
    return out;
}

struct SweepRow {
    int memory_size;
    int trials;
    double halt_fraction;
    double fidelity_mean;          // NaN when no trial halted
    double fidelity_std;           // NaN when no trial halted
    double n_c;                    // NaN when the row is unreliable
    double n_c_r2;                 // NaN when the row is unreliable
    double product_score_median;   // NaN when no trial halted
    bool n_c_reliable;
};

struct SweepResult {
    std::uint64_t master_seed = 0;
    int trials_per_point = 0;
    std::vector<SweepRow> rows;
};

namespace detail {

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace detail

/// One ensemble per memory size, each with an independently derived master
/// seed mix_seed(master_seed, k). A row's n_c is reliable only when at least
/// min_halt_fraction of its trials halted and the exponential fit succeeds.
inline SweepResult memory_sweep(const MachineConfig& base_cfg, const std::vector<int>& n_list,
                                int trial_count, std::uint64_t master_seed, unsigned parallelism = 0,
                                double min_halt_fraction = 0.8) {
    if (n_list.empty()) throw std::invalid_argument("memory_sweep: n_list is empty");
    for (std::size_t k = 1; k < n_list.size(); ++k)
        if (n_list[k] <= n_list[k - 1]) throw std::invalid_argument("memory_sweep: n_list must be ascending");

    SweepResult sweep;
    sweep.master_seed = master_seed;
    sweep.trials_per_point = trial_count;

    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = 0; k < n_list.size(); ++k) {
        MachineConfig cfg = base_cfg;
        cfg.memory_size = n_list[k];
        const EnsembleResult ens =
            run_ensemble(cfg, trial_count, mix_seed(master_seed, static_cast<std::uint64_t>(k)), parallelism);

        SweepRow row{};
        row.memory_size = n_list[k];
        row.trials = trial_count;
        row.halt_fraction = ens.halt_fraction();
        row.fidelity_mean = nan;
        row.fidelity_std = nan;
        row.n_c = nan;
        row.n_c_r2 = nan;
        row.product_score_median = nan;
        row.n_c_reliable = false;

        if (ens.halted_count() > 0) {
            const FidelityStats fs = ensemble_fidelity(ens);
            row.fidelity_mean = fs.mean;
            row.fidelity_std = fs.stddev;

            std::vector<double> scores;
            scores.reserve(static_cast<std::size_t>(ens.halted_count()));
            for (const auto& t : ens.trials)
                if (t.halted)
                    scores.push_back(operator_schmidt(unitary_from_parameters(t.final_p1)).product_score);
            row.product_score_median = detail::median(std::move(scores));
        }

        if (row.halt_fraction >= min_halt_fraction) {
            try {
                const CurveFit fit = fit_exponential_survival(survival_curve(ens));
                row.n_c = fit.param1;
                row.n_c_r2 = fit.r_squared;
                row.n_c_reliable = true;
            } catch (const std::exception&) {
                // degenerate or under-sampled decay: row stays unreliable
            }
        }
        sweep.rows.push_back(row);
    }
    return sweep;
}

/// Fits n_c = A·N^D by least squares of log₁₀(n_c) against log₁₀(N).
inline CurveFit fit_power_law(const std::vector<std::pair<double, double>>& n_vs_nc) {
    std::vector<double> x, y;
    for (const auto& [n, nc] : n_vs_nc) {
        if (!(n > 0.0) || !(nc > 0.0) || !std::isfinite(nc)) continue;
        x.push_back(std::log10(n));
        y.push_back(std::log10(nc));
    }
    if (x.size() < 3) throw TooFewPointsError("fit_power_law: fewer than 3 valid (N, n_c) points");
    const detail::LeastSquares ls = detail::linear_least_squares(x, y);
    return CurveFit{FitKind::PowerLaw, std::pow(10.0, ls.intercept), ls.slope, ls.r_squared,
                    static_cast<int>(x.size())};
}

inline CurveFit fit_power_law(const SweepResult& sweep) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : sweep.rows)
        if (row.n_c_reliable) pts.emplace_back(static_cast<double>(row.memory_size), row.n_c);
    return fit_power_law(pts);
}

} // namespace qlm
