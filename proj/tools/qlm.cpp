// Command-line front end: run trials, ensembles and memory-size sweeps,
// fit result curves, and verify the reference Deutsch circuit.
//
// Exit codes: 0 success, 1 validation error (bad flags, bad input data),
// 2 numerical or I/O failure.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qlm/qlm.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::optional<int> memory_size;
    std::optional<double> step_scale;
    std::optional<double> init_half_range;
    std::optional<std::uint64_t> max_iterations;
    std::optional<int> trials;
    std::optional<std::uint64_t> master_seed;
    std::optional<std::string> n_list_text;
    std::optional<std::string> out_path;
    bool baseline = false;
    unsigned threads = 0;
};

void add_common_flags(CLI::App& cmd, CommonFlags& flags, bool with_trials, bool with_nlist) {
    cmd.add_option("--config", flags.config_path, "Config file (key = value lines, # comments)");
    cmd.add_option("--memory,-N", flags.memory_size, "Memory size N (success/failure bits)");
    cmd.add_option("--step", flags.step_scale, "Half-range of each random step component (radians)");
    cmd.add_option("--init-range", flags.init_half_range, "Half-range of initial parameters (radians)");
    cmd.add_option("--max-iter", flags.max_iterations, "Iteration cap per trial");
    cmd.add_option("--seed", flags.master_seed, "Master seed");
    cmd.add_option("--out,-o", flags.out_path, "Output CSV path");
    cmd.add_flag("--baseline", flags.baseline, "No-memory baseline: fresh random parameters on every failure");
    cmd.add_option("--threads", flags.threads, "Worker threads (0 = hardware concurrency)");
    if (with_trials) cmd.add_option("--trials", flags.trials, "Number of Monte-Carlo trials");
    if (with_nlist) cmd.add_option("--nlist", flags.n_list_text, "Comma-separated ascending memory sizes");
}

qlm::RunConfiguration merge_configuration(const CLI::App& cmd, const CommonFlags& flags,
                                          const std::string& default_out) {
    qlm::RunConfiguration cfg;
    cfg.out_path = default_out;
    if (!flags.config_path.empty()) qlm::load_config_file(cfg, flags.config_path);
    if (flags.memory_size) cfg.memory_size = *flags.memory_size;
    if (flags.step_scale) cfg.step_scale = *flags.step_scale;
    if (flags.init_half_range) cfg.init_half_range = *flags.init_half_range;
    if (flags.max_iterations) cfg.max_iterations = *flags.max_iterations;
    if (flags.trials) cfg.trials = *flags.trials;
    if (flags.master_seed) cfg.master_seed = *flags.master_seed;
    if (flags.n_list_text) cfg.n_list = qlm::parse_n_list(*flags.n_list_text);
    if (flags.out_path) cfg.out_path = *flags.out_path;
    if (cmd.count("--baseline") > 0) cfg.baseline_mode = flags.baseline;
    cfg.validate();
    return cfg;
}

int cmd_run(const qlm::RunConfiguration& cfg, const std::string& trace_path) {
    std::vector<qlm::TraceRow> trace;
    const std::uint64_t trial_seed = qlm::mix_seed(cfg.master_seed, 0);

    qlm::TrialResult result;
    if (trace_path.empty()) {
        result = qlm::run_trial(cfg.machine(), trial_seed);
    } else {
        result = qlm::run_trial_observed(
            cfg.machine(), trial_seed,
            [&trace](const qlm::TraceRow& row, const qlm::BlochVector<4>&, const qlm::BlochVector<2>&) {
                trace.push_back(row);
            });
        qlm::write_trace_csv(trace_path, trace);
    }

    if (result.halted)
        std::printf("halted at iteration %" PRIu64 " (memory %d)\n", result.halt_iteration, cfg.memory_size);
    else
        std::printf("censored at iteration cap %" PRIu64 " (memory %d)\n", result.iterations_used,
                    cfg.memory_size);
    std::printf("fidelities: %.12g %.12g %.12g %.12g  mean %.12g\n", result.fidelities[0],
                result.fidelities[1], result.fidelities[2], result.fidelities[3], result.mean_fidelity);
    if (!trace_path.empty())
        std::printf("trace written to %s (%zu rows)\n", trace_path.c_str(), trace.size());
    return 0;
}

int cmd_mc(const qlm::RunConfiguration& cfg, unsigned threads) {
    const qlm::EnsembleResult ens = qlm::run_ensemble(cfg.machine(), cfg.trials, cfg.master_seed, threads);
    const std::vector<qlm::CurvePoint> curve = qlm::survival_curve(ens);
    qlm::write_curve_csv(cfg.out_path, curve);

    std::printf("trials %d, halted %d (halt fraction %.6g)\n", ens.trial_count(), ens.halted_count(),
                ens.halt_fraction());
    if (ens.halted_count() > 0) {
        const qlm::FidelityStats fs = qlm::ensemble_fidelity(ens);
        std::printf("fidelity over halted trials: mean %.12g, std %.12g\n", fs.mean, fs.stddev);
    }
    std::printf("curve written to %s (%zu rows)\n", cfg.out_path.c_str(), curve.size());
    return 0;
}

int cmd_sweep(const qlm::RunConfiguration& cfg, unsigned threads) {
    const qlm::SweepResult sweep =
        qlm::memory_sweep(cfg.machine(), cfg.n_list, cfg.trials, cfg.master_seed, threads);
    qlm::write_sweep_csv(cfg.out_path, sweep);
    for (const auto& row : sweep.rows)
        std::printf("N %d: halt fraction %.6g, fidelity %.6g +- %.6g, n_c %.6g (R2 %.6g), product score %.6g\n",
                    row.memory_size, row.halt_fraction, row.fidelity_mean, row.fidelity_std, row.n_c,
                    row.n_c_r2, row.product_score_median);
    std::printf("sweep written to %s (%zu rows)\n", cfg.out_path.c_str(), sweep.rows.size());
    return 0;
}

int cmd_analyze(const std::string& in_path, const std::string& out_path) {
    const qlm::CurveFit fit = qlm::analyze_csv(in_path);
    qlm::write_fit_csv(out_path, fit);
    if (fit.kind == qlm::FitKind::Exponential)
        std::printf("exponential fit: n_c %.12g, intercept %.12g, R2 %.12g, points %d\n", fit.param1,
                    fit.param2, fit.r_squared, fit.points_used);
    else
        std::printf("power-law fit: A %.12g, D %.12g, R2 %.12g, points %d\n", fit.param1, fit.param2,
                    fit.r_squared, fit.points_used);
    std::printf("fit written to %s\n", out_path.c_str());
    return 0;
}

int cmd_deutsch_check() {
    bool all_pass = true;
    for (int i = 0; i < 4; ++i) {
        const qlm::BinaryFunction f = qlm::binary_function(i);
        const int expected = qlm::label_of(f) == qlm::TaskLabel::Constant ? 0 : 1;
        const qlm::ReferenceOutcome ref = qlm::reference_deutsch_outcome(f);
        const double p_target =
            expected == 0 ? qlm::prob_a_zero(ref.state) : 1.0 - qlm::prob_a_zero(ref.state);
        const bool pass = ref.outcome == expected && p_target >= 1.0 - 1e-12;
        std::printf("%s input=%d expected=%d outcome=%d p=%.15f\n", pass ? "PASS" : "FAIL", i, expected,
                    ref.outcome, p_target);
        all_pass = all_pass && pass;
    }
    if (!all_pass) {
        std::fprintf(stderr, "deutsch-check: reference circuit is not deterministic\n");
        return 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qlm: a quantum learning machine that learns Deutsch's task by trial and error"};
    app.require_subcommand(1);

    CommonFlags run_flags, mc_flags, sweep_flags;
    std::string trace_path;
    std::string analyze_in, analyze_out = "fit.csv";

    CLI::App* run_cmd = app.add_subcommand("run", "Run a single learning trial");
    add_common_flags(*run_cmd, run_flags, false, false);
    run_cmd->add_option("--trace", trace_path, "Write a per-iteration trace CSV to this path");

    CLI::App* mc_cmd = app.add_subcommand("mc", "Monte-Carlo ensemble; writes the survival-curve CSV");
    add_common_flags(*mc_cmd, mc_flags, true, false);

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Memory-size sweep; writes the sweep CSV");
    add_common_flags(*sweep_cmd, sweep_flags, true, true);

    CLI::App* analyze_cmd = app.add_subcommand("analyze", "Fit a curve or sweep CSV; writes the fit CSV");
    analyze_cmd->add_option("input", analyze_in, "Curve or sweep CSV to fit")->required();
    analyze_cmd->add_option("--out,-o", analyze_out, "Output fit CSV path");

    app.add_subcommand("deutsch-check", "Verify the reference Deutsch circuit is deterministic");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "%s\nRun with --help for usage.\n", e.what());
        return 1;
    }

    try {
        if (app.got_subcommand("run"))
            return cmd_run(merge_configuration(*run_cmd, run_flags, ""), trace_path);
        if (app.got_subcommand("mc"))
            return cmd_mc(merge_configuration(*mc_cmd, mc_flags, "curve.csv"), mc_flags.threads);
        if (app.got_subcommand("sweep"))
            return cmd_sweep(merge_configuration(*sweep_cmd, sweep_flags, "sweep.csv"), sweep_flags.threads);
        if (app.got_subcommand("analyze")) return cmd_analyze(analyze_in, analyze_out);
        if (app.got_subcommand("deutsch-check")) return cmd_deutsch_check();
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
