#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <utility>
#include <vector>

#include "qlm/experiment.hpp"
#include "test_support.hpp"

using namespace qlm;

namespace {

MachineConfig quick_config(int memory, std::uint64_t max_iter) {
    MachineConfig cfg;
    cfg.memory_size = memory;
    cfg.max_iterations = max_iter;
    return cfg;
}

bool same_trial(const TrialResult& a, const TrialResult& b) {
    if (a.halted != b.halted || a.halt_iteration != b.halt_iteration ||
        a.iterations_used != b.iterations_used || a.mean_fidelity != b.mean_fidelity)
        return false;
    for (int i = 0; i < 15; ++i)
        if (a.final_p1[i] != b.final_p1[i]) return false;
    for (int i = 0; i < 3; ++i)
        if (a.final_p3[i] != b.final_p3[i]) return false;
    for (std::size_t i = 0; i < 4; ++i)
        if (a.fidelities[i] != b.fidelities[i]) return false;
    return true;
}

std::vector<CurvePoint> synthetic_exponential(double n_c, std::uint64_t n_max) {
    std::vector<CurvePoint> curve;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        const double q = std::exp(-(static_cast<double>(n) - 1.0) / n_c);
        curve.push_back(CurvePoint{n, 1.0 - q, q});
    }
    return curve;
}

} // namespace

TEST_CASE("run_ensemble is deterministic and independent of parallelism") {
    const MachineConfig cfg = quick_config(5, 20000);
    const EnsembleResult serial = run_ensemble(cfg, 10, 4321, 1);
    const EnsembleResult parallel = run_ensemble(cfg, 10, 4321, 8);

    REQUIRE(serial.trial_count() == 10);
    REQUIRE(parallel.trial_count() == 10);
    for (int i = 0; i < 10; ++i)
        REQUIRE(same_trial(serial.trials[static_cast<std::size_t>(i)],
                           parallel.trials[static_cast<std::size_t>(i)]));

    // Trial i is exactly run_trial with the derived seed.
    const TrialResult direct = run_trial(cfg, mix_seed(4321, 3));
    REQUIRE(same_trial(serial.trials[3], direct));
}

TEST_CASE("run_ensemble validates the trial count") {
    CHECK_THROWS_AS(run_ensemble(quick_config(5, 1000), 0, 1), std::invalid_argument);
}

TEST_CASE("an ensemble at the reference point halts every trial at N") {
    MachineConfig cfg = quick_config(7, 1000);
    cfg.initial_parameters = qlm_test::deutsch_point();
    const EnsembleResult ens = run_ensemble(cfg, 20, 9);

    REQUIRE(ens.halted_count() == 20);
    for (const auto& t : ens.trials) REQUIRE(t.halt_iteration == 7);

    const std::vector<CurvePoint> curve = survival_curve(ens);
    REQUIRE(curve.size() == 7);
    for (const auto& pt : curve) {
        if (pt.n < 7) {
            CHECK(pt.learn_p == 0.0);
            CHECK(pt.survive_q == 1.0);
        } else {
            CHECK(pt.learn_p == 1.0);
        }
    }
}

TEST_CASE("survival curve is monotone, gapless and complementary") {
    const MachineConfig cfg = quick_config(6, 100000);
    const EnsembleResult ens = run_ensemble(cfg, 60, 2718);
    REQUIRE(ens.halted_count() > 0);

    const std::vector<CurvePoint> curve = survival_curve(ens);
    for (std::size_t i = 0; i < curve.size(); ++i) {
        REQUIRE(curve[i].n == i + 1);
        REQUIRE(curve[i].learn_p + curve[i].survive_q == 1.0);
        if (curve[i].n < 6) REQUIRE(curve[i].survive_q == 1.0);
        if (i > 0) REQUIRE(curve[i].survive_q <= curve[i - 1].survive_q);
    }
}

TEST_CASE("exponential fit recovers synthetic decay constants") {
    SECTION("n_c = 50") {
        const CurveFit fit = fit_exponential_survival(synthetic_exponential(50.0, 200));
        CHECK(fit.kind == FitKind::Exponential);
        CHECK(std::abs(fit.param1 - 50.0) < 1e-6);
        CHECK(fit.r_squared == Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("n_c = 1000") {
        const CurveFit fit = fit_exponential_survival(synthetic_exponential(1000.0, 5000));
        CHECK(std::abs(fit.param1 - 1000.0) / 1000.0 < 1e-6);
    }
}

TEST_CASE("exponential fit error taxonomy") {
    // Flat survival: no decay at all.
    std::vector<CurvePoint> flat;
    for (std::uint64_t n = 1; n <= 50; ++n) flat.push_back(CurvePoint{n, 0.0, 1.0});
    CHECK_THROWS_AS(fit_exponential_survival(flat), DegenerateFitError);

    // Decay present but too few points inside the band.
    std::vector<CurvePoint> sparse;
    sparse.push_back(CurvePoint{1, 0.0, 1.0});
    sparse.push_back(CurvePoint{2, 0.5, 0.5});
    sparse.push_back(CurvePoint{3, 0.6, 0.4});
    sparse.push_back(CurvePoint{4, 0.7, 0.3});
    sparse.push_back(CurvePoint{5, 0.999, 0.001});
    CHECK_THROWS_AS(fit_exponential_survival(sparse), TooFewPointsError);

    // Growing "survival": non-negative slope.
    std::vector<CurvePoint> growing;
    for (std::uint64_t n = 1; n <= 10; ++n) {
        const double q = 0.1 + 0.05 * static_cast<double>(n);
        growing.push_back(CurvePoint{n, 1.0 - q, q});
    }
    CHECK_THROWS_AS(fit_exponential_survival(growing), DegenerateFitError);
}

TEST_CASE("ensemble fidelity statistics") {
    MachineConfig cfg = quick_config(5, 1000);
    cfg.initial_parameters = qlm_test::deutsch_point();
    const EnsembleResult ens = run_ensemble(cfg, 10, 77);

    const FidelityStats fs = ensemble_fidelity(ens);
    CHECK(fs.mean > 1.0 - 1e-9);
    CHECK(fs.stddev < 1e-9);
    CHECK(fs.halted_trials == 10);

    // A single halted trial has zero spread.
    EnsembleResult one;
    one.config = cfg;
    one.trials.push_back(ens.trials[0]);
    const FidelityStats single = ensemble_fidelity(one);
    CHECK(single.stddev == 0.0);
    CHECK(single.mean >= 0.0);
    CHECK(single.mean <= 1.0);

    // No halted trials is an error.
    EnsembleResult none;
    none.config = cfg;
    none.trials.push_back(TrialResult{});
    CHECK_THROWS_AS(ensemble_fidelity(none), std::invalid_argument);
}

TEST_CASE("memory sweep rows carry their configuration") {
    MachineConfig cfg = quick_config(5, 1000);
    cfg.initial_parameters = qlm_test::deutsch_point();

    const SweepResult sweep = memory_sweep(cfg, {10}, 12, 2024);
    REQUIRE(sweep.rows.size() == 1);
    CHECK(sweep.rows[0].memory_size == 10);
    CHECK(sweep.rows[0].trials == 12);
    CHECK(sweep.rows[0].halt_fraction == 1.0);
    CHECK(sweep.rows[0].fidelity_mean > 1.0 - 1e-9);
    // Every trial halts at exactly N, so the survival curve never enters the
    // fitting band and the n_c column is marked unreliable.
    CHECK_FALSE(sweep.rows[0].n_c_reliable);
    CHECK(std::isnan(sweep.rows[0].n_c));

    CHECK_THROWS_AS(memory_sweep(cfg, {}, 12, 2024), std::invalid_argument);
    CHECK_THROWS_AS(memory_sweep(cfg, {10, 10}, 12, 2024), std::invalid_argument);
}

TEST_CASE("power-law fit recovers synthetic and published constants") {
    SECTION("synthetic A = 0.1, D = 3.5") {
        std::vector<std::pair<double, double>> pts;
        for (const double n : {10.0, 20.0, 40.0, 80.0}) pts.emplace_back(n, 0.1 * std::pow(n, 3.5));
        const CurveFit fit = fit_power_law(pts);
        CHECK(fit.kind == FitKind::PowerLaw);
        CHECK(std::abs(fit.param1 - 0.1) < 1e-9);
        CHECK(std::abs(fit.param2 - 3.5) < 1e-9);
        CHECK(fit.r_squared == Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("regression sanity: D = 3.46, A = 10^-1.06") {
        const double a = std::pow(10.0, -1.06);
        std::vector<std::pair<double, double>> pts;
        for (const double n : {50.0, 100.0, 150.0, 200.0, 250.0, 300.0})
            pts.emplace_back(n, a * std::pow(n, 3.46));
        const CurveFit fit = fit_power_law(pts);
        CHECK(std::abs(fit.param2 - 3.46) < 1e-9);
        CHECK(std::abs(fit.param1 - a) / a < 1e-9);
    }
    SECTION("two points are not enough") {
        std::vector<std::pair<double, double>> pts = {{10.0, 100.0}, {20.0, 800.0}};
        CHECK_THROWS_AS(fit_power_law(pts), TooFewPointsError);
    }
}

TEST_CASE("operator Schmidt analysis") {
    SECTION("H ⊗ H is a product operator") {
        const Matrix<2> h = hadamard();
        const SchmidtResult res = operator_schmidt(tensor_product(h, h));
        CHECK(res.coefficients[0] == Catch::Approx(2.0).margin(1e-10));
        for (int k = 1; k < 4; ++k)
            CHECK(std::abs(res.coefficients[static_cast<std::size_t>(k)]) < 1e-10);
        CHECK(res.product_score == Catch::Approx(1.0).margin(1e-10));
    }
    SECTION("controlled-NOT has two equal coefficients") {
        const Matrix<4> cnot = oracle_unitary(binary_function(1));
        const SchmidtResult res = operator_schmidt(cnot);
        const double root2 = std::sqrt(2.0);
        CHECK(res.coefficients[0] == Catch::Approx(root2).margin(1e-10));
        CHECK(res.coefficients[1] == Catch::Approx(root2).margin(1e-10));
        CHECK(std::abs(res.coefficients[2]) < 1e-10);
        CHECK(std::abs(res.coefficients[3]) < 1e-10);
        CHECK(res.product_score == Catch::Approx(0.5).margin(1e-10));
    }
    SECTION("random one-qubit products score 1") {
        TrialRng rng(8);
        for (int i = 0; i < 50; ++i) {
            const Matrix<4> u = tensor_product(qlm_test::random_su2(rng), qlm_test::random_su2(rng));
            CHECK(operator_schmidt(u).product_score > 1.0 - 1e-9);
        }
    }
    SECTION("coefficients always satisfy the sum rule") {
        TrialRng rng(21);
        for (int i = 0; i < 50; ++i) {
            BlochVector<4> p;
            for (int a = 0; a < 15; ++a) p[a] = rng.uniform(-3.14, 3.14);
            const SchmidtResult res = operator_schmidt(unitary_from_parameters(p));
            double sum = 0.0;
            for (double c : res.coefficients) sum += c * c;
            REQUIRE(std::abs(sum - 4.0) < 1e-9);
            for (int k = 1; k < 4; ++k)
                REQUIRE(res.coefficients[static_cast<std::size_t>(k - 1)] >=
                        res.coefficients[static_cast<std::size_t>(k)]);
        }
    }
    SECTION("non-unitary input is rejected") {
        Matrix<4> m;
        m(0, 0) = cplx{2.0, 0.0};
        CHECK_THROWS_AS(operator_schmidt(m), std::invalid_argument);
    }
}
