#include "doctest.h"

#include <cmath>
#include <sstream>

#include "ionqec/estimator.hpp"

using namespace ionqec;

namespace {
NoiseParams clean_params() {
    NoiseParams np;
    np.p_1q = np.p_ms = np.p_sp = np.p_m = np.p_sg = 0;
    np.idle_noise = false;
    return np;
}
}  // namespace

TEST_CASE("monte carlo on a noiseless experiment") {
    SteaneExperiment exp(Basis::Plus, clean_params(), BackendKind::Tableau);
    LogicalErrorEstimate est = monte_carlo(exp, 2000, 42);
    CHECK(est.p_log == 0.0);
    CHECK(est.err == 0.0);
    CHECK(est.n_samples == 2000);
}

TEST_CASE("binomial error bar formula") {
    NoiseParams np = clean_params();
    np.p_ms = 0.05;
    SteaneExperiment exp(Basis::Plus, np, BackendKind::Tableau);
    LogicalErrorEstimate est = monte_carlo(exp, 5000, 7);
    CHECK(est.n_failures > 0);
    CHECK(est.err == doctest::Approx(std::sqrt(est.p_log * (1 - est.p_log) / 5000)).epsilon(1e-12));
    // reference point of the formula itself: p = 0.5, n = 100 -> err = 0.05
    CHECK(std::sqrt(0.5 * 0.5 / 100.0) == doctest::Approx(0.05));
}

TEST_CASE("results are worker count invariant") {
    NoiseParams np = clean_params();
    np.p_ms = 0.02;
    SteaneExperiment exp(Basis::Plus, np, BackendKind::Tableau);
    LogicalErrorEstimate a = monte_carlo(exp, 4000, 99, 1);
    LogicalErrorEstimate b = monte_carlo(exp, 4000, 99, 2);
    LogicalErrorEstimate c = monte_carlo(exp, 4000, 99, 3);
    CHECK(a.n_failures == b.n_failures);
    CHECK(a.n_failures == c.n_failures);
}

TEST_CASE("adaptive sampling") {
    SUBCASE("already converged after the first batch") {
        NoiseParams np = clean_params();
        np.p_ms = 0.2;  // large failure rate
        SteaneExperiment exp(Basis::Plus, np, BackendKind::Tableau);
        LogicalErrorEstimate est = adaptive_sample(exp, 0.5, 0.0, 100000, 5, 0, 2048);
        CHECK(est.n_samples == 2048);
        CHECK_FALSE(est.cap_hit);
    }
    SUBCASE("zero failures hit the cap and report the rule of three") {
        SteaneExperiment exp(Basis::Plus, clean_params(), BackendKind::Tableau);
        LogicalErrorEstimate est = adaptive_sample(exp, 0.1, 0.0, 8192, 5, 0, 4096);
        CHECK(est.cap_hit);
        CHECK(est.p_log == 0.0);
        CHECK(est.err == doctest::Approx(3.0 / 8192.0));
    }
    SUBCASE("cap must stay within bounds") {
        SteaneExperiment exp(Basis::Plus, clean_params(), BackendKind::Tableau);
        CHECK_THROWS(adaptive_sample(exp, 0.1, 0.0, 200000001ULL, 5));
    }
}

TEST_CASE("path enumeration") {
    SUBCASE("no crosstalk: exactly zero failure probability, weights sum to 1") {
        NoiseParams np = clean_params();
        np.crosstalk_mode = CrosstalkMode::EntanglingCoherent;
        np.p_c = 0.0;
        SteaneExperiment exp(Basis::Plus, np, BackendKind::Paths);
        double wsum = 0;
        uint64_t leaves = 0;
        double p = enumerate_paths(exp, &wsum, &leaves);
        CHECK(p == 0.0);
        CHECK(wsum == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(leaves >= 1);
    }
    SUBCASE("rejects stochastic noise") {
        NoiseParams np = clean_params();
        np.p_ms = 1e-3;
        SteaneExperiment exp(Basis::Plus, np, BackendKind::Dense);
        CHECK_THROWS_AS(enumerate_paths(exp), std::invalid_argument);
    }
    SUBCASE("agrees with dense Monte Carlo on a coherent-only model") {
        NoiseParams np = clean_params();
        np.crosstalk_mode = CrosstalkMode::EntanglingCoherent;
        np.p_c = 1e-3;
        SteaneExperiment paths_exp(Basis::Plus, np, BackendKind::Paths);
        double wsum = 0;
        double exact = enumerate_paths(paths_exp, &wsum);
        CHECK(wsum == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(exact > 0.0);

        SteaneExperiment mc_exp(Basis::Plus, np, BackendKind::Dense);
        const uint64_t n = 20000;
        LogicalErrorEstimate mc = monte_carlo(mc_exp, n, 1234);
        double sigma = std::sqrt(std::max(exact * (1 - exact) / n, 1e-12));
        CHECK(std::abs(mc.p_log - exact) < 4 * sigma);
    }
}

TEST_CASE("log grid and slope helpers") {
    auto g = log_grid(1e-5, 1e-3, 4);
    CHECK(g.front() == doctest::Approx(1e-5));
    CHECK(g.back() == doctest::Approx(1e-3));
    CHECK(g.size() >= 9);
    std::vector<double> x = {1e-5, 1e-4, 1e-3}, y;
    for (double v : x) y.push_back(7.0 * v);
    CHECK(loglog_slope(x, y) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS(log_grid(0.0, 1.0, 4));
    CHECK_THROWS(loglog_slope({1.0}, {1.0}));
}

TEST_CASE("pseudo-threshold interpolation") {
    auto mk = [](double axis, double p) {
        SweepPoint pt;
        pt.axis_value = axis;
        pt.estimate.p_log = p;
        return pt;
    };
    // floor at 1e-4 then quadratic: crossings near the floor and near 3e-3
    std::vector<SweepPoint> pts = {
        mk(1e-4, 1.5e-4), mk(3e-4, 1.6e-4), mk(1e-3, 4e-4), mk(3e-3, 3e-3), mk(1e-2, 3e-2),
    };
    auto th = pseudo_threshold_from_points(pts);
    REQUIRE(th.has_value());
    CHECK(*th == doctest::Approx(3e-3).epsilon(0.2));

    // monotone above the diagonal: no crossing
    std::vector<SweepPoint> above = {mk(1e-4, 2e-3), mk(1e-3, 4e-3), mk(1e-2, 4e-2)};
    CHECK_FALSE(pseudo_threshold_from_points(above).has_value());
}

TEST_CASE("sweep output and reproducibility") {
    NoiseParams np = clean_params();
    np.p_ms = 1e-3;
    std::vector<double> grid = {5e-3, 2e-2};
    SweepResult r1 = sweep(SweepAxis::PMs, grid, Basis::Plus, np, BackendKind::Tableau, 3000, 77, 2);
    SweepResult r2 = sweep(SweepAxis::PMs, grid, Basis::Plus, np, BackendKind::Tableau, 3000, 77, 1);
    REQUIRE(r1.points.size() == 2);
    CHECK(r1.points[0].estimate.n_failures == r2.points[0].estimate.n_failures);
    CHECK(r1.points[1].estimate.n_failures == r2.points[1].estimate.n_failures);

    std::ostringstream csv1, csv2;
    write_sweep_csv(csv1, r1, 77);
    write_sweep_csv(csv2, r2, 77);
    CHECK(csv1.str() == csv2.str());
    CHECK(csv1.str().find("# ionqec sweep") == 0);
    CHECK(csv1.str().find("config_hash") != std::string::npos);
    CHECK(csv1.str().find("p_ms,p_log,err,n_samples") == 0 + csv1.str().find("p_ms,"));

    CHECK_THROWS(sweep(SweepAxis::PMs, {}, Basis::Plus, np, BackendKind::Tableau, 10, 1));
}

TEST_CASE("config hash is stable and content sensitive") {
    CHECK(config_hash("abc") == config_hash("abc"));
    CHECK(config_hash("abc") != config_hash("abd"));
    CHECK(config_hash("x").size() == 16);
}

TEST_CASE("tableau and dense backends agree statistically") {
    NoiseParams np = clean_params();
    np.p_ms = 5e-3;
    np.p_sp = np.p_m = 1e-3;
    SteaneExperiment tab(Basis::Plus, np, BackendKind::Tableau);
    SteaneExperiment den(Basis::Plus, np, BackendKind::Dense);
    const uint64_t nt = 100000, nd = 8000;
    LogicalErrorEstimate a = monte_carlo(tab, nt, 10);
    LogicalErrorEstimate b = monte_carlo(den, nd, 11);
    double sigma = std::sqrt(a.err * a.err + b.err * b.err);
    CHECK(std::abs(a.p_log - b.p_log) < 3.5 * sigma);
}
