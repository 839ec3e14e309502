#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "robin/report.hpp"
#include "robin/sweep.hpp"
#include "support.hpp"

using namespace robin;
using Catch::Approx;

TEST_CASE("comparison bound at pinned points", "[sweep]") {
    CHECK(comparison_bound(1.0, 0.1, 0.1) == 1.5);
    CHECK(comparison_bound(0.0, 0.5, 0.0) == 0.0);
    CHECK(comparison_bound(2.0, 0.0, 0.0) == 2.0);
    CHECK(comparison_bound(2.0, 1e-15, 1e-15) == Approx(2.0).margin(1e-13));

    // Degeneracy exactly at the norm-loss threshold, failure past it.
    CHECK(std::isinf(comparison_bound(1.0, 0.5, 0.0)));
    CHECK(comparison_bound(1.0, 0.5 - 1e-12, 0.0) > 1e9);
    CHECK_THROWS_AS(comparison_bound(1.0, 0.5 + 1e-12, 0.0), DeltaTooLarge);

    CHECK_THROWS_AS(comparison_bound(-1.0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(comparison_bound(-2.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("comparison bound grows with either defect", "[sweep]") {
    std::mt19937_64 rng(12601);
    std::uniform_real_distribution<double> ul(0.0, 10.0), u01(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const double lambda = ul(rng);
        const double d1 = 0.9 * u01(rng) / (1.0 + lambda);
        const double d2 = u01(rng);
        const double base = comparison_bound(lambda, d1, d2);
        CHECK(base >= lambda);
        CHECK(comparison_bound(lambda, d1 + 1e-6, d2) >= base - 1e-12);
        CHECK(comparison_bound(lambda, d1, d2 + 1e-6) >= base - 1e-12);
    }
}

TEST_CASE("rate fit recovers algebraic decay", "[sweep]") {
    std::vector<double> xs{1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
    std::vector<double> half, inv3;
    for (double x : xs) {
        half.push_back(1.0 / std::sqrt(x));
        inv3.push_back(3.0 / x);
    }
    auto f1 = fit_rate(xs, half);
    CHECK(f1.slope == Approx(-0.5).margin(1e-12));
    CHECK(f1.residual <= 1e-12);
    CHECK(f1.points == 6);

    auto f2 = fit_rate(xs, inv3);
    CHECK(f2.slope == Approx(-1.0).margin(1e-12));
    CHECK(f2.intercept == Approx(std::log(3.0)).margin(1e-12));
}

TEST_CASE("rate fit skips non-positive samples and validates input", "[sweep]") {
    std::vector<double> xs{1.0, 2.0, 3.0, 4.0, 5.0};
    auto f = fit_rate(xs, {1.0, 0.0, 0.5, -2.0, 0.25});
    CHECK(f.points == 3);  // zeros and negatives carry no rate information

    CHECK_THROWS_AS(fit_rate(xs, {1.0, 0.0, 0.0, 0.0, 0.5}), TooFewPoints);
    CHECK_THROWS_AS(fit_rate({1.0, 2.0}, {1.0, 1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(fit_rate({1.0, -2.0, 3.0}, {1.0, 1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(fit_rate({2.0, 2.0, 2.0}, {1.0, 2.0, 3.0}), TooFewPoints);
}

TEST_CASE("sweep configuration is validated up front", "[sweep]") {
    auto p = testsupport::equilateral_polygon();
    SweepConfig cfg;
    cfg.m_max = 1;
    cfg.refinements = 1;

    cfg.alphas = {};
    CHECK_THROWS_AS(run_sweep(p, cfg), std::invalid_argument);
    cfg.alphas = {8.0, 6.0};
    CHECK_THROWS_AS(run_sweep(p, cfg), std::invalid_argument);
    cfg.alphas = {-1.0, 6.0};
    CHECK_THROWS_AS(run_sweep(p, cfg), NonPositiveAlpha);
    cfg.alphas = {6.0, 8.0};
    cfg.refinements = 0;
    CHECK_THROWS_AS(run_sweep(p, cfg), std::invalid_argument);
    cfg.refinements = 1;
    cfg.m_max = 0;
    CHECK_THROWS_AS(run_sweep(p, cfg), std::invalid_argument);
    // First alpha must clear the model bracket for every requested mode.
    cfg.m_max = 1;
    cfg.alphas = {2.0, 8.0};
    CHECK_THROWS_AS(run_sweep(p, cfg), BracketInvalid);
}

TEST_CASE("two-sided sweep encloses the equilateral modes", "[sweep]") {
    auto p = testsupport::equilateral_polygon();
    SweepConfig cfg;
    cfg.alphas = {6.0, 8.0};
    cfg.m_max = 1;
    cfg.refinements = 1;

    auto rep = run_sweep(p, cfg);
    REQUIRE(rep.entries.size() == 2);
    for (std::size_t i = 0; i < rep.entries.size(); ++i) {
        const auto& e = rep.entries[i];
        CHECK(e.alpha == cfg.alphas[i]);
        CHECK(e.m == 1);
        // Nested trial spaces on the same mesh order the two routes.
        CHECK(e.e_neu <= e.e_dir + 1e-12);
        // Both routes inside the model bracket, up to pinned slacks.
        CHECK(e.e_neu >= e.lower - 1e-6);
        CHECK(e.mid() <= e.upper + e.eps_h);
        CHECK(e.bracket_ok);
        CHECK(e.eps_h > 0.0);
        // One bound state per alpha at m_max = 1.
        CHECK(rep.bound_state_counts.at(e.alpha) == 1);
    }
    CHECK(all_brackets_ok(rep));
    for (const auto& c : check_brackets(rep)) {
        CHECK(c.lower_ok);
        CHECK(c.upper_ok);
    }

    std::vector<double> alphas;
    auto rs = remainder_series(rep, 1, &alphas);
    REQUIRE(rs.size() == 2);
    CHECK(alphas == cfg.alphas);
    // The remainder shrinks with alpha.
    CHECK(rs[1] < rs[0]);

    // Violations are rediscovered when a record is doctored.
    auto doctored = rep;
    doctored.entries[0].e_neu = doctored.entries[0].lower - 1.0;
    auto checks = check_brackets(doctored);
    CHECK_FALSE(checks[0].lower_ok);
    CHECK(checks[1].lower_ok);

    BracketPolicy loose;
    loose.lower_slack = 10.0;
    CHECK(check_brackets(doctored, loose)[0].lower_ok);

    // Re-running the identical configuration reproduces the report bitwise.
    auto rep2 = run_sweep(p, cfg);
    std::ostringstream csv1, csv2;
    write_sweep_csv(csv1, rep);
    write_sweep_csv(csv2, rep2);
    CHECK(csv1.str() == csv2.str());
}

TEST_CASE("single-route sweep reports that route on both columns", "[sweep]") {
    auto p = testsupport::equilateral_polygon();
    SweepConfig cfg;
    cfg.alphas = {6.0};
    cfg.m_max = 1;
    cfg.refinements = 1;
    cfg.bc_mode = SweepBCMode::NeumannOnly;
    auto rep = run_sweep(p, cfg);
    REQUIRE(rep.entries.size() == 1);
    CHECK(rep.entries[0].e_dir == rep.entries[0].e_neu);
    CHECK(rep.entries[0].e_neu >= rep.entries[0].lower - 1e-6);
}
