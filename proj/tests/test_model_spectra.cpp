#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "robin/model_spectra.hpp"
#include "robin/synthetic.hpp"
#include "support.hpp"

using namespace robin;
using Catch::Approx;

namespace {

// Independent reference for the merged direct-sum spectrum: enumerate every
// (side, mode) pair whose value can possibly land in the first `count`, sort
// with the same tie order, truncate. Candidate values go through
// interval_eigenvalue so the comparison below can demand bitwise equality.
ModelSpectrum brute_force_merged(const std::vector<double>& lengths, SpectrumKind kind,
                                 int count) {
    const double l_min = *std::min_element(lengths.begin(), lengths.end());
    const double cap = (count * kPi / l_min) * (count * kPi / l_min);
    ModelSpectrum out{kind, {}};
    for (std::size_t n = 0; n < lengths.size(); ++n) {
        for (int k = 1;; ++k) {
            const double v = interval_eigenvalue(kind, lengths[n], k);
            if (v > cap && k > count) break;
            out.entries.push_back({v, {static_cast<int>(n), k}});
        }
    }
    std::sort(out.entries.begin(), out.entries.end(),
              [](const SpectrumEntry& a, const SpectrumEntry& b) {
                  if (a.value != b.value) return a.value < b.value;
                  if (a.id.side != b.id.side) return a.id.side < b.id.side;
                  return a.id.mode < b.id.mode;
              });
    out.entries.resize(static_cast<std::size_t>(count));
    return out;
}

bool identical(const ModelSpectrum& a, const ModelSpectrum& b) {
    if (a.entries.size() != b.entries.size()) return false;
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        if (a.entries[i].value != b.entries[i].value) return false;
        if (a.entries[i].id.side != b.entries[i].id.side) return false;
        if (a.entries[i].id.mode != b.entries[i].id.mode) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("interval spectra on a length-pi interval", "[spectra]") {
    auto d = interval_spectrum(SpectrumKind::Dirichlet, kPi, 3);
    REQUIRE(d.size() == 3);
    CHECK(d[0] == Approx(1.0).epsilon(1e-13));
    CHECK(d[1] == Approx(4.0).epsilon(1e-13));
    CHECK(d[2] == Approx(9.0).epsilon(1e-13));

    auto n = interval_spectrum(SpectrumKind::Neumann, kPi, 3);
    REQUIRE(n.size() == 3);
    CHECK(n[0] == 0.0);
    CHECK(n[1] == Approx(1.0).epsilon(1e-13));
    CHECK(n[2] == Approx(4.0).epsilon(1e-13));

    CHECK(interval_eigenvalue(SpectrumKind::Dirichlet, 1.0, 1) == Approx(kPi * kPi));
}

TEST_CASE("interval spectra reject bad arguments", "[spectra]") {
    CHECK_THROWS_AS(interval_spectrum(SpectrumKind::Dirichlet, 0.0, 3), NonPositiveLength);
    CHECK_THROWS_AS(interval_spectrum(SpectrumKind::Dirichlet, -1.0, 3), NonPositiveLength);
    CHECK_THROWS_AS(interval_spectrum(SpectrumKind::Dirichlet, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(merged_spectrum(std::vector<double>{}, SpectrumKind::Dirichlet, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(merged_spectrum({1.0, -2.0}, SpectrumKind::Dirichlet, 2), NonPositiveLength);
    CHECK_THROWS_AS(merged_spectrum({1.0}, SpectrumKind::Dirichlet, 0), std::invalid_argument);
}

TEST_CASE("ties between equal sides break by side then mode", "[spectra]") {
    auto s = merged_spectrum({1.0, 1.0, 1.0}, SpectrumKind::Dirichlet, 3);
    REQUIRE(s.entries.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(s.entries[static_cast<std::size_t>(i)].value == s.entries[0].value);
        CHECK(s.entries[static_cast<std::size_t>(i)].id.side == i);
        CHECK(s.entries[static_cast<std::size_t>(i)].id.mode == 1);
    }
}

TEST_CASE("merged order interleaves sides of different length", "[spectra]") {
    // Sides (1, 1, 2): the long side contributes pi^2/4 first, then a
    // three-way tie at pi^2 between both unit sides (mode 1) and the long
    // side (mode 2).
    auto s = merged_spectrum({1.0, 1.0, 2.0}, SpectrumKind::Dirichlet, 4);
    REQUIRE(s.entries.size() == 4);
    CHECK(s.entries[0].value == interval_eigenvalue(SpectrumKind::Dirichlet, 2.0, 1));
    CHECK(s.entries[0].id.side == 2);
    CHECK(s.entries[0].id.mode == 1);
    CHECK(s.entries[1].id.side == 0);
    CHECK(s.entries[1].id.mode == 1);
    CHECK(s.entries[2].id.side == 1);
    CHECK(s.entries[2].id.mode == 1);
    CHECK(s.entries[3].id.side == 2);
    CHECK(s.entries[3].id.mode == 2);
    CHECK(s.entries[1].value == s.entries[3].value);
}

TEST_CASE("merged spectrum matches brute-force enumeration", "[spectra]") {
    std::mt19937_64 rng(8201);
    for (int trial = 0; trial < 10; ++trial) {
        auto p = testsupport::random_convex_polygon(rng, 3, 8);
        const auto lens = p.side_lengths();
        for (auto kind : {SpectrumKind::Dirichlet, SpectrumKind::Neumann}) {
            auto got = merged_spectrum(lens, kind, 30);
            auto want = brute_force_merged(lens, kind, 30);
            REQUIRE(identical(got, want));
        }
    }
}

TEST_CASE("polygon overload uses its side lengths", "[spectra]") {
    auto p = testsupport::equilateral_polygon();
    auto s = merged_spectrum(p, SpectrumKind::Dirichlet, 3);
    // All three sides have unit length up to rounding of sqrt(3)/2
    // coordinates, so the three lowest modes all sit at pi^2.
    for (const auto& e : s.entries) CHECK(e.value == Approx(kPi * kPi).epsilon(1e-14));
    CHECK(model_eigenvalue(p, SpectrumKind::Dirichlet, 1) == s.entries[0].value);

    // A polygon with one equal-length side count has that many zero Neumann
    // modes in front.
    auto ns = merged_spectrum(p, SpectrumKind::Neumann, 4);
    CHECK(ns.entries[0].value == 0.0);
    CHECK(ns.entries[1].value == 0.0);
    CHECK(ns.entries[2].value == 0.0);
    CHECK(ns.entries[3].value > 0.0);
}

TEST_CASE("each merged mode dominates its Neumann counterpart", "[spectra]") {
    std::mt19937_64 rng(8202);
    auto p = testsupport::random_convex_polygon(rng, 5, 8);
    auto d = merged_spectrum(p, SpectrumKind::Dirichlet, 50);
    auto n = merged_spectrum(p, SpectrumKind::Neumann, 50);
    for (std::size_t i = 0; i < 50; ++i) CHECK(n.entries[i].value <= d.entries[i].value);
}

TEST_CASE("scaling lengths by c scales eigenvalues by 1/c^2", "[spectra]") {
    std::mt19937_64 rng(8203);
    auto p = testsupport::random_convex_polygon(rng, 4, 6);
    auto lens = p.side_lengths();
    std::vector<double> scaled;
    for (double l : lens) scaled.push_back(2.5 * l);
    auto a = merged_spectrum(lens, SpectrumKind::Dirichlet, 20);
    auto b = merged_spectrum(scaled, SpectrumKind::Dirichlet, 20);
    for (std::size_t i = 0; i < 20; ++i) {
        CHECK(b.entries[i].value == Approx(a.entries[i].value / (2.5 * 2.5)).epsilon(1e-12));
        CHECK(b.entries[i].id.side == a.entries[i].id.side);
        CHECK(b.entries[i].id.mode == a.entries[i].id.mode);
    }
}

TEST_CASE("halfline ground state", "[spectra]") {
    auto g1 = robin_halfline_groundstate(1.0);
    CHECK(g1.eigenvalue == -1.0);
    CHECK(g1(0.0) == Approx(std::sqrt(2.0)));

    auto g4 = robin_halfline_groundstate(4.0);
    CHECK(g4.eigenvalue == -16.0);
    // sqrt(2 * 4) = 2 * sqrt(2).
    CHECK(g4(0.0) == Approx(2.0 * std::sqrt(2.0)));
    // Pointwise decay, exact form.
    CHECK(g4(0.5) == Approx(2.0 * std::sqrt(2.0) * std::exp(-2.0)));

    CHECK_THROWS_AS(robin_halfline_groundstate(0.0), NonPositiveAlpha);
    CHECK_THROWS_AS(robin_halfline_groundstate(-3.0), NonPositiveAlpha);
}

TEST_CASE("ground state has unit mass", "[spectra]") {
    for (double alpha : {1.0, 2.0, 5.0, 10.0}) {
        auto v = groundstate_profile(alpha, 20.0 / alpha, 20000);
        CHECK(v.mass() == Approx(1.0).margin(1e-5));
        // Projection of the state onto itself: same integral, evaluated with
        // the exact exponential-times-linear rule.
        auto g = robin_halfline_groundstate(alpha);
        CHECK(v.groundstate_moment(g) == Approx(1.0).margin(1e-6));
    }
}

TEST_CASE("bracket around the equilateral model modes", "[spectra]") {
    auto p = testsupport::equilateral_polygon();

    auto b = bracket(p, 10.0, 1);
    CHECK(b.m == 1);
    CHECK(b.mu_neumann == 0.0);
    CHECK(b.mu_dirichlet == Approx(kPi * kPi).epsilon(1e-14));
    CHECK(b.lower == Approx(-100.0));
    CHECK(b.upper == Approx(-100.0 + kPi * kPi));
    CHECK(b.valid);

    // alpha^2 = 9 < pi^2: the upper bound loses meaning.
    auto weak = bracket(p, 3.0, 1);
    CHECK_FALSE(weak.valid);
    CHECK(weak.upper == Approx(-9.0 + kPi * kPi));

    CHECK_THROWS_AS(bracket(p, 0.0, 1), NonPositiveAlpha);
    CHECK_THROWS_AS(bracket(p, 10.0, 0), std::invalid_argument);
}

TEST_CASE("bracket width does not depend on alpha", "[spectra]") {
    auto p = testsupport::unit_square_polygon();
    auto b1 = bracket(p, 10.0, 4);
    auto b2 = bracket(p, 25.0, 4);
    CHECK(b1.width() == b2.width());
    // Four unit sides: the fourth Dirichlet mode is still the first interval
    // mode of the last side.
    CHECK(b1.mu_dirichlet == Approx(kPi * kPi).epsilon(1e-14));
    CHECK(b1.mu_neumann == 0.0);
}
