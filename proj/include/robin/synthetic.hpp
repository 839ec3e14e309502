#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "robin/geometry.hpp"
#include "robin/model_spectra.hpp"
#include "robin/profiles.hpp"
#include "robin/variational.hpp"

namespace robin {

// Seeded generators for property checks: piecewise-linear profiles and
// fields with no structure beyond bounded values, plus one smooth decaying
// field on a polygon's exterior decomposition.

inline Profile1D random_profile(std::mt19937_64& rng, double smax, int cells) {
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::vector<double> grid(static_cast<std::size_t>(cells) + 1);
    std::vector<double> vals(static_cast<std::size_t>(cells) + 1);
    for (int i = 0; i <= cells; ++i) {
        grid[static_cast<std::size_t>(i)] = smax * i / cells;
        vals[static_cast<std::size_t>(i)] = val(rng);
    }
    return Profile1D(std::move(grid), std::move(vals));
}

inline Profile1D groundstate_profile(double alpha, double smax, int cells) {
    const GroundState phi = robin_halfline_groundstate(alpha);
    std::vector<double> grid(static_cast<std::size_t>(cells) + 1);
    std::vector<double> vals(static_cast<std::size_t>(cells) + 1);
    for (int i = 0; i <= cells; ++i) {
        const double s = smax * i / cells;
        grid[static_cast<std::size_t>(i)] = s;
        vals[static_cast<std::size_t>(i)] = phi(s);
    }
    return Profile1D(std::move(grid), std::move(vals));
}

inline StripField random_strip_field(std::mt19937_64& rng, double length, double depth, int nt,
                                     int ns) {
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::vector<double> tg(static_cast<std::size_t>(nt) + 1), sg(static_cast<std::size_t>(ns) + 1);
    for (int i = 0; i <= nt; ++i) tg[static_cast<std::size_t>(i)] = length * i / nt;
    for (int j = 0; j <= ns; ++j) sg[static_cast<std::size_t>(j)] = depth * j / ns;
    std::vector<double> vals(tg.size() * sg.size());
    for (double& x : vals) x = val(rng);
    return StripField(std::move(tg), std::move(sg), std::move(vals));
}

// compact: the outermost radial column is zeroed, as the sector trace
// inequality requires.
inline SectorField random_sector_field(std::mt19937_64& rng, double opening, double radius,
                                       int nr, int np, bool compact) {
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::vector<double> rg(static_cast<std::size_t>(nr) + 1), pg(static_cast<std::size_t>(np) + 1);
    for (int i = 0; i <= nr; ++i) rg[static_cast<std::size_t>(i)] = radius * i / nr;
    for (int j = 0; j <= np; ++j) pg[static_cast<std::size_t>(j)] = opening * j / np;
    std::vector<double> vals(rg.size() * pg.size());
    const double apex = val(rng);
    for (int j = 0; j <= np; ++j)
        for (int i = 0; i <= nr; ++i) {
            double& x = vals[static_cast<std::size_t>(j) * rg.size() + static_cast<std::size_t>(i)];
            x = (i == 0) ? apex : val(rng);
            if (compact && i == nr) x = 0.0;
        }
    return SectorField(opening, std::move(rg), std::move(pg), std::move(vals));
}

// Smooth field decaying like exp(-2 dist(x, wall)): per strip
// (1 + c_n sin(pi t / l)) e^{-2s}, per sector plain e^{-2r}. Continuous
// across the region interfaces since the modulation vanishes at the side
// ends and both distances agree on the rays.
inline DecompositionField decaying_test_field(const Decomposition& dec, double depth,
                                              std::mt19937_64& rng) {
    std::uniform_real_distribution<double> amp(0.1, 0.4);
    DecompositionField u;
    const int nt = 96, ns = 64;
    for (const SideFrame& f : dec.frames) {
        const double c = amp(rng);
        std::vector<double> tg(nt + 1), sg(ns + 1);
        for (int i = 0; i <= nt; ++i) tg[static_cast<std::size_t>(i)] = f.length * i / nt;
        for (int j = 0; j <= ns; ++j) sg[static_cast<std::size_t>(j)] = depth * j / ns;
        std::vector<double> vals(tg.size() * sg.size());
        for (int j = 0; j <= ns; ++j)
            for (int i = 0; i <= nt; ++i)
                vals[static_cast<std::size_t>(j) * tg.size() + static_cast<std::size_t>(i)] =
                    (1.0 + c * std::sin(kPi * tg[static_cast<std::size_t>(i)] / f.length)) *
                    std::exp(-2.0 * sg[static_cast<std::size_t>(j)]);
        u.strips.emplace_back(std::move(tg), std::move(sg), std::move(vals));
    }
    for (const Sector& sec : dec.sectors) {
        const int nr = 64, np = 24;
        std::vector<double> rg(nr + 1), pg(np + 1);
        for (int i = 0; i <= nr; ++i) rg[static_cast<std::size_t>(i)] = depth * i / nr;
        for (int j = 0; j <= np; ++j) pg[static_cast<std::size_t>(j)] = sec.opening * j / np;
        std::vector<double> vals(rg.size() * pg.size());
        for (int j = 0; j <= np; ++j)
            for (int i = 0; i <= nr; ++i)
                vals[static_cast<std::size_t>(j) * rg.size() + static_cast<std::size_t>(i)] =
                    std::exp(-2.0 * rg[static_cast<std::size_t>(i)]);
        u.sectors.emplace_back(sec.opening, std::move(rg), std::move(pg), std::move(vals));
    }
    return u;
}

}  // namespace robin
