#pragma once

// Shared helpers for the test suite: reproducible random convex polygons and
// a low-discrepancy point sequence for coverage sweeps.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <utility>
#include <vector>

#include "robin/core.hpp"
#include "robin/geometry.hpp"

namespace testsupport {

// Random strictly convex polygon with nmin..nmax vertices. Points are sampled
// on an ellipse (affine image of a circle, hence strictly convex) with a
// guaranteed angular gap, then rotated and translated. The gap keeps every
// cross product far above the validator's collinearity tolerance.
inline robin::ConvexPolygon random_convex_polygon(std::mt19937_64& rng, int nmin = 3,
                                                  int nmax = 8) {
    std::uniform_int_distribution<int> nd(nmin, nmax);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int n = nd(rng);
    const double rot = 2.0 * robin::kPi * u(rng);
    const double ax = 0.5 + 1.5 * u(rng);
    const double by = 0.5 + 1.5 * u(rng);
    const double cx = 4.0 * u(rng) - 2.0;
    const double cy = 4.0 * u(rng) - 2.0;
    std::vector<robin::Vec2> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double th = 2.0 * robin::kPi * (i + 0.2 + 0.6 * u(rng)) / n;
        const double x = ax * std::cos(th);
        const double y = by * std::sin(th);
        pts.push_back({cx + x * std::cos(rot) - y * std::sin(rot),
                       cy + x * std::sin(rot) + y * std::cos(rot)});
    }
    return robin::ConvexPolygon::validate(std::move(pts));
}

// Van der Corput radical inverse; halton(i, 2), halton(i, 3) fills the unit
// square evenly.
inline double halton(std::size_t i, int base) {
    double f = 1.0, r = 0.0;
    while (i > 0) {
        f /= base;
        r += f * static_cast<double>(i % static_cast<std::size_t>(base));
        i /= static_cast<std::size_t>(base);
    }
    return r;
}

inline robin::ConvexPolygon unit_square_polygon() {
    return robin::ConvexPolygon::validate({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}});
}

inline robin::ConvexPolygon equilateral_polygon(double side = 1.0) {
    return robin::ConvexPolygon::validate(
        {{0.0, 0.0}, {side, 0.0}, {side / 2.0, side * std::sqrt(3.0) / 2.0}});
}

}  // namespace testsupport
