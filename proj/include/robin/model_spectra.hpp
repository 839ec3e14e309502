#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "robin/core.hpp"
#include "robin/errors.hpp"
#include "robin/geometry.hpp"

namespace robin {

enum class SpectrumKind { Dirichlet, Neumann };

inline const char* to_string(SpectrumKind k) {
    return k == SpectrumKind::Dirichlet ? "dirichlet" : "neumann";
}

// Identity of one interval mode: 0-based side index plus 1-based mode number.
struct ModeId {
    int side = 0;
    int mode = 1;
};

struct SpectrumEntry {
    double value = 0.0;
    ModeId id;
};

struct ModelSpectrum {
    SpectrumKind kind = SpectrumKind::Dirichlet;
    std::vector<SpectrumEntry> entries;  // ascending, ties by (side, mode)
};

// k-th eigenvalue of -d^2/dt^2 on (0, length): Dirichlet (k*pi/l)^2 with
// k >= 1, Neumann ((k-1)*pi/l)^2.
inline double interval_eigenvalue(SpectrumKind kind, double length, int mode) {
    const int k = kind == SpectrumKind::Dirichlet ? mode : mode - 1;
    const double w = static_cast<double>(k) * kPi / length;
    return w * w;
}

inline std::vector<double> interval_spectrum(SpectrumKind kind, double length, int count) {
    if (!(length > 0.0))
        throw NonPositiveLength("interval length must be positive, got " + format_double(length));
    if (count < 1) throw std::invalid_argument("interval_spectrum needs count >= 1");
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int k = 1; k <= count; ++k)
        out[static_cast<std::size_t>(k - 1)] = interval_eigenvalue(kind, length, k);
    return out;
}

// The `count` smallest eigenvalues of the direct sum of interval operators
// over the given side lengths. Per-side modes are generated up to
// k_max = count + ceil(l_max/l_min) * count, which always covers the global
// count-th smallest value, then merged with ties broken by (side, mode).
inline ModelSpectrum merged_spectrum(const std::vector<double>& lengths, SpectrumKind kind,
                                     int count) {
    if (count < 1) throw std::invalid_argument("merged_spectrum needs count >= 1");
    if (lengths.empty()) throw std::invalid_argument("merged_spectrum needs at least one length");
    for (const double l : lengths)
        if (!(l > 0.0))
            throw NonPositiveLength("side length must be positive, got " + format_double(l));

    const double l_min = *std::min_element(lengths.begin(), lengths.end());
    const double l_max = *std::max_element(lengths.begin(), lengths.end());
    const int k_max = count + static_cast<int>(std::ceil(l_max / l_min)) * count;

    ModelSpectrum spec{kind, {}};
    spec.entries.reserve(lengths.size() * static_cast<std::size_t>(k_max));
    for (std::size_t n = 0; n < lengths.size(); ++n)
        for (int k = 1; k <= k_max; ++k)
            spec.entries.push_back(
                {interval_eigenvalue(kind, lengths[n], k), {static_cast<int>(n), k}});

    std::sort(spec.entries.begin(), spec.entries.end(),
              [](const SpectrumEntry& a, const SpectrumEntry& b) {
                  if (a.value != b.value) return a.value < b.value;
                  if (a.id.side != b.id.side) return a.id.side < b.id.side;
                  return a.id.mode < b.id.mode;
              });
    spec.entries.resize(static_cast<std::size_t>(count));
    return spec;
}

inline ModelSpectrum merged_spectrum(const ConvexPolygon& p, SpectrumKind kind, int count) {
    return merged_spectrum(p.side_lengths(), kind, count);
}

// m-th merged model eigenvalue (m is 1-based).
inline double model_eigenvalue(const ConvexPolygon& p, SpectrumKind kind, int m) {
    return merged_spectrum(p, kind, m).entries[static_cast<std::size_t>(m - 1)].value;
}

// Ground state of the half-line Robin operator -d^2/ds^2 with
// v'(0) = -alpha * v(0): eigenvalue -alpha^2, L2-normalized profile.
struct GroundState {
    double alpha = 1.0;
    double eigenvalue = -1.0;
    // Normalized in L2(0, inf): the sqrt(2 alpha) factor makes the rank-one
    // projection coefficient equal the profile's component along the state.
    double operator()(double s) const { return std::sqrt(2.0 * alpha) * std::exp(-alpha * s); }
    // Exact integral of the profile against a linear segment; the workhorse
    // for all projection quadratures.
    double moment(double a, double b, double va, double vb) const {
        return std::sqrt(2.0 * alpha) * exp_linear_integral(a, b, va, vb, alpha);
    }
};

inline GroundState robin_halfline_groundstate(double alpha) {
    if (!(alpha > 0.0))
        throw NonPositiveAlpha("alpha must be positive, got " + format_double(alpha));
    return GroundState{alpha, -alpha * alpha};
}

// Two-sided model enclosure for the m-th low-lying exterior eigenvalue:
// -alpha^2 + mu_m(Neumann) <= E_m <= -alpha^2 + mu_m(Dirichlet), the upper
// bound being meaningful only while mu_m(Dirichlet) < alpha^2.
struct Bracket {
    int m = 1;
    double mu_neumann = 0.0;
    double mu_dirichlet = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    bool valid = false;
    // Width is alpha-independent by construction.
    double width() const { return mu_dirichlet - mu_neumann; }
};

inline Bracket bracket(const ConvexPolygon& p, double alpha, int m) {
    if (!(alpha > 0.0))
        throw NonPositiveAlpha("alpha must be positive, got " + format_double(alpha));
    if (m < 1) throw std::invalid_argument("bracket needs m >= 1");
    Bracket b;
    b.m = m;
    b.mu_neumann = model_eigenvalue(p, SpectrumKind::Neumann, m);
    b.mu_dirichlet = model_eigenvalue(p, SpectrumKind::Dirichlet, m);
    b.lower = -alpha * alpha + b.mu_neumann;
    b.upper = -alpha * alpha + b.mu_dirichlet;
    b.valid = b.mu_dirichlet < alpha * alpha;
    return b;
}

}  // namespace robin
