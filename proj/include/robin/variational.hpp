#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "robin/core.hpp"
#include "robin/errors.hpp"
#include "robin/geometry.hpp"
#include "robin/model_spectra.hpp"
#include "robin/profiles.hpp"

namespace robin {

struct ProjectionGap {
    double lhs = 0.0;  // |v|^2 - (phi_alpha, v)^2
    double rhs = 0.0;  // alpha^-2 * (|v'|^2 - alpha v(0)^2 + alpha^2 |v|^2)
};

// Quantifies how much of a half-line profile escapes the Robin ground state:
// the L2 mass left after projecting onto phi_alpha is controlled by the
// shifted form energy. Profiles are zero-extended (ramp-closed) beyond their
// grid. The inequality lhs <= rhs holds for every profile.
inline ProjectionGap groundstate_projection_gap(const Profile1D& v, double alpha) {
    const GroundState g = robin_halfline_groundstate(alpha);  // checks alpha > 0
    const Profile1D w = zero_closed(v);
    const double m = w.mass();
    const double c = w.groundstate_moment(g);
    const double v0 = w.left_value();
    ProjectionGap r;
    r.lhs = m - c * c;
    r.rhs = (w.dirichlet_energy() - alpha * v0 * v0 + alpha * alpha * m) / (alpha * alpha);
    return r;
}

// Best constant C_theta in the wedge trace inequality
//   |u|^2(boundary) <= eps |grad u|^2 + (C_theta / eps) |u|^2.
// Openings below pi pay 2/(1 - cos theta); from pi on the constant is 1.
inline double sector_trace_constant(double theta) {
    if (!(theta > 0.0 && theta < 2.0 * kPi))
        throw AngleOutOfRange("sector opening must lie in (0, 2*pi), got " +
                              format_double(theta));
    if (theta < kPi) return 2.0 / (1.0 - std::cos(theta));
    return 1.0;
}

struct TraceBound {
    double boundary = 0.0;  // integral of u^2 over both rays
    double bound = 0.0;     // eps * |grad u|^2 + (C/eps) * |u|^2
    double constant = 0.0;  // C_theta used
};

// Checks the wedge trace inequality on a sampled sector field. The field
// must vanish at the truncation arc so its zero extension to the infinite
// sector is admissible.
inline TraceBound sector_trace_check(const SectorField& u, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("sector_trace_check needs eps > 0");
    if (!u.outer_column_zero())
        throw FieldNotCompactlySupported(
            "sector field must vanish on the outermost radial ring");
    TraceBound out;
    out.constant = sector_trace_constant(u.opening());
    out.boundary = u.ray_trace_mass();
    out.bound = eps * u.gradient_energy() + out.constant / eps * u.mass();
    return out;
}

inline TraceBound sector_trace_check(const Sector& sec, const SectorField& u, double eps) {
    if (std::abs(sec.opening - u.opening()) > 1e-12 * sec.opening)
        throw InconsistentDecomposition("sector field opening does not match the sector");
    return sector_trace_check(u, eps);
}

struct StripEnergySplit {
    double transverse = 0.0;  // integral of (du/dt)^2
    double robin_form = 0.0;  // |grad u|^2 - alpha * wall trace + alpha^2 |u|^2
};

// The shifted Robin form on a half-strip dominates the transverse energy:
// 0 <= transverse <= robin_form for every field (zero-extended above).
inline StripEnergySplit strip_energy_split(const StripField& f, double alpha) {
    if (!(alpha > 0.0))
        throw NonPositiveAlpha("alpha must be positive, got " + format_double(alpha));
    const StripField u = zero_closed_top(f);
    StripEnergySplit out;
    out.transverse = u.tangential_energy();
    out.robin_form = u.tangential_energy() + u.normal_energy() - alpha * u.wall_trace_mass() +
                     alpha * alpha * u.mass();
    return out;
}

// Ground-state projection of a strip field, including the zero-extension
// ramp above the sampled window.
inline Profile1D project_strip(const StripField& f, double alpha) {
    const GroundState g = robin_halfline_groundstate(alpha);
    return zero_closed_top(f).project(g);
}

// Per-side cutoff used by the identification map: a profile equal to 1 at
// both ends of the side and 0 at the midpoint, realized as sampled
// cos^2(pi t / l). The constants are the exact integrals of the smooth
// cutoff: mass = 3l/8, energy = pi^2/(2l).
struct SideCutoff {
    Profile1D rho;
    double mass_exact = 0.0;    // integral of rho^2
    double energy_exact = 0.0;  // integral of (rho')^2
};

struct CutoffSpec {
    std::vector<SideCutoff> sides;
    double R = 0.0;       // max_n integral of rho_n^2
    double Rprime = 0.0;  // max_n integral of (rho_n')^2
};

inline CutoffSpec default_cutoffs(const ConvexPolygon& p) {
    constexpr int kCells = 128;  // even, so the midpoint is a grid node
    CutoffSpec spec;
    for (int n = 0; n < p.side_count(); ++n) {
        const double l = p.side_length(n);
        std::vector<double> grid(kCells + 1), vals(kCells + 1);
        for (int i = 0; i <= kCells; ++i) grid[static_cast<std::size_t>(i)] = l * i / kCells;
        for (int i = 0; i <= kCells / 2; ++i) {
            const double c = std::cos(kPi * i / kCells);
            vals[static_cast<std::size_t>(i)] = c * c;
            vals[static_cast<std::size_t>(kCells - i)] = c * c;
        }
        vals[0] = vals[kCells] = 1.0;  // exact endpoint values
        vals[kCells / 2] = 0.0;        // exact midpoint zero
        SideCutoff sc{Profile1D(std::move(grid), std::move(vals)), 3.0 * l / 8.0,
                      kPi * kPi / (2.0 * l)};
        spec.R = std::max(spec.R, sc.mass_exact);
        spec.Rprime = std::max(spec.Rprime, sc.energy_exact);
        spec.sides.push_back(std::move(sc));
    }
    return spec;
}

// Sampled field over the whole exterior decomposition: one strip field per
// side and one sector field per vertex, in decomposition order.
struct DecompositionField {
    std::vector<StripField> strips;
    std::vector<SectorField> sectors;
};

struct IdentificationResult {
    std::vector<Profile1D> projected;  // (P_n u) per side
    std::vector<Profile1D> corrected;  // (J_alpha u)_n per side, zero at both ends
    double u_norm2 = 0.0;              // |u|^2 over all regions
    double j_norm2 = 0.0;              // sum of |J_alpha u|^2
    double b_form = 0.0;               // h_alpha(u, u) + alpha^2 |u|^2
    double bprime_form = 0.0;          // sum of |(J_alpha u)'|^2
    double delta1 = 0.0;               // (u_norm2 - j_norm2) / (b_form + u_norm2)
    double delta2 = 0.0;               // (bprime_form - b_form) / (b_form + u_norm2)
};

namespace detail {
inline std::vector<double> merge_grids(const std::vector<double>& a, const std::vector<double>& b,
                                       double extra, double tol) {
    std::vector<double> g;
    g.reserve(a.size() + b.size() + 1);
    g.insert(g.end(), a.begin(), a.end());
    g.insert(g.end(), b.begin(), b.end());
    g.push_back(extra);
    std::sort(g.begin(), g.end());
    std::vector<double> out;
    for (const double x : g)
        if (out.empty() || x - out.back() > tol) out.push_back(x);
    // keep the exact right endpoint
    if (!out.empty()) out.back() = std::max(a.back(), b.back());
    return out;
}
}  // namespace detail

// Maps an exterior field to one Dirichlet profile per side: project every
// strip onto the Robin ground state, then subtract the nearest endpoint
// value weighted by the cutoff so the result vanishes at both side ends.
// Reports the quadratic forms before/after and the resulting defect ratios.
inline IdentificationResult identification_map(const Decomposition& dec,
                                               const DecompositionField& u, double alpha,
                                               const CutoffSpec& cut) {
    const GroundState g = robin_halfline_groundstate(alpha);
    const std::size_t m = dec.frames.size();
    if (u.strips.size() != m || u.sectors.size() != m || cut.sides.size() != m)
        throw InconsistentDecomposition("field/cutoff region counts do not match the polygon");
    for (std::size_t n = 0; n < m; ++n) {
        const double l = dec.frames[n].length;
        if (std::abs(u.strips[n].length() - l) > 1e-9 * l ||
            std::abs(cut.sides[n].rho.length() - l) > 1e-9 * l)
            throw InconsistentDecomposition("strip/cutoff length mismatch on side " +
                                            std::to_string(n));
        if (std::abs(u.sectors[n].opening() - dec.sectors[n].opening) >
            1e-9 * dec.sectors[n].opening)
            throw InconsistentDecomposition("sector opening mismatch at vertex " +
                                            std::to_string(n));
    }

    IdentificationResult out;
    for (std::size_t n = 0; n < m; ++n) {
        const StripField sz = zero_closed_top(u.strips[n]);
        const double l = sz.length();
        out.u_norm2 += sz.mass();
        out.b_form += sz.tangential_energy() + sz.normal_energy() -
                      alpha * sz.wall_trace_mass() + alpha * alpha * sz.mass();

        Profile1D proj = sz.project(g);
        const Profile1D& rho = cut.sides[n].rho;
        const std::vector<double> grid =
            detail::merge_grids(proj.grid(), rho.grid(), l / 2.0, 1e-12 * l);
        std::vector<double> vals(grid.size());
        const double p_left = proj.left_value(), p_right = proj.right_value();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double t = grid[i];
            const double anchor = t < l / 2.0 ? p_left : p_right;
            vals[i] = proj.eval(t) - anchor * rho.eval(t);
        }
        Profile1D corr(grid, std::move(vals));
        if (std::abs(corr.left_value()) > 1e-12 * std::max(1.0, std::abs(p_left)) ||
            std::abs(corr.right_value()) > 1e-12 * std::max(1.0, std::abs(p_right)))
            throw Error("corrected profile fails to vanish at the side ends");
        out.j_norm2 += corr.mass();
        out.bprime_form += corr.dirichlet_energy();
        out.projected.push_back(std::move(proj));
        out.corrected.push_back(std::move(corr));
    }
    for (std::size_t n = 0; n < m; ++n) {
        SectorField sec = u.sectors[n];
        if (!sec.outer_column_zero()) {
            // ramp-close past the arc, mirroring the strip convention
            const auto& r = sec.rgrid();
            std::vector<double> r2 = r;
            r2.push_back(r.back() + (r[r.size() - 1] - r[r.size() - 2]));
            std::vector<double> v2;
            v2.reserve(r2.size() * sec.pgrid().size());
            for (std::size_t j = 0; j < sec.pgrid().size(); ++j) {
                for (std::size_t i = 0; i < r.size(); ++i) v2.push_back(sec.at(i, j));
                v2.push_back(0.0);
            }
            sec = SectorField(sec.opening(), std::move(r2), sec.pgrid(), std::move(v2));
        }
        out.u_norm2 += sec.mass();
        out.b_form += sec.gradient_energy() + alpha * alpha * sec.mass();
    }

    const double den = out.b_form + out.u_norm2;
    if (den > 0.0) {
        out.delta1 = (out.u_norm2 - out.j_norm2) / den;
        out.delta2 = (out.bprime_form - out.b_form) / den;
    }
    return out;
}

}  // namespace robin
