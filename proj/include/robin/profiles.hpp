#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "robin/core.hpp"
#include "robin/errors.hpp"
#include "robin/model_spectra.hpp"

namespace robin {

// Continuous piecewise-linear function sampled on a strictly increasing grid
// starting at 0. All integrals are exact on the linear pieces.
class Profile1D {
public:
    Profile1D(std::vector<double> grid, std::vector<double> values)
        : grid_(std::move(grid)), values_(std::move(values)) {
        if (grid_.size() < 2 || grid_.size() != values_.size())
            throw std::invalid_argument("Profile1D needs matching grid/value arrays, >= 2 points");
        if (grid_.front() != 0.0)
            throw std::invalid_argument("Profile1D grid must start at 0");
        for (std::size_t i = 1; i < grid_.size(); ++i)
            if (!(grid_[i] > grid_[i - 1]))
                throw std::invalid_argument("Profile1D grid must be strictly increasing");
    }

    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t cells() const { return grid_.size() - 1; }
    double length() const { return grid_.back(); }
    double left_value() const { return values_.front(); }
    double right_value() const { return values_.back(); }

    double eval(double s) const {
        if (s <= 0.0) return values_.front();
        if (s >= grid_.back()) return values_.back();
        std::size_t lo = 0, hi = grid_.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (grid_[mid] <= s ? lo : hi) = mid;
        }
        const double w = (s - grid_[lo]) / (grid_[lo + 1] - grid_[lo]);
        return values_[lo] + w * (values_[lo + 1] - values_[lo]);
    }

    // integral of v^2
    double mass() const {
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
            const double h = grid_[i + 1] - grid_[i];
            const double a = values_[i], b = values_[i + 1];
            acc += h * (a * a + a * b + b * b) / 3.0;
        }
        return acc;
    }

    // integral of (v')^2
    double dirichlet_energy() const {
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
            const double h = grid_[i + 1] - grid_[i];
            const double d = values_[i + 1] - values_[i];
            acc += d * d / h;
        }
        return acc;
    }

    // integral of phi_alpha * v against the half-line ground state
    double groundstate_moment(const GroundState& g) const {
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < grid_.size(); ++i)
            acc += g.moment(grid_[i], grid_[i + 1], values_[i], values_[i + 1]);
        return acc;
    }

private:
    std::vector<double> grid_;
    std::vector<double> values_;
};

// Zero extension beyond the grid as a W^{1,2} object: a profile whose last
// value is nonzero is closed by one linear ramp cell (width = last grid
// step) down to zero. Profiles already ending at zero are returned as-is.
inline Profile1D zero_closed(const Profile1D& v) {
    if (v.right_value() == 0.0) return v;
    std::vector<double> g = v.grid();
    std::vector<double> w = v.values();
    const double h = g[g.size() - 1] - g[g.size() - 2];
    g.push_back(g.back() + h);
    w.push_back(0.0);
    return Profile1D(std::move(g), std::move(w));
}

namespace detail {
// 2-point Gauss rule on [0,1]; exact through cubic integrands.
inline constexpr double kGaussNode0 = 0.5 - 0.28867513459481287;
inline constexpr double kGaussNode1 = 0.5 + 0.28867513459481287;

inline double bilinear(double f00, double f10, double f01, double f11, double xi, double eta) {
    return f00 * (1 - xi) * (1 - eta) + f10 * xi * (1 - eta) + f01 * (1 - xi) * eta +
           f11 * xi * eta;
}
}  // namespace detail

// Tensor-product bilinear field on a half-strip [0, L] x [0, s_max] in strip
// coordinates (t along the wall, s away from it). values are stored by
// s-row: values[j * tgrid.size() + i] is the sample at (tgrid[i], sgrid[j]).
class StripField {
public:
    StripField(std::vector<double> tgrid, std::vector<double> sgrid, std::vector<double> values)
        : t_(std::move(tgrid)), s_(std::move(sgrid)), v_(std::move(values)) {
        check_grid(t_, "t");
        check_grid(s_, "s");
        if (v_.size() != t_.size() * s_.size())
            throw std::invalid_argument("StripField values size mismatch");
    }

    const std::vector<double>& tgrid() const { return t_; }
    const std::vector<double>& sgrid() const { return s_; }
    double length() const { return t_.back(); }
    double height() const { return s_.back(); }
    double at(std::size_t i, std::size_t j) const { return v_[j * t_.size() + i]; }
    double& at(std::size_t i, std::size_t j) { return v_[j * t_.size() + i]; }

    bool top_row_zero() const {
        for (std::size_t i = 0; i < t_.size(); ++i)
            if (at(i, s_.size() - 1) != 0.0) return false;
        return true;
    }

    double mass() const {
        double acc = 0.0;
        for_cells([&](double ht, double hs, double f00, double f10, double f01, double f11) {
            double cell = 0.0;
            for (const double xi : {detail::kGaussNode0, detail::kGaussNode1})
                for (const double eta : {detail::kGaussNode0, detail::kGaussNode1}) {
                    const double u = detail::bilinear(f00, f10, f01, f11, xi, eta);
                    cell += 0.25 * u * u;
                }
            acc += ht * hs * cell;
        });
        return acc;
    }

    // integral of (du/dt)^2 over the strip
    double tangential_energy() const {
        double acc = 0.0;
        for_cells([&](double ht, double hs, double f00, double f10, double f01, double f11) {
            const double a = f10 - f00, b = f11 - f01;
            acc += (hs / ht) * (a * a + a * b + b * b) / 3.0;
        });
        return acc;
    }

    // integral of (du/ds)^2 over the strip
    double normal_energy() const {
        double acc = 0.0;
        for_cells([&](double ht, double hs, double f00, double f10, double f01, double f11) {
            const double c = f01 - f00, d = f11 - f10;
            acc += (ht / hs) * (c * c + c * d + d * d) / 3.0;
        });
        return acc;
    }

    // integral of u(t, 0)^2 along the wall
    double wall_trace_mass() const {
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < t_.size(); ++i) {
            const double h = t_[i + 1] - t_[i];
            const double a = at(i, 0), b = at(i + 1, 0);
            acc += h * (a * a + a * b + b * b) / 3.0;
        }
        return acc;
    }

    // Ground-state projection (P u)(t) = integral of phi_alpha(s) u(t, s) ds,
    // exact per column; the result is exactly the piecewise-linear function
    // of t interpolating these values.
    Profile1D project(const GroundState& g) const {
        std::vector<double> p(t_.size(), 0.0);
        for (std::size_t i = 0; i < t_.size(); ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j + 1 < s_.size(); ++j)
                acc += g.moment(s_[j], s_[j + 1], at(i, j), at(i, j + 1));
            p[i] = acc;
        }
        return Profile1D(t_, std::move(p));
    }

private:
    static void check_grid(const std::vector<double>& g, const char* name) {
        if (g.size() < 2)
            throw std::invalid_argument(std::string("StripField ") + name + " grid too small");
        if (g.front() != 0.0)
            throw std::invalid_argument(std::string("StripField ") + name +
                                        " grid must start at 0");
        for (std::size_t i = 1; i < g.size(); ++i)
            if (!(g[i] > g[i - 1]))
                throw std::invalid_argument(std::string("StripField ") + name +
                                            " grid must be strictly increasing");
    }

    template <class F>
    void for_cells(F&& f) const {
        for (std::size_t j = 0; j + 1 < s_.size(); ++j)
            for (std::size_t i = 0; i + 1 < t_.size(); ++i)
                f(t_[i + 1] - t_[i], s_[j + 1] - s_[j], at(i, j), at(i + 1, j), at(i, j + 1),
                  at(i + 1, j + 1));
    }

    std::vector<double> t_, s_, v_;
};

// Zero extension of a strip field past its top edge, realized as one ramp
// row of cells when the top row is not identically zero.
inline StripField zero_closed_top(const StripField& f) {
    if (f.top_row_zero()) return f;
    std::vector<double> s = f.sgrid();
    const double h = s[s.size() - 1] - s[s.size() - 2];
    s.push_back(s.back() + h);
    const std::size_t nt = f.tgrid().size();
    std::vector<double> v;
    v.reserve(nt * s.size());
    for (std::size_t j = 0; j + 1 < s.size(); ++j)
        for (std::size_t i = 0; i < nt; ++i) v.push_back(f.at(i, j));
    for (std::size_t i = 0; i < nt; ++i) v.push_back(0.0);
    return StripField(f.tgrid(), std::move(s), std::move(v));
}

// Bilinear-in-(r, phi) field on a truncated sector 0 <= r <= r_max,
// 0 <= phi <= opening. values[j * rgrid.size() + i] samples
// (rgrid[i], pgrid[j]). If the grid reaches r = 0 the apex row must be
// exactly constant (the field is single-valued at the apex).
class SectorField {
public:
    SectorField(double opening, std::vector<double> rgrid, std::vector<double> pgrid,
                std::vector<double> values)
        : opening_(opening), r_(std::move(rgrid)), p_(std::move(pgrid)), v_(std::move(values)) {
        if (!(opening_ > 0.0 && opening_ < 2.0 * kPi))
            throw AngleOutOfRange("sector opening must lie in (0, 2*pi)");
        if (r_.size() < 2 || p_.size() < 2 || v_.size() != r_.size() * p_.size())
            throw std::invalid_argument("SectorField grid/value size mismatch");
        if (!(r_.front() >= 0.0))
            throw std::invalid_argument("SectorField radial grid must start at r >= 0");
        for (std::size_t i = 1; i < r_.size(); ++i)
            if (!(r_[i] > r_[i - 1]))
                throw std::invalid_argument("SectorField radial grid must be increasing");
        if (p_.front() != 0.0 || std::abs(p_.back() - opening_) > 1e-12 * opening_)
            throw std::invalid_argument("SectorField angular grid must span [0, opening]");
        for (std::size_t j = 1; j < p_.size(); ++j)
            if (!(p_[j] > p_[j - 1]))
                throw std::invalid_argument("SectorField angular grid must be increasing");
        if (r_.front() == 0.0)
            for (std::size_t j = 0; j < p_.size(); ++j)
                if (at(0, j) != at(0, 0))
                    throw std::invalid_argument(
                        "SectorField must be single-valued at the apex (r = 0)");
    }

    double opening() const { return opening_; }
    const std::vector<double>& rgrid() const { return r_; }
    const std::vector<double>& pgrid() const { return p_; }
    double at(std::size_t i, std::size_t j) const { return v_[j * r_.size() + i]; }
    double& at(std::size_t i, std::size_t j) { return v_[j * r_.size() + i]; }

    bool outer_column_zero() const {
        for (std::size_t j = 0; j < p_.size(); ++j)
            if (at(r_.size() - 1, j) != 0.0) return false;
        return true;
    }

    // integral of u^2 r dr dphi
    double mass() const {
        double acc = 0.0;
        for_cells([&](std::size_t i, std::size_t j) {
            const double ra = r_[i], hr = r_[i + 1] - r_[i], hp = p_[j + 1] - p_[j];
            const double f00 = at(i, j), f10 = at(i + 1, j), f01 = at(i, j + 1),
                         f11 = at(i + 1, j + 1);
            double cell = 0.0;
            for (const double xi : {detail::kGaussNode0, detail::kGaussNode1})
                for (const double eta : {detail::kGaussNode0, detail::kGaussNode1}) {
                    const double u = detail::bilinear(f00, f10, f01, f11, xi, eta);
                    cell += 0.25 * u * u * (ra + xi * hr);
                }
            acc += hr * hp * cell;
        });
        return acc;
    }

    // integral of |grad u|^2 r dr dphi; the angular part integrates
    // u_phi^2 / r exactly, including the log terms.
    double gradient_energy() const {
        double acc = 0.0;
        for_cells([&](std::size_t i, std::size_t j) {
            const double ra = r_[i], rb = r_[i + 1];
            const double hr = rb - ra, hp = p_[j + 1] - p_[j];
            const double f00 = at(i, j), f10 = at(i + 1, j), f01 = at(i, j + 1),
                         f11 = at(i + 1, j + 1);
            // radial derivative: (a(1-eta) + b*eta)/hr
            const double a = f10 - f00, b = f11 - f01;
            double rad = 0.0;
            for (const double xi : {detail::kGaussNode0, detail::kGaussNode1})
                for (const double eta : {detail::kGaussNode0, detail::kGaussNode1}) {
                    const double ur = (a * (1 - eta) + b * eta) / hr;
                    rad += 0.25 * ur * ur * (ra + xi * hr);
                }
            acc += hr * hp * rad;
            // angular derivative: u_phi = P + Q r with
            const double A = (f01 - f00) / hp;
            const double B = (f11 - f10 - f01 + f00) / hp;
            const double Q = B / hr;
            const double P = A - Q * ra;
            double ang;
            if (ra == 0.0) {
                // apex cells have A == 0 by the single-value invariant
                ang = Q * Q * rb * rb / 2.0 + 2.0 * P * Q * rb;
            } else {
                ang = P * P * std::log(rb / ra) + 2.0 * P * Q * hr +
                      Q * Q * (rb * rb - ra * ra) / 2.0;
            }
            acc += hp * ang;
        });
        return acc;
    }

    // integral of u^2 along both straight edges (phi = 0 and phi = opening)
    double ray_trace_mass() const {
        double acc = 0.0;
        for (const std::size_t j : {std::size_t{0}, p_.size() - 1}) {
            for (std::size_t i = 0; i + 1 < r_.size(); ++i) {
                const double h = r_[i + 1] - r_[i];
                const double u0 = at(i, j), u1 = at(i + 1, j);
                acc += h * (u0 * u0 + u0 * u1 + u1 * u1) / 3.0;
            }
        }
        return acc;
    }

private:
    template <class F>
    void for_cells(F&& f) const {
        for (std::size_t j = 0; j + 1 < p_.size(); ++j)
            for (std::size_t i = 0; i + 1 < r_.size(); ++i) f(i, j);
    }

    double opening_;
    std::vector<double> r_, p_, v_;
};

}  // namespace robin
