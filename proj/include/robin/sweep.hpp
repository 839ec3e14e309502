#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "robin/assembly.hpp"
#include "robin/eigensolver.hpp"
#include "robin/errors.hpp"
#include "robin/geometry.hpp"
#include "robin/mesh.hpp"
#include "robin/model_spectra.hpp"
#include "robin/pool.hpp"

namespace robin {

// Rayleigh-quotient perturbation bound: if a trial map loses at most delta1
// of the norm and adds at most delta2 of form error, an eigenvalue lambda of
// the original problem pushes the target one up to at most this value.
// delta1 at or past 1/(1+lambda) means the bound degenerates.
inline double comparison_bound(double lambda, double delta1, double delta2) {
    if (!(1.0 + lambda > 0.0))
        throw std::invalid_argument("comparison_bound needs lambda > -1");
    const double den = 1.0 - (1.0 + lambda) * delta1;
    if (den < 0.0)
        throw DeltaTooLarge("norm loss " + format_double(delta1) +
                            " exceeds 1/(1+lambda) = " + format_double(1.0 / (1.0 + lambda)));
    if (den == 0.0) return std::numeric_limits<double>::infinity();
    return lambda + (lambda * delta1 + delta2) * (1.0 + lambda) / den;
}

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;  // of log(y) against log(x)
    double residual = 0.0;   // root-mean-square misfit in log coordinates
    int points = 0;
};

// Least-squares slope in log-log coordinates; non-positive values carry no
// information about an algebraic decay rate and are skipped.
inline RateFit fit_rate(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("fit_rate: length mismatch");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0)) throw std::invalid_argument("fit_rate: abscissae must be positive");
        if (ys[i] > 0.0) {
            lx.push_back(std::log(xs[i]));
            ly.push_back(std::log(ys[i]));
        }
    }
    const int n = static_cast<int>(lx.size());
    if (n < 3)
        throw TooFewPoints("rate fit needs at least 3 positive samples, got " +
                           std::to_string(n));
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sx += lx[static_cast<std::size_t>(i)];
        sy += ly[static_cast<std::size_t>(i)];
        sxx += lx[static_cast<std::size_t>(i)] * lx[static_cast<std::size_t>(i)];
        sxy += lx[static_cast<std::size_t>(i)] * ly[static_cast<std::size_t>(i)];
    }
    RateFit fit;
    fit.points = n;
    // Cauchy-Schwarz gives det >= 0 with equality iff all abscissae agree;
    // compare against the natural scale so rounding noise still counts as
    // degenerate.
    const double det = n * sxx - sx * sx;
    if (det <= 1e-12 * n * sxx) throw TooFewPoints("rate fit abscissae are degenerate");
    fit.slope = (n * sxy - sx * sy) / det;
    fit.intercept = (sy * sxx - sx * sxy) / det;
    double ss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double e = ly[static_cast<std::size_t>(i)] -
                         (fit.intercept + fit.slope * lx[static_cast<std::size_t>(i)]);
        ss += e * e;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

enum class SweepBCMode { Both, DirichletOnly, NeumannOnly };

struct SweepConfig {
    std::vector<double> alphas;
    int m_max = 3;
    int refinements = 1;  // levels past the base mesh
    SweepBCMode bc_mode = SweepBCMode::Both;
    double solver_tol = 1e-9;
    std::uint64_t seed = 12345;
    unsigned threads = 0;  // 0: ROBIN_SPECTRA_THREADS, else hardware
    std::optional<TruncationSpec> mesh;  // fixed mesh parameters instead of per-alpha defaults
};

struct SweepEntry {
    double alpha = 0.0;
    int m = 0;           // 1-based mode index
    double e_dir = 0.0;  // finest level, artificial Dirichlet (upper route)
    double e_neu = 0.0;  // finest level, artificial Neumann (lower route)
    double lower = 0.0, upper = 0.0;  // model bracket for E_m + via mu and alpha
    double remainder = 0.0;           // mu_m^D - (enclosure midpoint + alpha^2)
    double eps_h = 0.0;               // numerical enclosure halfwidth
    bool bracket_ok = true;

    double mid() const { return 0.5 * (e_dir + e_neu); }
};

struct SweepViolation {
    double alpha = 0.0;
    int m = 0;
    std::string what;
};

struct SweepReport {
    SweepConfig config;
    std::vector<SweepEntry> entries;           // ordered by (alpha, m)
    std::map<double, int> bound_state_counts;  // alpha -> modes strictly below 0
    std::vector<SweepViolation> violations;
};

namespace sweepdetail {

struct Job {
    std::size_t alpha_idx = 0;
    int level = 0;
    ArtificialBC bc = ArtificialBC::Dirichlet;
    std::vector<double> values;  // lowest eigenvalues, ascending
};

}  // namespace sweepdetail

// Two-sided eigenvalue sweep: for every alpha solve the truncated exterior
// problem on a mesh hierarchy under both artificial boundary conditions.
// The Neumann route bounds the exterior eigenvalue from below, the
// Dirichlet route from above; Richardson differences between levels plus
// the route gap give the numerical halfwidth eps_h.
inline SweepReport run_sweep(const ConvexPolygon& p, const SweepConfig& cfg) {
    if (cfg.alphas.empty()) throw std::invalid_argument("sweep needs at least one alpha");
    if (cfg.m_max < 1) throw std::invalid_argument("sweep needs m_max >= 1");
    if (cfg.refinements < 1)
        throw std::invalid_argument("sweep needs at least one refinement for eps_h");
    for (const double a : cfg.alphas)
        if (!(a > 0.0)) throw NonPositiveAlpha("sweep alpha must be positive");
    if (!std::is_sorted(cfg.alphas.begin(), cfg.alphas.end()))
        throw std::invalid_argument("sweep alphas must be increasing");
    {
        const double amin = cfg.alphas.front();
        const double mu = model_eigenvalue(p, SpectrumKind::Dirichlet, cfg.m_max);
        if (mu >= amin * amin)
            throw BracketInvalid("upper bracket invalid at alpha = " + format_double(amin) +
                                 ": model eigenvalue " + format_double(mu) + " >= alpha^2");
    }

    SweepReport rep;
    rep.config = cfg;

    // meshes per (alpha, level); base meshes depend on alpha through the
    // default spec, so nothing is shared unless the user pinned one
    const int levels = cfg.refinements + 1;
    std::vector<std::vector<TriangleMesh>> meshes(cfg.alphas.size());
    for (std::size_t ai = 0; ai < cfg.alphas.size(); ++ai) {
        const TruncationSpec spec =
            cfg.mesh ? *cfg.mesh : default_spec(p, cfg.alphas[ai], cfg.m_max);
        meshes[ai].push_back(build_mesh(p, spec));
        for (int l = 1; l < levels; ++l) meshes[ai].push_back(refine(meshes[ai].back()));
    }

    std::vector<ArtificialBC> bcs;
    if (cfg.bc_mode != SweepBCMode::DirichletOnly) bcs.push_back(ArtificialBC::Neumann);
    if (cfg.bc_mode != SweepBCMode::NeumannOnly) bcs.push_back(ArtificialBC::Dirichlet);

    std::vector<sweepdetail::Job> jobs;
    for (std::size_t ai = 0; ai < cfg.alphas.size(); ++ai)
        for (int l = 0; l < levels; ++l)
            for (const ArtificialBC bc : bcs) jobs.push_back({ai, l, bc, {}});

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers =
        cfg.threads > 0 ? cfg.threads : worker_count_from_env(hw);
    {
        WorkerPool pool(workers);
        for (auto& job : jobs)
            pool.submit([&job, &meshes, &p, &cfg] {
                const TriangleMesh& mesh = meshes[job.alpha_idx][static_cast<std::size_t>(job.level)];
                const double alpha = cfg.alphas[job.alpha_idx];
                const DiscreteForm form = assemble(mesh, alpha, job.bc);
                EigenOptions opts;
                opts.count = cfg.m_max + 1;
                opts.block = std::max({4, p.side_count() + 1, cfg.m_max + 1});
                opts.tol = cfg.solver_tol;
                opts.seed = cfg.seed;
                const EigenResult res = solve_lowest(form, opts);
                for (const auto& pr : res.pairs) job.values.push_back(pr.value);
            });
        pool.wait();
    }

    const auto find_job = [&](std::size_t ai, int level, ArtificialBC bc)
        -> const sweepdetail::Job& {
        for (const auto& j : jobs)
            if (j.alpha_idx == ai && j.level == level && j.bc == bc) return j;
        throw Error("sweep job bookkeeping failed");
    };

    for (std::size_t ai = 0; ai < cfg.alphas.size(); ++ai) {
        const double alpha = cfg.alphas[ai];
        const sweepdetail::Job* neu_f = nullptr;
        const sweepdetail::Job* dir_f = nullptr;
        const sweepdetail::Job* neu_c = nullptr;
        const sweepdetail::Job* dir_c = nullptr;
        if (cfg.bc_mode != SweepBCMode::DirichletOnly) {
            neu_f = &find_job(ai, levels - 1, ArtificialBC::Neumann);
            neu_c = &find_job(ai, levels - 2, ArtificialBC::Neumann);
        }
        if (cfg.bc_mode != SweepBCMode::NeumannOnly) {
            dir_f = &find_job(ai, levels - 1, ArtificialBC::Dirichlet);
            dir_c = &find_job(ai, levels - 2, ArtificialBC::Dirichlet);
        }
        // a single-route sweep reports that route on both columns
        if (!neu_f) neu_f = dir_f, neu_c = dir_c;
        if (!dir_f) dir_f = neu_f, dir_c = neu_c;

        int below_zero = 0;
        for (int m = 1; m <= cfg.m_max; ++m) {
            const std::size_t i = static_cast<std::size_t>(m - 1);
            SweepEntry e;
            e.alpha = alpha;
            e.m = m;
            e.e_dir = dir_f->values[i];
            e.e_neu = neu_f->values[i];
            const Bracket br = bracket(p, alpha, m);
            e.lower = br.lower;
            e.upper = br.upper;
            const double rich = std::max(std::abs(dir_c->values[i] - e.e_dir),
                                         std::abs(neu_c->values[i] - e.e_neu));
            e.eps_h = rich + 0.5 * std::abs(e.e_dir - e.e_neu) +
                      cfg.solver_tol * (1.0 + std::abs(e.mid()));
            e.remainder = br.mu_dirichlet - (e.mid() + alpha * alpha);
            if (e.mid() < -std::max(e.eps_h, 1e-10)) ++below_zero;
            rep.entries.push_back(e);
        }
        rep.bound_state_counts[alpha] = below_zero;
    }

    for (auto& e : rep.entries) {
        const Bracket br = bracket(p, e.alpha, e.m);
        std::string why;
        if (!br.valid)
            why = "model bracket invalid at this alpha";
        else if (e.e_neu < e.lower - 1e-6)
            why = "lower route " + format_double(e.e_neu) + " under bracket floor " +
                  format_double(e.lower);
        else if (e.mid() > e.upper + e.eps_h)
            why = "midpoint " + format_double(e.mid()) + " over bracket ceiling " +
                  format_double(e.upper) + " + eps_h " + format_double(e.eps_h);
        e.bracket_ok = why.empty();
        if (!e.bracket_ok) rep.violations.push_back({e.alpha, e.m, why});
    }
    return rep;
}

struct BracketPolicy {
    double lower_slack = 1e-6;  // absolute slack under the exact floor
    double upper_extra = 0.0;   // extra allowance on top of eps_h
};

struct BracketCheck {
    double alpha = 0.0;
    int m = 0;
    bool lower_ok = true;
    bool upper_ok = true;
    std::string what;
};

// Re-evaluates the two-sided containment per record under a given slack
// policy. The lower bound is exact up to solver noise (truncation and
// Galerkin both raise eigenvalues on the routes used); the upper bound
// holds up to the discretization halfwidth.
inline std::vector<BracketCheck> check_brackets(const SweepReport& rep,
                                                const BracketPolicy& policy = {}) {
    std::vector<BracketCheck> out;
    for (const SweepEntry& e : rep.entries) {
        BracketCheck c;
        c.alpha = e.alpha;
        c.m = e.m;
        c.lower_ok = e.e_neu >= e.lower - policy.lower_slack;
        c.upper_ok = e.mid() <= e.upper + e.eps_h + policy.upper_extra;
        if (!c.lower_ok)
            c.what = "E_neu " + format_double(e.e_neu) + " < lower " + format_double(e.lower);
        else if (!c.upper_ok)
            c.what = "mid " + format_double(e.mid()) + " > upper " + format_double(e.upper) +
                     " + eps_h " + format_double(e.eps_h);
        out.push_back(std::move(c));
    }
    return out;
}

inline bool all_brackets_ok(const SweepReport& rep) { return rep.violations.empty(); }

// Decay of the m-th remainder along the sweep; callers fit a rate on it.
inline std::vector<double> remainder_series(const SweepReport& rep, int m,
                                            std::vector<double>* alphas_out = nullptr) {
    std::vector<double> rs;
    for (const auto& e : rep.entries)
        if (e.m == m) {
            rs.push_back(e.remainder);
            if (alphas_out) alphas_out->push_back(e.alpha);
        }
    return rs;
}

}  // namespace robin
