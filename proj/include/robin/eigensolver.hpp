#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "robin/assembly.hpp"
#include "robin/errors.hpp"

namespace robin {

struct EigenOptions {
    int count = 4;          // eigenpairs wanted, ascending from the bottom
    int block = 4;          // simultaneous directions; >= expected multiplicity
    int max_basis = 48;     // search-space columns before a thick restart
    int max_steps = 400;    // total block-append steps across restarts
    double tol = 1e-9;      // residual tolerance, relative to 1 + |lambda|
    double shift = std::numeric_limits<double>::quiet_NaN();  // NaN = pick internally
    std::uint64_t seed = 12345;
};

struct EigenPair {
    double value = 0.0;
    Eigen::VectorXd vector;  // M-normalized, deterministic sign
    double residual = 0.0;   // ||K x - lambda M x||_2
};

struct EigenResult {
    std::vector<EigenPair> pairs;
    double shift = 0.0;
    int steps = 0;
};

// Sparse LDLT of a symmetric positive definite matrix. Construction fails
// with the offending pivot index when the matrix is not definite, which the
// eigensolver uses to walk its shift below the spectrum.
class Factorization {
public:
    explicit Factorization(const Eigen::SparseMatrix<double>& a) : n_(static_cast<int>(a.rows())) {
        if (a.rows() != a.cols())
            throw std::invalid_argument("factorization needs a square matrix");
        Eigen::SparseMatrix<double> compressed = a;
        compressed.makeCompressed();
        ldlt_.compute(compressed);
        if (ldlt_.info() != Eigen::Success)
            throw FactorizationFailure("sparse LDLT factorization failed");
        const auto& d = ldlt_.vectorD();
        for (int i = 0; i < d.size(); ++i)
            if (!(d[i] > 0.0))
                throw NotPositiveDefinite("non-positive pivot at index " + std::to_string(i), i);
    }

    Eigen::VectorXd solve(const Eigen::VectorXd& b) const { return ldlt_.solve(b); }
    int dimension() const { return n_; }

private:
    int n_;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
};

namespace eigdetail {

inline void fix_sign(Eigen::VectorXd& v) {
    int arg = 0;
    double best = 0.0;
    for (int i = 0; i < v.size(); ++i)
        if (std::abs(v[i]) > best) {
            best = std::abs(v[i]);
            arg = i;
        }
    if (v[arg] < 0.0) v = -v;
}

inline double pair_residual(const Eigen::SparseMatrix<double>& k,
                            const Eigen::SparseMatrix<double>& m, double lambda,
                            const Eigen::VectorXd& x) {
    return (k * x - lambda * (m * x)).norm();
}

// Small problems go through a dense generalized solver; no iteration noise.
inline EigenResult dense_lowest(const Eigen::SparseMatrix<double>& k,
                                const Eigen::SparseMatrix<double>& m, int count) {
    Eigen::MatrixXd kd = Eigen::MatrixXd(k);
    Eigen::MatrixXd md = Eigen::MatrixXd(m);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(kd, md);
    if (es.info() != Eigen::Success) throw FactorizationFailure("dense eigensolve failed");
    EigenResult out;
    out.shift = 0.0;
    for (int i = 0; i < count; ++i) {
        EigenPair p;
        p.value = es.eigenvalues()[i];
        p.vector = es.eigenvectors().col(i);
        const double nm = std::sqrt(p.vector.dot(md * p.vector));
        p.vector /= nm;
        fix_sign(p.vector);
        p.residual = pair_residual(k, m, p.value, p.vector);
        out.pairs.push_back(std::move(p));
    }
    return out;
}

}  // namespace eigdetail

// Lowest eigenpairs of K x = lambda M x for sparse symmetric K and SPD M.
// Shift-invert block iteration with Rayleigh-Ritz extraction and thick
// restarts; the shifted matrix must be positive definite, so the shift is
// walked downward automatically until its factorization confirms it sits
// below the spectrum.
inline EigenResult lowest_eigenpairs(const Eigen::SparseMatrix<double>& k,
                                     const Eigen::SparseMatrix<double>& m, EigenOptions opts) {
    const int n = static_cast<int>(k.rows());
    if (k.rows() != k.cols() || m.rows() != m.cols() || m.rows() != k.rows())
        throw std::invalid_argument("eigensolver: matrix shapes disagree");
    if (opts.count < 1 || opts.count > n)
        throw std::invalid_argument("eigensolver: invalid eigenpair count");

    {
        // M must be positive definite for the M-inner-product iteration
        const Factorization mcheck(m);
    }

    if (n <= 200 || opts.count >= n / 2) return eigdetail::dense_lowest(k, m, opts.count);

    double sigma = std::isnan(opts.shift) ? -1.0 : opts.shift;
    std::unique_ptr<Factorization> fac;
    {
        double step = 1.0 + std::abs(sigma);
        int tries = 0;
        for (;;) {
            try {
                fac = std::make_unique<Factorization>(
                    Eigen::SparseMatrix<double>(k - sigma * m));
                break;
            } catch (const FactorizationFailure&) {
                if (++tries > 5)
                    throw FactorizationFailure(
                        "could not find a shift below the spectrum; last tried " +
                        format_double(sigma));
                sigma -= step;
                step *= 2.0;
            }
        }
    }

    const int block = std::min(std::max(opts.block, 1), std::max(1, n / 4));
    int cap = std::max(opts.max_basis, opts.count + 3 * block + 2);
    cap = std::min(cap, n);
    const int keep = std::min(opts.count + 2 * block, cap - block);

    Eigen::MatrixXd v(n, cap), w(n, cap);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(cap, cap);
    int p = 0;

    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const auto random_column = [&](Eigen::Ref<Eigen::VectorXd> col) {
        for (int i = 0; i < n; ++i) col[i] = unit(rng);
    };

    // Two-pass block Gram-Schmidt in the M inner product. Columns arrive as
    // shift-invert images whose norms shrink with convergence, so each is
    // normalized first and judged by the RELATIVE size of what survives the
    // projections; an absolute floor here would discard the residual
    // directions of nearly converged modes and stall every restart cycle.
    // Columns with no novel content left are re-randomized once, then dropped.
    const auto orthonormalize = [&](Eigen::MatrixXd& x) -> int {
        int cols = static_cast<int>(x.cols());
        int out = 0;
        for (int j = 0; j < cols; ++j) {
            Eigen::VectorXd col = x.col(j);
            for (int attempt = 0; attempt < 2; ++attempt) {
                const double nm0 = std::sqrt(std::max(0.0, col.dot(m * col)));
                if (nm0 > 0.0) col /= nm0;
                for (int pass = 0; pass < 2; ++pass) {
                    if (p > 0) {
                        const Eigen::VectorXd mc = m * col;
                        col -= v.leftCols(p) * (v.leftCols(p).transpose() * mc);
                    }
                    for (int i = 0; i < out; ++i)
                        col -= x.col(i) * x.col(i).dot(m * col);
                }
                const double nm = std::sqrt(std::max(0.0, col.dot(m * col)));
                if (nm0 > 0.0 && nm > 1e-10) {
                    col /= nm;
                    x.col(out) = col;
                    ++out;
                    break;
                }
                if (attempt == 0) random_column(col);
            }
        }
        return out;
    };

    EigenResult result;
    result.shift = sigma;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small;
    Eigen::MatrixXd next(n, 0);  // residual directions chosen by the last pass

    for (int step = 0; step < opts.max_steps; ++step) {
        // Next directions: a fresh random block at the start; afterwards the
        // Ritz residual directions (S - theta) x of the unconverged pairs,
        // padded with the power chain of the newest columns. Residual
        // directions matter: after a thick restart the power images of kept
        // Ritz vectors are in-span up to the tiny Lanczos coupling, while
        // the residuals expose that coupling at full relative size.
        Eigen::MatrixXd x;
        if (p == 0) {
            x.resize(n, block);
            for (int j = 0; j < block; ++j) random_column(x.col(j));
        } else {
            const int b2 = std::min(block, p);
            const int take = std::min(static_cast<int>(next.cols()), block);
            const int pad = std::min(block - take, b2);
            x.resize(n, take + pad);
            x.leftCols(take) = next.leftCols(take);
            if (pad > 0) x.rightCols(pad) = w.middleCols(p - pad, pad);
        }
        next.resize(n, 0);
        const int got = orthonormalize(x);
        if (got == 0) throw NoConvergence("search space collapsed");
        v.middleCols(p, got) = x.leftCols(got);
        for (int j = 0; j < got; ++j)
            w.col(p + j) = fac->solve(m * v.col(p + j));
        const Eigen::MatrixXd hnew =
            v.leftCols(p + got).transpose() * (m * w.middleCols(p, got));
        h.block(0, p, p + got, got) = hnew;
        h.block(p, 0, got, p) = hnew.topRows(p).transpose();
        p += got;
        result.steps = step + 1;

        small.compute(h.topLeftCorner(p, p));
        if (small.info() != Eigen::Success) throw NoConvergence("projected eigensolve failed");
        const int avail = std::min(opts.count, p);
        bool all_ok = avail == opts.count;
        std::vector<EigenPair> pairs;
        std::vector<Eigen::VectorXd> dirs;
        for (int i = 0; i < avail; ++i) {
            const double theta = small.eigenvalues()[p - 1 - i];  // largest first
            if (!(theta > 0.0)) {
                all_ok = false;
                break;
            }
            const auto yv = small.eigenvectors().col(p - 1 - i);
            const Eigen::VectorXd ritz = v.leftCols(p) * yv;
            EigenPair pr;
            pr.value = sigma + 1.0 / theta;
            pr.vector = ritz;
            const double nm = std::sqrt(pr.vector.dot(m * pr.vector));
            pr.vector /= nm;
            pr.residual = eigdetail::pair_residual(k, m, pr.value, pr.vector);
            if (pr.residual > opts.tol * (1.0 + std::abs(pr.value))) {
                all_ok = false;
                if (static_cast<int>(dirs.size()) < block)
                    dirs.push_back(w.leftCols(p) * yv - theta * ritz);
            }
            pairs.push_back(std::move(pr));
        }
        if (all_ok) {
            std::sort(pairs.begin(), pairs.end(),
                      [](const EigenPair& a, const EigenPair& b) { return a.value < b.value; });
            for (auto& pr : pairs) eigdetail::fix_sign(pr.vector);
            result.pairs = std::move(pairs);
            return result;
        }
        if (!dirs.empty()) {
            next.resize(n, static_cast<int>(dirs.size()));
            for (int j = 0; j < next.cols(); ++j) next.col(j) = dirs[static_cast<size_t>(j)];
        }

        if (p + block > cap) {
            // thick restart: compress onto the best Ritz vectors
            const int kp = std::min(keep, p);
            const Eigen::MatrixXd y = small.eigenvectors().rightCols(kp);
            const Eigen::MatrixXd vk = v.leftCols(p) * y;
            const Eigen::MatrixXd wk = w.leftCols(p) * y;
            v.leftCols(kp) = vk;
            w.leftCols(kp) = wk;
            h.topLeftCorner(kp, kp) = small.eigenvalues().tail(kp).asDiagonal();
            p = kp;
        }
    }
    throw NoConvergence("eigensolver did not converge in " + std::to_string(opts.max_steps) +
                        " steps");
}

// Convenience wrapper for the assembled Robin form; the default shift sits
// one unit below -alpha^2, which is below the whole spectrum.
inline EigenResult solve_lowest(const DiscreteForm& form, EigenOptions opts = {}) {
    if (std::isnan(opts.shift)) opts.shift = -form.alpha * form.alpha - 1.0;
    return lowest_eigenpairs(form.robin_operator(), form.mass, opts);
}

}  // namespace robin
