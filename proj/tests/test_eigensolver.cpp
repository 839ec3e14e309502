#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cmath>
#include <vector>

#include "robin/assembly.hpp"
#include "robin/eigensolver.hpp"
#include "robin/mesh.hpp"

using namespace robin;
using Catch::Approx;

namespace {

Eigen::SparseMatrix<double> sparse_from(const Eigen::MatrixXd& d) {
    Eigen::SparseMatrix<double> s(d.rows(), d.cols());
    for (int c = 0; c < d.cols(); ++c)
        for (int r = 0; r < d.rows(); ++r)
            if (d(r, c) != 0.0) s.insert(r, c) = d(r, c);
    s.makeCompressed();
    return s;
}

// 1D Dirichlet Laplacian stiffness/mass on n interior nodes of (0, 1); the
// exact discrete eigenvalues of the generalized problem are known in closed
// form, which makes a solver oracle without any floating-point ambiguity
// beyond basic rounding.
void fd_laplacian(int n, Eigen::SparseMatrix<double>& k, Eigen::SparseMatrix<double>& m) {
    const double h = 1.0 / (n + 1);
    Eigen::MatrixXd kd = Eigen::MatrixXd::Zero(n, n), md = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        kd(i, i) = 2.0 / h;
        md(i, i) = 4.0 * h / 6.0;
        if (i + 1 < n) {
            kd(i, i + 1) = kd(i + 1, i) = -1.0 / h;
            md(i, i + 1) = md(i + 1, i) = h / 6.0;
        }
    }
    k = sparse_from(kd);
    m = sparse_from(md);
}

// P1 discrete eigenvalues on a uniform interval grid.
double fd_eigenvalue(int n, int mode) {
    const double h = 1.0 / (n + 1);
    const double th = mode * kPi * h;
    return (6.0 / (h * h)) * (1.0 - std::cos(th)) / (2.0 + std::cos(th));
}

}  // namespace

TEST_CASE("factorization solves and certifies definiteness", "[eigensolver]") {
    Eigen::MatrixXd a(2, 2);
    a << 2.0, 1.0, 1.0, 2.0;
    Factorization f(sparse_from(a));
    CHECK(f.dimension() == 2);
    Eigen::VectorXd b(2);
    b << 1.0, 0.0;
    Eigen::VectorXd x = f.solve(b);
    CHECK(x[0] == Approx(2.0 / 3.0));
    CHECK(x[1] == Approx(-1.0 / 3.0));

    Eigen::MatrixXd indef(2, 2);
    indef << 1.0, 0.0, 0.0, -1.0;
    CHECK_THROWS_AS(Factorization(sparse_from(indef)), NotPositiveDefinite);
    try {
        Factorization bad(sparse_from(indef));
    } catch (const NotPositiveDefinite& e) {
        CHECK(e.pivot >= 0);
    }

    Eigen::SparseMatrix<double> rect(2, 3);
    CHECK_THROWS_AS(Factorization(rect), std::invalid_argument);
}

TEST_CASE("dense path matches a hand-checked 3x3 pencil", "[eigensolver]") {
    Eigen::MatrixXd k(3, 3), m(3, 3);
    k << 2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 2.0;
    m = Eigen::MatrixXd::Identity(3, 3);
    auto res = lowest_eigenpairs(sparse_from(k), sparse_from(m), EigenOptions{.count = 3});
    REQUIRE(res.pairs.size() == 3);
    // Toeplitz eigenvalues 2 - sqrt(2), 2, 2 + sqrt(2).
    CHECK(res.pairs[0].value == Approx(2.0 - std::sqrt(2.0)).epsilon(1e-12));
    CHECK(res.pairs[1].value == Approx(2.0).epsilon(1e-12));
    CHECK(res.pairs[2].value == Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));
    for (const auto& pr : res.pairs) {
        CHECK(pr.residual <= 1e-12);
        // M-normalized with a deterministic sign.
        CHECK(pr.vector.norm() == Approx(1.0).epsilon(1e-12));
        CHECK(pr.vector[std::max_element(pr.vector.begin(), pr.vector.end(),
                                         [](double x, double y) {
                                             return std::abs(x) < std::abs(y);
                                         }) -
                        pr.vector.begin()] > 0.0);
    }
}

TEST_CASE("iterative path reproduces interval eigenvalues", "[eigensolver]") {
    Eigen::SparseMatrix<double> k, m;
    const int n = 400;  // forces the sparse branch
    fd_laplacian(n, k, m);
    EigenOptions opts;
    opts.count = 5;
    opts.block = 6;
    auto res = lowest_eigenpairs(k, m, opts);
    REQUIRE(res.pairs.size() == 5);
    for (int i = 0; i < 5; ++i) {
        const double want = fd_eigenvalue(n, i + 1);
        CHECK(res.pairs[static_cast<std::size_t>(i)].value == Approx(want).epsilon(1e-10));
        CHECK(res.pairs[static_cast<std::size_t>(i)].residual <=
              1e-9 * (1.0 + std::abs(want)) * 10.0);
    }
    // Residuals re-verified against the definition, not the solver's word.
    for (const auto& pr : res.pairs) {
        const double direct = (k * pr.vector - pr.value * (m * pr.vector)).norm();
        CHECK(direct == Approx(pr.residual).margin(1e-12));
    }
}

TEST_CASE("results do not depend on seed or shift", "[eigensolver]") {
    Eigen::SparseMatrix<double> k, m;
    fd_laplacian(350, k, m);

    EigenOptions a;
    a.count = 3;
    auto ra = lowest_eigenpairs(k, m, a);

    EigenOptions b = a;
    b.seed = 987654321;
    auto rb = lowest_eigenpairs(k, m, b);

    EigenOptions c = a;
    c.shift = -40.0;  // far below the spectrum
    auto rc = lowest_eigenpairs(k, m, c);

    for (int i = 0; i < 3; ++i) {
        const auto si = static_cast<std::size_t>(i);
        CHECK(rb.pairs[si].value == Approx(ra.pairs[si].value).epsilon(1e-10));
        CHECK(rc.pairs[si].value == Approx(ra.pairs[si].value).epsilon(1e-9));
        // Sign-fixed vectors line up, not just the values.
        CHECK((rb.pairs[si].vector - ra.pairs[si].vector).lpNorm<Eigen::Infinity>() <= 1e-6);
    }
}

TEST_CASE("shift above the spectrum is walked down automatically", "[eigensolver]") {
    Eigen::SparseMatrix<double> k, m;
    fd_laplacian(300, k, m);
    EigenOptions opts;
    opts.count = 2;
    opts.shift = 100.0;  // inside the spectrum; the factorization must reject it
    auto res = lowest_eigenpairs(k, m, opts);
    CHECK(res.shift < fd_eigenvalue(300, 1));
    CHECK(res.pairs[0].value == Approx(fd_eigenvalue(300, 1)).epsilon(1e-10));
}

TEST_CASE("toy membrane modes from the assembled form", "[eigensolver]") {
    // Interior Dirichlet square at h = 1/24: lambda_1 near 2 pi^2 and a
    // near-double pair near 5 pi^2. Linear elements at this resolution carry
    // about one percent of discretization error on the second pair, so the
    // tolerances stay loose; the refinement study covers accuracy.
    auto mesh = unit_square_mesh(24);
    auto form = assemble(mesh, 1.0, ArtificialBC::Dirichlet);
    EigenOptions opts;
    opts.count = 3;
    opts.block = 5;
    auto res = solve_lowest(form, opts);
    REQUIRE(res.pairs.size() == 3);
    CHECK(res.pairs[0].value == Approx(2.0 * kPi * kPi).epsilon(0.01));
    CHECK(res.pairs[1].value == Approx(5.0 * kPi * kPi).epsilon(0.02));
    CHECK(res.pairs[2].value == Approx(5.0 * kPi * kPi).epsilon(0.02));
    CHECK(res.pairs[1].value <= res.pairs[2].value);
}

TEST_CASE("eigensolver rejects inconsistent problems", "[eigensolver]") {
    Eigen::SparseMatrix<double> k, m;
    fd_laplacian(50, k, m);
    Eigen::SparseMatrix<double> wrong(30, 30);
    CHECK_THROWS_AS(lowest_eigenpairs(k, wrong, EigenOptions{}), std::invalid_argument);
    CHECK_THROWS_AS(lowest_eigenpairs(k, m, EigenOptions{.count = 0}), std::invalid_argument);
    CHECK_THROWS_AS(lowest_eigenpairs(k, m, EigenOptions{.count = 51}), std::invalid_argument);
    // M must be positive definite.
    Eigen::MatrixXd msing = Eigen::MatrixXd::Zero(50, 50);
    CHECK_THROWS_AS(lowest_eigenpairs(k, sparse_from(msing), EigenOptions{.count = 2}),
                    FactorizationFailure);
}
