#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <random>
#include <set>
#include <sstream>

#include "robin/assembly.hpp"
#include "robin/mesh.hpp"
#include "support.hpp"

using namespace robin;
using Catch::Approx;

namespace {

// One reference triangle with legs on the axes. Tag selects which edge (if
// any) carries the Robin wall; the others are artificial.
TriangleMesh reference_triangle(int wall_edge) {
    TriangleMesh m;
    m.nodes = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    m.triangles = {{0, 1, 2}};
    m.boundary_edges = {{0, 1, wall_edge == 0 ? 0 : -1},
                        {1, 2, wall_edge == 1 ? 0 : -1},
                        {2, 0, wall_edge == 2 ? 0 : -1}};
    return m;
}

}  // namespace

TEST_CASE("element matrices on the reference triangle", "[assembly]") {
    auto form = assemble(reference_triangle(-1), 1.0, ArtificialBC::Neumann);
    REQUIRE(form.unknowns() == 3);

    // Stiffness: (1/2) [[2, -1, -1], [-1, 1, 0], [-1, 0, 1]].
    Eigen::MatrixXd a = Eigen::MatrixXd(form.stiffness);
    CHECK(a(0, 0) == Approx(1.0));
    CHECK(a(0, 1) == Approx(-0.5));
    CHECK(a(0, 2) == Approx(-0.5));
    CHECK(a(1, 1) == Approx(0.5));
    CHECK(a(1, 2) == Approx(0.0).margin(1e-15));
    CHECK(a(2, 2) == Approx(0.5));
    // Hat functions sum to 1, so rows of the stiffness sum to 0.
    for (int i = 0; i < 3; ++i) CHECK(a.row(i).sum() == Approx(0.0).margin(1e-15));

    // Mass: area/12 * [[2,1,1],[1,2,1],[1,1,2]] with area 1/2.
    Eigen::MatrixXd mm = Eigen::MatrixXd(form.mass);
    CHECK(mm(0, 0) == Approx(1.0 / 12.0));
    CHECK(mm(0, 1) == Approx(1.0 / 24.0));
    CHECK(mm.sum() == Approx(0.5));

    // No Robin edge: empty wall mass.
    CHECK(form.wall_mass.nonZeros() == 0);
}

TEST_CASE("wall mass of a single tagged edge", "[assembly]") {
    auto form = assemble(reference_triangle(0), 2.0, ArtificialBC::Neumann);
    Eigen::MatrixXd b = Eigen::MatrixXd(form.wall_mass);
    // Edge (0,1) has unit length: mass block h/6 [[2,1],[1,2]].
    CHECK(b(0, 0) == Approx(1.0 / 3.0));
    CHECK(b(0, 1) == Approx(1.0 / 6.0));
    CHECK(b(1, 1) == Approx(1.0 / 3.0));
    CHECK(b.row(2).norm() == 0.0);
    // Total wall trace of the constant 1 equals the wall length.
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(3);
    CHECK(ones.dot(form.wall_mass * ones) == Approx(1.0));

    // robin_operator folds the wall into the stiffness with the -alpha sign.
    Eigen::MatrixXd k = Eigen::MatrixXd(form.robin_operator());
    Eigen::MatrixXd a = Eigen::MatrixXd(form.stiffness);
    CHECK(k(0, 1) == Approx(a(0, 1) - 2.0 / 6.0));
    CHECK(k(2, 2) == Approx(a(2, 2)));
}

TEST_CASE("square toy mesh assembles to the interior laplacian", "[assembly]") {
    auto mesh = unit_square_mesh(8);

    // Neumann: every node is an unknown, constants are in the kernel.
    auto nf = assemble(mesh, 1.0, ArtificialBC::Neumann);
    REQUIRE(nf.unknowns() == 81);
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(nf.unknowns());
    CHECK(ones.dot(nf.mass * ones) == Approx(1.0).epsilon(1e-13));
    CHECK((nf.stiffness * ones).lpNorm<Eigen::Infinity>() <= 1e-12);
    CHECK(nf.wall_mass.nonZeros() == 0);

    // Dirichlet: the 32 outer nodes are eliminated.
    auto df = assemble(mesh, 1.0, ArtificialBC::Dirichlet);
    REQUIRE(df.unknowns() == 49);
    for (int u = 0; u < df.unknowns(); ++u) {
        const int node = df.unknown_to_node[static_cast<std::size_t>(u)];
        CHECK(df.node_to_unknown[static_cast<std::size_t>(node)] == u);
    }
}

TEST_CASE("assembled wall mass resolves the polygon perimeter", "[assembly]") {
    auto p = testsupport::unit_square_polygon();
    TruncationSpec spec;
    spec.offset = 0.6;
    spec.h_boundary_layer = 0.05;
    spec.h_interior = 0.2;
    spec.grading_levels = 1;
    auto mesh = build_mesh(p, spec);
    auto form = assemble(mesh, 4.0, ArtificialBC::Neumann);
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(form.unknowns());
    CHECK(ones.dot(form.wall_mass * ones) == Approx(4.0).epsilon(1e-9));

    // Dirichlet elimination removes exactly the artificial-loop nodes.
    auto df = assemble(mesh, 4.0, ArtificialBC::Dirichlet);
    std::set<int> outer;
    for (const auto& e : mesh.boundary_edges)
        if (e.side < 0) {
            outer.insert(e.a);
            outer.insert(e.b);
        }
    CHECK(df.unknowns() == form.unknowns() - static_cast<int>(outer.size()));
}

TEST_CASE("rayleigh quotient stays above the half-line bottom", "[assembly]") {
    auto p = testsupport::unit_square_polygon();
    TruncationSpec spec;
    spec.offset = 0.8;
    spec.h_boundary_layer = 0.05;
    spec.h_interior = 0.2;
    spec.grading_levels = 1;
    auto mesh = build_mesh(p, spec);
    const double alpha = 4.0;
    auto form = assemble(mesh, alpha, ArtificialBC::Dirichlet);

    std::mt19937_64 rng(11501);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::VectorXd x(form.unknowns());
        for (int i = 0; i < x.size(); ++i) x[i] = gauss(rng);
        CHECK(rayleigh(form, x) >= -alpha * alpha - 1e-8);
    }
}

TEST_CASE("assembly and rayleigh reject bad input", "[assembly]") {
    auto mesh = unit_square_mesh(2);
    CHECK_THROWS_AS(assemble(mesh, 0.0, ArtificialBC::Neumann), NonPositiveAlpha);
    CHECK_THROWS_AS(assemble(mesh, -1.0, ArtificialBC::Neumann), NonPositiveAlpha);

    auto form = assemble(mesh, 1.0, ArtificialBC::Neumann);
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(form.unknowns());
    CHECK_THROWS_AS(rayleigh(form, zero), ZeroVector);
    Eigen::VectorXd wrong = Eigen::VectorXd::Ones(form.unknowns() + 3);
    CHECK_THROWS_AS(rayleigh(form, wrong), std::invalid_argument);
}

TEST_CASE("matrix dump prints the upper triangle in column order", "[assembly]") {
    Eigen::SparseMatrix<double> a(2, 2);
    a.insert(0, 0) = 2.0;
    a.insert(1, 0) = 1.0;
    a.insert(0, 1) = 1.0;
    a.insert(1, 1) = 2.0;
    a.makeCompressed();
    std::ostringstream os;
    dump_matrix(os, a);
    CHECK(os.str() == "2 3\n0 0 2\n0 1 1\n1 1 2\n");
}
