#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <ostream>
#include <unordered_set>
#include <vector>

#include "robin/errors.hpp"
#include "robin/mesh.hpp"

namespace robin {

// P1 Galerkin matrices of the truncated Robin form on the exterior collar:
//   q(u) = \int |grad u|^2 - alpha \int_wall u^2
// split as stiffness - alpha * wall_mass, with the L2 mass alongside.
// With an artificial Dirichlet condition the outer-boundary nodes are
// eliminated; node_to_unknown maps mesh nodes to matrix rows (-1 = gone).
struct DiscreteForm {
    Eigen::SparseMatrix<double> stiffness;
    Eigen::SparseMatrix<double> wall_mass;
    Eigen::SparseMatrix<double> mass;
    std::vector<int> node_to_unknown;
    std::vector<int> unknown_to_node;
    double alpha = 1.0;
    ArtificialBC bc = ArtificialBC::Dirichlet;

    int unknowns() const { return static_cast<int>(stiffness.rows()); }

    Eigen::SparseMatrix<double> robin_operator() const {
        Eigen::SparseMatrix<double> k = stiffness - alpha * wall_mass;
        k.makeCompressed();
        return k;
    }
};

inline DiscreteForm assemble(const TriangleMesh& mesh, double alpha, ArtificialBC bc) {
    if (!(alpha > 0.0))
        throw NonPositiveAlpha("alpha must be positive, got " + format_double(alpha));
    validate_mesh(mesh);

    const int nn = static_cast<int>(mesh.nodes.size());
    DiscreteForm form;
    form.alpha = alpha;
    form.bc = bc;
    form.node_to_unknown.assign(static_cast<std::size_t>(nn), -1);

    std::unordered_set<int> eliminated;
    if (bc == ArtificialBC::Dirichlet)
        for (const auto& e : mesh.boundary_edges)
            if (e.side < 0) {
                eliminated.insert(e.a);
                eliminated.insert(e.b);
            }
    for (int v = 0; v < nn; ++v)
        if (eliminated.find(v) == eliminated.end()) {
            form.node_to_unknown[static_cast<std::size_t>(v)] =
                static_cast<int>(form.unknown_to_node.size());
            form.unknown_to_node.push_back(v);
        }
    const int n = static_cast<int>(form.unknown_to_node.size());
    if (n == 0) throw InvalidMesh("no unknowns left after boundary elimination");

    using T = Eigen::Triplet<double>;
    std::vector<T> ta, tm, tb;
    ta.reserve(mesh.triangles.size() * 9);
    tm.reserve(mesh.triangles.size() * 9);

    for (std::size_t k = 0; k < mesh.triangles.size(); ++k) {
        const auto& t = mesh.triangles[k];
        const Vec2 p[3] = {mesh.nodes[static_cast<std::size_t>(t[0])],
                           mesh.nodes[static_cast<std::size_t>(t[1])],
                           mesh.nodes[static_cast<std::size_t>(t[2])]};
        const double area = 0.5 * cross(p[1] - p[0], p[2] - p[0]);
        if (!(area > 0.0)) throw InvalidMesh("non-positive area in assembly");
        // edge vector opposite vertex i; grad of the i-th hat is its
        // quarter-turn over 2*area, so the stiffness entry is a dot product
        Vec2 g[3];
        for (int i = 0; i < 3; ++i)
            g[i] = p[(i + 2) % 3] - p[(i + 1) % 3];
        for (int i = 0; i < 3; ++i) {
            const int ui = form.node_to_unknown[static_cast<std::size_t>(t[static_cast<std::size_t>(i)])];
            if (ui < 0) continue;
            for (int j = 0; j < 3; ++j) {
                const int uj = form.node_to_unknown[static_cast<std::size_t>(t[static_cast<std::size_t>(j)])];
                if (uj < 0) continue;
                ta.emplace_back(ui, uj, dot(g[i], g[j]) / (4.0 * area));
                tm.emplace_back(ui, uj, area / 12.0 * (i == j ? 2.0 : 1.0));
            }
        }
    }

    for (const auto& e : mesh.boundary_edges) {
        if (e.side < 0) continue;
        const double h = dist(mesh.nodes[static_cast<std::size_t>(e.a)],
                              mesh.nodes[static_cast<std::size_t>(e.b)]);
        const int ua = form.node_to_unknown[static_cast<std::size_t>(e.a)];
        const int ub = form.node_to_unknown[static_cast<std::size_t>(e.b)];
        if (ua >= 0) tb.emplace_back(ua, ua, h / 3.0);
        if (ub >= 0) tb.emplace_back(ub, ub, h / 3.0);
        if (ua >= 0 && ub >= 0) {
            tb.emplace_back(ua, ub, h / 6.0);
            tb.emplace_back(ub, ua, h / 6.0);
        }
    }

    form.stiffness.resize(n, n);
    form.mass.resize(n, n);
    form.wall_mass.resize(n, n);
    form.stiffness.setFromTriplets(ta.begin(), ta.end());
    form.mass.setFromTriplets(tm.begin(), tm.end());
    form.wall_mass.setFromTriplets(tb.begin(), tb.end());
    form.stiffness.makeCompressed();
    form.mass.makeCompressed();
    form.wall_mass.makeCompressed();
    return form;
}

inline double rayleigh(const DiscreteForm& form, const Eigen::VectorXd& x) {
    if (x.size() != form.stiffness.rows())
        throw std::invalid_argument("rayleigh: vector length does not match the form");
    const double den = x.dot(form.mass * x);
    if (!(den > 0.0)) throw ZeroVector("rayleigh quotient of a zero vector");
    const double num = x.dot(form.stiffness * x) - form.alpha * x.dot(form.wall_mass * x);
    return num / den;
}

// Upper-triangle coordinate dump: "dim nnz" header, then "i j value" rows
// in column order. Value formatting is shortest round-trip.
inline void dump_matrix(std::ostream& os, const Eigen::SparseMatrix<double>& a) {
    std::size_t nnz = 0;
    for (int c = 0; c < a.outerSize(); ++c)
        for (Eigen::SparseMatrix<double>::InnerIterator it(a, c); it; ++it)
            if (it.row() <= it.col()) ++nnz;
    os << a.rows() << " " << nnz << "\n";
    for (int c = 0; c < a.outerSize(); ++c)
        for (Eigen::SparseMatrix<double>::InnerIterator it(a, c); it; ++it)
            if (it.row() <= it.col())
                os << it.row() << " " << it.col() << " " << format_double(it.value()) << "\n";
}

}  // namespace robin
