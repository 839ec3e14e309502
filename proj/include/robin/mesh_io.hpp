#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "robin/errors.hpp"
#include "robin/mesh.hpp"

namespace robin {

// Plain-text mesh exchange format:
//   <node count>
//   x y                 (one node per line, shortest round-trip floats)
//   <triangle count>
//   i j k               (0-based node ids, positive orientation)
//   <boundary edge count>
//   i j tag             (tag R1..Rm for Robin walls, A for the artificial boundary)
inline void write_mesh_text(std::ostream& os, const TriangleMesh& m) {
    os << m.nodes.size() << "\n";
    for (const Vec2& p : m.nodes) os << format_double(p.x) << " " << format_double(p.y) << "\n";
    os << m.triangles.size() << "\n";
    for (const auto& t : m.triangles) os << t[0] << " " << t[1] << " " << t[2] << "\n";
    os << m.boundary_edges.size() << "\n";
    for (const auto& e : m.boundary_edges) {
        os << e.a << " " << e.b << " ";
        if (e.side < 0)
            os << "A\n";
        else
            os << "R" << (e.side + 1) << "\n";
    }
}

inline TriangleMesh read_mesh_text(std::istream& is) {
    TriangleMesh m;
    std::size_t nn = 0;
    if (!(is >> nn)) throw InvalidMesh("truncated mesh file: node count");
    m.nodes.resize(nn);
    for (auto& p : m.nodes)
        if (!(is >> p.x >> p.y)) throw InvalidMesh("truncated mesh file: nodes");
    std::size_t nt = 0;
    if (!(is >> nt)) throw InvalidMesh("truncated mesh file: triangle count");
    m.triangles.resize(nt);
    for (auto& t : m.triangles)
        if (!(is >> t[0] >> t[1] >> t[2])) throw InvalidMesh("truncated mesh file: triangles");
    std::size_t nb = 0;
    if (!(is >> nb)) throw InvalidMesh("truncated mesh file: boundary edge count");
    m.boundary_edges.resize(nb);
    for (auto& e : m.boundary_edges) {
        std::string tag;
        if (!(is >> e.a >> e.b >> tag)) throw InvalidMesh("truncated mesh file: boundary edges");
        if (tag == "A") {
            e.side = -1;
        } else if (tag.size() > 1 && tag[0] == 'R') {
            e.side = std::stoi(tag.substr(1)) - 1;
        } else {
            throw InvalidMesh("unknown boundary tag '" + tag + "'");
        }
    }
    double sc = 1.0;
    for (const Vec2& p : m.nodes) sc = std::max({sc, std::abs(p.x), std::abs(p.y)});
    m.scale = sc;
    validate_mesh(m);
    return m;
}

// Minimal standalone SVG viewer output: triangle edges in grey, Robin wall
// in red, artificial boundary in blue.
inline void write_mesh_svg(std::ostream& os, const TriangleMesh& m) {
    double x0 = m.nodes[0].x, x1 = x0, y0 = m.nodes[0].y, y1 = y0;
    for (const Vec2& p : m.nodes) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    const double w = std::max(x1 - x0, 1e-300), h = std::max(y1 - y0, 1e-300);
    const double px = 900.0, margin = 20.0;
    const double sc = (px - 2 * margin) / std::max(w, h);
    const auto X = [&](double x) { return margin + (x - x0) * sc; };
    const auto Y = [&](double y) { return margin + (y1 - y) * sc; };  // flip: SVG y grows down

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << static_cast<int>(px)
       << "\" height=\"" << static_cast<int>(2 * margin + h * sc) << "\">\n";
    os << "<g stroke=\"#999\" stroke-width=\"0.4\" fill=\"none\">\n";
    for (const auto& t : m.triangles) {
        os << "<path d=\"";
        for (int e = 0; e < 3; ++e) {
            const Vec2 p = m.nodes[static_cast<std::size_t>(t[static_cast<std::size_t>(e)])];
            os << (e == 0 ? "M" : "L") << format_double(X(p.x)) << " " << format_double(Y(p.y));
        }
        os << "Z\"/>\n";
    }
    os << "</g>\n<g stroke-width=\"1.4\" fill=\"none\">\n";
    for (const auto& e : m.boundary_edges) {
        const Vec2 a = m.nodes[static_cast<std::size_t>(e.a)];
        const Vec2 b = m.nodes[static_cast<std::size_t>(e.b)];
        os << "<line x1=\"" << format_double(X(a.x)) << "\" y1=\"" << format_double(Y(a.y))
           << "\" x2=\"" << format_double(X(b.x)) << "\" y2=\"" << format_double(Y(b.y))
           << "\" stroke=\"" << (e.side < 0 ? "#36c" : "#c33") << "\"/>\n";
    }
    os << "</g>\n</svg>\n";
}

}  // namespace robin
