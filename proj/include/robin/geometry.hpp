#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "robin/core.hpp"
#include "robin/errors.hpp"

namespace robin {

// Strictly convex planar polygon with counterclockwise vertex order.
// Instances only come out of validate(), so code downstream can rely on
// positive side lengths and strict convexity without re-checking.
class ConvexPolygon {
public:
    // Normalizes orientation to CCW and checks strict convexity. Cross
    // products are compared against 1e-12 * (bounding box scale)^2.
    static ConvexPolygon validate(std::vector<Vec2> vertices) {
        if (vertices.size() < 3)
            throw TooFewVertices("polygon needs at least 3 vertices, got " +
                                 std::to_string(vertices.size()));
        double area2 = 0.0;
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            const Vec2 a = vertices[i];
            const Vec2 b = vertices[(i + 1) % vertices.size()];
            area2 += cross(a, b);
        }
        if (area2 < 0.0) std::reverse(vertices.begin(), vertices.end());

        double lo_x = vertices[0].x, hi_x = lo_x, lo_y = vertices[0].y, hi_y = lo_y;
        for (const Vec2 v : vertices) {
            lo_x = std::min(lo_x, v.x);
            hi_x = std::max(hi_x, v.x);
            lo_y = std::min(lo_y, v.y);
            hi_y = std::max(hi_y, v.y);
        }
        const double scale = std::max(hi_x - lo_x, hi_y - lo_y);
        const double tol = 1e-12 * scale * scale;

        const std::size_t m = vertices.size();
        double turning = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const Vec2 e0 = vertices[(i + 1) % m] - vertices[i];
            const Vec2 e1 = vertices[(i + 2) % m] - vertices[(i + 1) % m];
            const double c = cross(e0, e1);
            if (std::abs(c) <= tol)
                throw CollinearVertex("vertex " + std::to_string((i + 1) % m) +
                                      " is collinear with its neighbours");
            if (c < 0.0)
                throw NotConvex("reflex corner at vertex " + std::to_string((i + 1) % m));
            turning += std::atan2(c, dot(e0, e1));
        }
        // A simple convex loop turns by exactly 2*pi; anything else (e.g. a
        // doubly wound star with all-left turns) is rejected.
        if (std::abs(turning - 2.0 * kPi) > 1e-9)
            throw NotConvex("vertex loop winds " + format_double(turning / (2.0 * kPi)) +
                            " times, expected 1");

        return ConvexPolygon(std::move(vertices), scale);
    }

    int side_count() const { return static_cast<int>(verts_.size()); }
    const std::vector<Vec2>& vertices() const { return verts_; }
    Vec2 vertex(int n) const { return verts_[static_cast<std::size_t>(n)]; }
    Vec2 vertex_wrapped(int n) const {
        const int m = side_count();
        return verts_[static_cast<std::size_t>(((n % m) + m) % m)];
    }

    double side_length(int n) const { return lengths_[static_cast<std::size_t>(n)]; }
    const std::vector<double>& side_lengths() const { return lengths_; }
    double min_side_length() const { return min_len_; }
    double max_side_length() const { return max_len_; }
    double perimeter() const { return perimeter_; }
    // Longest bounding-box extent; the reference scale for tolerances.
    double scale() const { return scale_; }

    Vec2 centroid() const {
        Vec2 c{0, 0};
        for (const Vec2 v : verts_) c = c + v;
        return c * (1.0 / side_count());
    }

private:
    ConvexPolygon(std::vector<Vec2> v, double scale) : verts_(std::move(v)), scale_(scale) {
        const std::size_t m = verts_.size();
        lengths_.resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            lengths_[i] = dist(verts_[i], verts_[(i + 1) % m]);
            if (!(lengths_[i] > 1e-12 * scale_))
                throw CollinearVertex("side " + std::to_string(i) + " has zero length");
        }
        min_len_ = *std::min_element(lengths_.begin(), lengths_.end());
        max_len_ = *std::max_element(lengths_.begin(), lengths_.end());
        for (const double l : lengths_) perimeter_ += l;
    }

    std::vector<Vec2> verts_;
    std::vector<double> lengths_;
    double scale_ = 0.0;
    double min_len_ = 0.0;
    double max_len_ = 0.0;
    double perimeter_ = 0.0;
};

inline ConvexPolygon validate_polygon(std::vector<Vec2> vertices) {
    return ConvexPolygon::validate(std::move(vertices));
}

// Local frame of one polygon side: maps strip coordinates (t, s) with
// t along the side and s >= 0 into the exterior.
struct SideFrame {
    int index = 0;  // 0-based side index
    double length = 0.0;
    Vec2 origin;   // first vertex of the side
    Vec2 tangent;  // unit, points to the next vertex
    Vec2 normal;   // unit, points into the exterior

    Vec2 map(double t, double s) const { return origin + t * tangent + s * normal; }
    // Inverse of map (orthonormal frame): returns (t, s).
    std::pair<double, double> local(Vec2 x) const {
        const Vec2 d = x - origin;
        return {dot(d, tangent), dot(d, normal)};
    }
};

// Exterior wedge at one polygon vertex, bounded by the rays orthogonal to
// the two incident sides. ray_start and ray_end are unit directions;
// rotating ray_start CCW by `opening` gives ray_end.
struct Sector {
    int index = 0;  // 0-based vertex index
    Vec2 apex;
    double opening = 0.0;  // in (0, pi); equals pi minus the interior angle
    Vec2 ray_start;        // normal of the previous side
    Vec2 ray_end;          // normal of this vertex's outgoing side

    Vec2 direction(double phi) const { return rotate(ray_start, phi); }
    Vec2 bisector() const { return rotate(ray_start, 0.5 * opening); }
};

// Exterior decomposition into side strips and vertex sectors. The closures
// of the 2M pieces tile the whole exterior.
struct Decomposition {
    ConvexPolygon polygon;
    std::vector<SideFrame> frames;
    std::vector<Sector> sectors;
};

inline Decomposition decompose(const ConvexPolygon& p) {
    const int m = p.side_count();
    std::vector<SideFrame> frames;
    frames.reserve(static_cast<std::size_t>(m));
    for (int n = 0; n < m; ++n) {
        SideFrame f;
        f.index = n;
        f.length = p.side_length(n);
        f.origin = p.vertex(n);
        f.tangent = (p.vertex_wrapped(n + 1) - p.vertex(n)) * (1.0 / f.length);
        f.normal = perp_right(f.tangent);  // CCW polygon: exterior is on the right
        frames.push_back(f);
        const double err = dist(f.map(f.length, 0.0), p.vertex_wrapped(n + 1));
        if (err > 1e-12 * std::max(1.0, p.scale()))
            throw Error("side frame " + std::to_string(n) + " fails to reach the next vertex");
    }

    std::vector<Sector> sectors;
    sectors.reserve(static_cast<std::size_t>(m));
    double total = 0.0;
    for (int n = 0; n < m; ++n) {
        Sector s;
        s.index = n;
        s.apex = p.vertex(n);
        s.ray_start = frames[static_cast<std::size_t>((n + m - 1) % m)].normal;
        s.ray_end = frames[static_cast<std::size_t>(n)].normal;
        s.opening = std::atan2(cross(s.ray_start, s.ray_end), dot(s.ray_start, s.ray_end));
        if (!(s.opening > 0.0 && s.opening < kPi))
            throw NotConvex("sector opening at vertex " + std::to_string(n) + " outside (0, pi)");
        total += s.opening;
        sectors.push_back(s);
    }
    if (std::abs(total - 2.0 * kPi) > 1e-10)
        throw Error("sector openings sum to " + format_double(total) + ", expected 2*pi");

    return Decomposition{p, std::move(frames), std::move(sectors)};
}

struct Region {
    enum class Kind { Interior, Strip, Sector, Boundary };
    Kind kind = Kind::Interior;
    int index = -1;  // side index for Strip, vertex index for Sector
    // Strip: (a, b) = strip coordinates (t, s).
    // Sector: (a, b) = polar coordinates (r, phi) from the start ray.
    double a = 0.0;
    double b = 0.0;
};

// Classifies a point against the exterior decomposition. Points within
// `band` (absolute) of the polygon boundary report Boundary; interior points
// report Interior. Every other point lands in exactly one strip or sector.
inline Region locate(const Decomposition& dec, Vec2 x, double band = 1e-12) {
    const int m = dec.polygon.side_count();

    bool inside = true;
    bool near_boundary = false;
    for (int n = 0; n < m; ++n) {
        const SideFrame& f = dec.frames[static_cast<std::size_t>(n)];
        const auto [t, s] = f.local(x);
        if (s > -band) inside = false;
        if (std::abs(s) <= band && t >= -band && t <= f.length + band) near_boundary = true;
    }
    for (int n = 0; n < m; ++n)
        if (dist(x, dec.polygon.vertex(n)) <= band) near_boundary = true;
    if (near_boundary) return Region{Region::Kind::Boundary, -1, 0.0, 0.0};
    if (inside) return Region{Region::Kind::Interior, -1, 0.0, 0.0};

    for (int n = 0; n < m; ++n) {
        const SideFrame& f = dec.frames[static_cast<std::size_t>(n)];
        const auto [t, s] = f.local(x);
        if (s > 0.0 && t > 0.0 && t < f.length)
            return Region{Region::Kind::Strip, n, t, s};
    }

    const double cone_tol = 1e-12 * std::max(1.0, dec.polygon.scale());
    for (int n = 0; n < m; ++n) {
        const Sector& sec = dec.sectors[static_cast<std::size_t>(n)];
        const Vec2 d = x - sec.apex;
        if (cross(sec.ray_start, d) >= -cone_tol * norm(d) &&
            cross(d, sec.ray_end) >= -cone_tol * norm(d)) {
            const double r = norm(d);
            const double phi = std::atan2(cross(sec.ray_start, d), dot(sec.ray_start, d));
            return Region{Region::Kind::Sector, n, r, phi};
        }
    }
    throw Error("locate failed to classify point (" + format_double(x.x) + ", " +
                format_double(x.y) + ")");
}

}  // namespace robin
