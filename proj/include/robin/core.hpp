#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

namespace robin {

inline constexpr double kPi = std::numbers::pi;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double c) const { return {c * x, c * y}; }
    Vec2 operator-() const { return {-x, -y}; }
};

inline Vec2 operator*(double c, Vec2 v) { return v * c; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

// Rotate v by angle phi counterclockwise.
inline Vec2 rotate(Vec2 v, double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// Left-hand perpendicular (CCW quarter turn).
inline Vec2 perp_left(Vec2 v) { return {-v.y, v.x}; }
// Right-hand perpendicular (CW quarter turn).
inline Vec2 perp_right(Vec2 v) { return {v.y, -v.x}; }

// Shortest decimal form that round-trips to the same double. Used by every
// text artifact (CSV, mesh files, reports) so reruns are byte-identical.
inline std::string format_double(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

// FNV-1a over a byte string; stable content hash for run manifests.
inline std::uint64_t fnv1a64(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 1469598103934665603ull;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t h) {
    static const char* d = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = d[h & 0xf];
        h >>= 4;
    }
    return s;
}

// (1 - e^-z)/z and (1 - (1+z)e^-z)/z^2, stable near z = 0. These are the
// moments of e^-z*xi against {1, xi} on [0,1]; every quadrature against the
// half-line ground state reduces to them.
inline double expm_f0(double z) {
    if (std::abs(z) < 1e-5) return 1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0;
    return -std::expm1(-z) / z;
}

inline double expm_f1(double z) {
    if (std::abs(z) < 1e-3)
        return 0.5 - z / 3.0 + z * z / 8.0 - z * z * z / 30.0 + z * z * z * z / 144.0;
    return (1.0 - (1.0 + z) * std::exp(-z)) / (z * z);
}

// Exact integral of e^(-alpha*s) * v(s) over [a,b] where v is linear with
// endpoint values va, vb.
inline double exp_linear_integral(double a, double b, double va, double vb, double alpha) {
    const double h = b - a;
    const double z = alpha * h;
    return h * std::exp(-alpha * a) * (va * expm_f0(z) + (vb - va) * expm_f1(z));
}

}  // namespace robin
