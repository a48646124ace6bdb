#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace airs::geom {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2&) const = default;

    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    Vec2 rotated(double angle) const {
        const double c = std::cos(angle), s = std::sin(angle);
        return {c * x - s * y, s * x + c * y};
    }
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(Vec3 o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(Vec3 o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    bool operator==(const Vec3&) const = default;

    double dot(Vec3 o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    Vec2 xy() const { return {x, y}; }
};

inline double cross(Vec2 o, Vec2 a, Vec2 b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline double normalize_angle(double a) {
    a = std::fmod(a, 2.0 * M_PI);
    if (a <= -M_PI) a += 2.0 * M_PI;
    if (a > M_PI) a -= 2.0 * M_PI;
    return a;
}

// Counter-clockwise simple polygon. convex_hull() additionally guarantees
// strict convexity (no collinear boundary triples).
struct Polygon2D {
    std::vector<Vec2> vertices;

    double area() const;
    // tol in meters: points up to tol outside an edge still count as inside.
    bool contains(Vec2 p, double tol = 1e-9) const;
};

// (x-c)^T A (x-c) <= 1 with A symmetric positive-definite.
struct Ellipse2D {
    Vec2 center;
    double a11 = 1.0, a12 = 0.0, a22 = 1.0;

    double quad_form(Vec2 p) const {
        const double dx = p.x - center.x, dy = p.y - center.y;
        return a11 * dx * dx + 2.0 * a12 * dx * dy + a22 * dy * dy;
    }
    bool contains(Vec2 p, double slack = 0.0) const { return quad_form(p) <= 1.0 + slack; }

    // Derived parameters: semi_major >= semi_minor > 0, orientation of the
    // major axis in radians.
    double semi_major() const;
    double semi_minor() const;
    double orientation() const;
    double area() const;

    // Grows both semi-axes by margin meters, same center and orientation.
    Ellipse2D dilated(double margin) const;
    Ellipse2D rotated_about_center(double angle) const;
};

// Monotone chain. Throws Errc::degenerate_footprint if fewer than 3 distinct
// points remain or all points are collinear (|cross| <= collinear_tol).
Polygon2D convex_hull(std::span<const Vec2> points, double collinear_tol = 1e-9);

// True if convex_hull(points) would throw degenerate_footprint.
bool is_degenerate(std::span<const Vec2> points, double collinear_tol = 1e-9);

// Replaces each point with 4 points on a disc of the given radius around it.
std::vector<Vec2> inflate_degenerate(std::span<const Vec2> points, double disc_radius = 0.01);

// Minimum-area enclosing ellipse, Khachiyan iteration with away steps.
// Degenerate inputs are inflated (inflate_degenerate) before solving.
// Throws Errc::no_convergence when the iteration cap is exhausted.
Ellipse2D min_enclosing_ellipse(std::span<const Vec2> points, double tol = 1e-6,
                                int max_iters = 10000);

}  // namespace airs::geom
