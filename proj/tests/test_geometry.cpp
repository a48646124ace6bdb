#include <doctest.h>

#include <cmath>
#include <random>

#include "error.hpp"
#include "geometry.hpp"
#include "oracles.hpp"

using airs::Errc;
using airs::Error;
using airs::geom::Ellipse2D;
using airs::geom::Polygon2D;
using airs::geom::Vec2;

namespace {

// Lattice-valued points (multiples of 1/1024) keep every orientation test
// exact in double arithmetic, so the hull comparison is never borderline.
std::vector<Vec2> lattice_points(std::mt19937& rng, size_t count) {
    std::vector<Vec2> pts;
    for (size_t i = 0; i < count; ++i)
        pts.push_back({static_cast<double>(rng() % 4096) / 1024.0,
                       static_cast<double>(rng() % 4096) / 1024.0});
    return pts;
}

bool code_is(const Error& e, Errc c) { return e.code() == c; }

}  // namespace

TEST_CASE("convex hull drops interior points") {
    const std::vector<Vec2> pts = {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}, {0, 0}};
    const Polygon2D hull = airs::geom::convex_hull(pts);
    CHECK(hull.vertices.size() == 4);
    CHECK(oracle::same_point_set(hull.vertices, {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}));
}

TEST_CASE("convex hull of a triangle is the triangle, CCW") {
    const std::vector<Vec2> pts = {{0, 0}, {2, 0}, {1, 1.5}};
    const Polygon2D hull = airs::geom::convex_hull(pts);
    REQUIRE(hull.vertices.size() == 3);
    CHECK(hull.area() > 0.0);  // CCW
    CHECK(oracle::same_point_set(hull.vertices, pts));
}

TEST_CASE("convex hull rejects degenerate inputs") {
    CHECK_THROWS_WITH_AS(airs::geom::convex_hull(std::vector<Vec2>{{0, 0}, {1, 1}}),
                         doctest::Contains("distinct"), Error);
    const std::vector<Vec2> collinear = {{0, 0}, {1, 1}, {2, 2}, {3, 3}};
    try {
        airs::geom::convex_hull(collinear);
        FAIL("expected degenerate_footprint");
    } catch (const Error& e) {
        CHECK(code_is(e, Errc::degenerate_footprint));
    }
    CHECK(airs::geom::is_degenerate(collinear));
    CHECK_FALSE(airs::geom::is_degenerate(std::vector<Vec2>{{0, 0}, {1, 0}, {0, 1}}));
}

TEST_CASE("convex hull matches the brute-force oracle on random sets") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const std::vector<Vec2> pts = lattice_points(rng, 3 + rng() % 48);
        Polygon2D hull;
        try {
            hull = airs::geom::convex_hull(pts);
        } catch (const Error& e) {
            REQUIRE(code_is(e, Errc::degenerate_footprint));
            continue;
        }
        CHECK(oracle::same_point_set(hull.vertices, oracle::hull_vertices(pts)));
        for (const Vec2& p : pts) CHECK(hull.contains(p, 1e-9));
        CHECK(hull.area() > 0.0);
    }
}

TEST_CASE("hull vertices are strictly convex") {
    std::mt19937 rng(11);
    const std::vector<Vec2> pts = lattice_points(rng, 60);
    const Polygon2D hull = airs::geom::convex_hull(pts);
    const size_t n = hull.vertices.size();
    for (size_t i = 0; i < n; ++i)
        CHECK(airs::geom::cross(hull.vertices[i], hull.vertices[(i + 1) % n],
                                hull.vertices[(i + 2) % n]) > 0.0);
}

TEST_CASE("enclosing ellipse of points on a circle recovers the circle") {
    std::vector<Vec2> pts;
    for (int k = 0; k < 12; ++k) {
        const double a = 2.0 * M_PI * k / 12.0;
        pts.push_back({2.0 + std::cos(a), 3.0 + std::sin(a)});
    }
    const Ellipse2D e = airs::geom::min_enclosing_ellipse(pts, 1e-6);
    CHECK(e.center.x == doctest::Approx(2.0).epsilon(1e-4));
    CHECK(e.center.y == doctest::Approx(3.0).epsilon(1e-4));
    CHECK(e.semi_major() == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(e.semi_minor() == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("enclosing ellipse of the unit square is the sqrt(2) circle") {
    const std::vector<Vec2> pts = {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}};
    const Ellipse2D e = airs::geom::min_enclosing_ellipse(pts, 1e-6);
    CHECK(std::abs(e.center.x) < 1e-4);
    CHECK(std::abs(e.center.y) < 1e-4);
    CHECK(e.semi_major() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-4));
    CHECK(e.semi_minor() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-4));
    for (const Vec2& p : pts) CHECK(e.quad_form(p) <= 1.0 + 1e-6);

    // dense grid search over circle-ish ellipses cannot beat the result
    double best_area = 1e9;
    for (double cx = -0.3; cx <= 0.31; cx += 0.1) {
        for (double cy = -0.3; cy <= 0.31; cy += 0.1) {
            for (double a = 1.30; a <= 2.2; a += 0.01) {
                for (double b = 1.30; b <= a + 1e-12; b += 0.01) {
                    const Ellipse2D cand{{cx, cy}, 1.0 / (a * a), 0.0, 1.0 / (b * b)};
                    bool ok = true;
                    for (const Vec2& p : pts) ok = ok && cand.contains(p);
                    if (ok) best_area = std::min(best_area, cand.area());
                }
            }
        }
    }
    CHECK(e.area() <= best_area * (1.0 + 1e-6));
}

TEST_CASE("enclosing ellipse beats 10000 random enclosing ellipses") {
    std::mt19937 rng(23);
    std::vector<Vec2> pts = lattice_points(rng, 40);
    const Ellipse2D e = airs::geom::min_enclosing_ellipse(pts, 1e-6);
    for (const Vec2& p : pts) CHECK(e.quad_form(p) <= 1.0 + 1e-6);

    Vec2 centroid{0, 0};
    for (const Vec2& p : pts) centroid = centroid + p * (1.0 / pts.size());
    auto uniform = [&](double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(rng()) / 4294967296.0);
    };
    int enclosing = 0;
    for (int probe = 0; probe < 10000; ++probe) {
        // random SPD shape, scaled just enough to contain all points
        const double l1 = uniform(0.05, 2.0), l2 = uniform(0.05, 2.0);
        const double t = uniform(0.0, M_PI);
        const double c = std::cos(t), s = std::sin(t);
        Ellipse2D cand{{centroid.x + uniform(-0.5, 0.5), centroid.y + uniform(-0.5, 0.5)},
                       l1 * c * c + l2 * s * s, (l1 - l2) * c * s, l1 * s * s + l2 * c * c};
        double worst = 0.0;
        for (const Vec2& p : pts) worst = std::max(worst, cand.quad_form(p));
        cand.a11 /= worst;
        cand.a12 /= worst;
        cand.a22 /= worst;
        ++enclosing;
        CHECK(e.area() <= cand.area() * (1.0 + 1e-6));
    }
    CHECK(enclosing == 10000);
}

TEST_CASE("degenerate point sets are inflated to a 1 cm disc") {
    const std::vector<Vec2> single(5, Vec2{1.5, -2.0});
    const Ellipse2D e = airs::geom::min_enclosing_ellipse(single, 1e-6);
    CHECK(e.center.x == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(e.center.y == doctest::Approx(-2.0).epsilon(1e-6));
    CHECK(e.semi_major() == doctest::Approx(0.01).epsilon(1e-3));
    CHECK(e.semi_minor() == doctest::Approx(0.01).epsilon(1e-3));
}

TEST_CASE("enclosing ellipse reports no convergence at a tiny iteration cap") {
    std::mt19937 rng(5);
    const std::vector<Vec2> pts = lattice_points(rng, 50);
    try {
        airs::geom::min_enclosing_ellipse(pts, 1e-9, 1);
        FAIL("expected no_convergence");
    } catch (const Error& e) {
        CHECK(code_is(e, Errc::no_convergence));
    }
}

TEST_CASE("hull and ellipse are equivariant under rigid motion") {
    std::mt19937 rng(31);
    const std::vector<Vec2> pts = lattice_points(rng, 30);
    const double angle = 0.7;
    const Vec2 shift{3.25, -1.5};
    std::vector<Vec2> moved;
    for (const Vec2& p : pts) moved.push_back(p.rotated(angle) + shift);

    const Polygon2D hull = airs::geom::convex_hull(pts);
    const Polygon2D hull_moved = airs::geom::convex_hull(moved);
    std::vector<Vec2> expected;
    for (const Vec2& v : hull.vertices) expected.push_back(v.rotated(angle) + shift);
    CHECK(oracle::same_point_set(hull_moved.vertices, expected, 1e-6));

    const Ellipse2D e = airs::geom::min_enclosing_ellipse(pts, 1e-7);
    const Ellipse2D em = airs::geom::min_enclosing_ellipse(moved, 1e-7);
    const Vec2 expected_center = e.center.rotated(angle) + shift;
    CHECK(em.center.x == doctest::Approx(expected_center.x).epsilon(1e-5));
    CHECK(em.center.y == doctest::Approx(expected_center.y).epsilon(1e-5));
    CHECK(em.area() == doctest::Approx(e.area()).epsilon(1e-5));
}

TEST_CASE("ellipse dilation grows both semi-axes by the margin") {
    const Ellipse2D e{{1.0, 2.0}, 1.0 / 4.0, 0.1, 1.0};
    const Ellipse2D d = e.dilated(0.2);
    CHECK(d.semi_major() == doctest::Approx(e.semi_major() + 0.2).epsilon(1e-12));
    CHECK(d.semi_minor() == doctest::Approx(e.semi_minor() + 0.2).epsilon(1e-12));
    CHECK(std::abs(d.orientation() - e.orientation()) < 1e-9);
    CHECK(d.center == e.center);
}

TEST_CASE("ellipse rotation preserves the quadratic form") {
    const Ellipse2D e{{0.5, -0.25}, 0.8, 0.15, 0.4};
    const double angle = 1.1;
    const Ellipse2D r = e.rotated_about_center(angle);
    std::mt19937 rng(3);
    for (int i = 0; i < 50; ++i) {
        const Vec2 p{static_cast<double>(rng() % 2048) / 512.0 - 2.0,
                     static_cast<double>(rng() % 2048) / 512.0 - 2.0};
        const Vec2 q = e.center + (p - e.center).rotated(angle);
        CHECK(r.quad_form(q) == doctest::Approx(e.quad_form(p)).epsilon(1e-9));
    }
}
