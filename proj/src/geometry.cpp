#include "geometry.hpp"

#include <algorithm>
#include <array>
#include <limits>

#include "error.hpp"

namespace airs::geom {

double Polygon2D::area() const {
    double twice = 0.0;
    const size_t n = vertices.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2& p = vertices[i];
        const Vec2& q = vertices[(i + 1) % n];
        twice += p.x * q.y - q.x * p.y;
    }
    return 0.5 * twice;
}

bool Polygon2D::contains(Vec2 p, double tol) const {
    const size_t n = vertices.size();
    for (size_t i = 0; i < n; ++i) {
        if (cross(vertices[i], vertices[(i + 1) % n], p) < -tol) return false;
    }
    return true;
}

namespace {

std::vector<Vec2> distinct_sorted(std::span<const Vec2> points) {
    std::vector<Vec2> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

}  // namespace

Polygon2D convex_hull(std::span<const Vec2> points, double collinear_tol) {
    std::vector<Vec2> pts = distinct_sorted(points);
    const size_t n = pts.size();
    if (n < 3) raise(Errc::degenerate_footprint, "convex hull needs at least 3 distinct points");

    // Strict turns only: collinear boundary points are dropped.
    std::vector<Vec2> hull(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {  // lower hull
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= collinear_tol) --k;
        hull[k++] = pts[i];
    }
    const size_t lower = k + 1;
    for (size_t i = n - 1; i-- > 0;) {  // upper hull
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= collinear_tol) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);  // last point repeats the first

    if (hull.size() < 3) raise(Errc::degenerate_footprint, "all points are collinear");
    return Polygon2D{std::move(hull)};
}

bool is_degenerate(std::span<const Vec2> points, double collinear_tol) {
    try {
        convex_hull(points, collinear_tol);
        return false;
    } catch (const Error& e) {
        if (e.code() == Errc::degenerate_footprint) return true;
        throw;
    }
}

std::vector<Vec2> inflate_degenerate(std::span<const Vec2> points, double disc_radius) {
    std::vector<Vec2> out;
    out.reserve(points.size() * 4);
    for (Vec2 p : points) {
        out.push_back({p.x + disc_radius, p.y});
        out.push_back({p.x - disc_radius, p.y});
        out.push_back({p.x, p.y + disc_radius});
        out.push_back({p.x, p.y - disc_radius});
    }
    return out;
}

namespace {

struct Sym2 {
    double m11, m12, m22;
};

// Eigen-decomposition of a symmetric 2x2: returns {lambda_small, lambda_big,
// angle of the eigenvector of lambda_small}.
struct Eig2 {
    double lo, hi, lo_angle;
};

Eig2 eigen_sym2(const Sym2& m) {
    const double tr = m.m11 + m.m22;
    const double det = m.m11 * m.m22 - m.m12 * m.m12;
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    const double lo = tr / 2.0 - disc;
    const double hi = tr / 2.0 + disc;
    double angle;
    if (std::abs(m.m12) > 1e-300) {
        angle = std::atan2(lo - m.m11, m.m12);
    } else {
        angle = (m.m11 <= m.m22) ? 0.0 : M_PI / 2.0;
    }
    return {lo, hi, angle};
}

Sym2 compose_from_axes(double lo, double hi, double lo_angle) {
    const double c = std::cos(lo_angle), s = std::sin(lo_angle);
    return {lo * c * c + hi * s * s, (lo - hi) * c * s, lo * s * s + hi * c * c};
}

}  // namespace

double Ellipse2D::semi_major() const {
    return 1.0 / std::sqrt(eigen_sym2({a11, a12, a22}).lo);
}

double Ellipse2D::semi_minor() const {
    return 1.0 / std::sqrt(eigen_sym2({a11, a12, a22}).hi);
}

double Ellipse2D::orientation() const {
    // Major axis lies along the eigenvector of the smaller eigenvalue.
    return normalize_angle(eigen_sym2({a11, a12, a22}).lo_angle);
}

double Ellipse2D::area() const {
    return M_PI * semi_major() * semi_minor();
}

Ellipse2D Ellipse2D::dilated(double margin) const {
    const Eig2 e = eigen_sym2({a11, a12, a22});
    const double a = 1.0 / std::sqrt(e.lo) + margin;
    const double b = 1.0 / std::sqrt(e.hi) + margin;
    const Sym2 m = compose_from_axes(1.0 / (a * a), 1.0 / (b * b), e.lo_angle);
    return {center, m.m11, m.m12, m.m22};
}

Ellipse2D Ellipse2D::rotated_about_center(double angle) const {
    // A' = R A R^T with R the rotation by `angle`.
    const double c = std::cos(angle), s = std::sin(angle);
    const double b11 = c * a11 - s * a12, b12 = c * a12 - s * a22;
    const double b21 = s * a11 + c * a12, b22 = s * a12 + c * a22;
    return {center, b11 * c - b12 * s, b11 * s + b12 * c, b21 * s + b22 * c};
}

namespace {

struct Sym3 {
    // row-major upper triangle of a symmetric 3x3
    double m[6];  // m11 m12 m13 m22 m23 m33
};

std::array<double, 9> invert_sym3(const Sym3& s) {
    const double a = s.m[0], b = s.m[1], c = s.m[2], d = s.m[3], e = s.m[4], f = s.m[5];
    const double A = d * f - e * e;
    const double B = c * e - b * f;
    const double C = b * e - c * d;
    const double det = a * A + b * B + c * C;
    if (std::abs(det) < 1e-300)
        raise(Errc::degenerate_footprint, "singular moment matrix in ellipse fit");
    const double inv = 1.0 / det;
    const double D = a * f - c * c;
    const double E = b * c - a * e;
    const double F = a * d - b * b;
    return {A * inv, B * inv, C * inv, B * inv, D * inv, E * inv, C * inv, E * inv, F * inv};
}

}  // namespace

Ellipse2D min_enclosing_ellipse(std::span<const Vec2> points, double tol, int max_iters) {
    std::vector<Vec2> pts(points.begin(), points.end());
    if (pts.empty()) raise(Errc::degenerate_footprint, "no points for enclosing ellipse");
    if (is_degenerate(pts)) pts = inflate_degenerate(pts);

    const size_t n = pts.size();
    constexpr double d = 2.0;
    std::vector<double> u(n, 1.0 / static_cast<double>(n));

    // Stop when the worst lifted residual guarantees quad_form <= 1 + tol
    // after the 1/d scaling below.
    const double kappa_stop = (d + 1.0) + 0.9 * d * tol;

    bool converged = false;
    for (int iter = 0; iter < max_iters; ++iter) {
        Sym3 X{};
        for (size_t i = 0; i < n; ++i) {
            const double w = u[i];
            const Vec2 p = pts[i];
            X.m[0] += w * p.x * p.x;
            X.m[1] += w * p.x * p.y;
            X.m[2] += w * p.x;
            X.m[3] += w * p.y * p.y;
            X.m[4] += w * p.y;
            X.m[5] += w;
        }
        const auto inv = invert_sym3(X);

        double k_plus = -1.0, k_minus = std::numeric_limits<double>::max();
        size_t j_plus = 0, j_minus = 0;
        for (size_t i = 0; i < n; ++i) {
            const Vec2 p = pts[i];
            const double m = inv[0] * p.x * p.x + inv[4] * p.y * p.y + inv[8] +
                             2.0 * (inv[1] * p.x * p.y + inv[2] * p.x + inv[5] * p.y);
            if (m > k_plus) {
                k_plus = m;
                j_plus = i;
            }
            if (u[i] > 0.0 && m < k_minus) {
                k_minus = m;
                j_minus = i;
            }
        }

        if (k_plus <= kappa_stop) {
            converged = true;
            break;
        }

        if (k_plus - (d + 1.0) >= (d + 1.0) - k_minus) {
            const double lambda = (k_plus - d - 1.0) / ((d + 1.0) * (k_plus - 1.0));
            for (double& w : u) w *= (1.0 - lambda);
            u[j_plus] += lambda;
        } else {
            // Away step: shift weight off the least active support point.
            double lambda = ((d + 1.0) - k_minus) / ((d + 1.0) * (k_minus - 1.0));
            lambda = std::min(lambda, u[j_minus] / (1.0 - u[j_minus]));
            for (double& w : u) w *= (1.0 + lambda);
            u[j_minus] -= lambda;
            if (u[j_minus] < 0.0) u[j_minus] = 0.0;
        }
    }
    if (!converged) raise(Errc::no_convergence, "enclosing-ellipse iteration cap exhausted");

    Vec2 c{0.0, 0.0};
    for (size_t i = 0; i < n; ++i) c = c + pts[i] * u[i];
    double s11 = 0.0, s12 = 0.0, s22 = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double dx = pts[i].x - c.x, dy = pts[i].y - c.y;
        s11 += u[i] * dx * dx;
        s12 += u[i] * dx * dy;
        s22 += u[i] * dy * dy;
    }
    const double det = s11 * s22 - s12 * s12;
    if (det < 1e-300) raise(Errc::degenerate_footprint, "flat scatter matrix in ellipse fit");
    Ellipse2D ell{c, s22 / (d * det), -s12 / (d * det), s11 / (d * det)};

    // Hard containment: grow to the worst point so quad_form <= 1 exactly.
    double worst = 0.0;
    for (Vec2 p : pts) worst = std::max(worst, ell.quad_form(p));
    if (worst > 1.0) {
        const double shrink = 1.0 / worst;
        ell.a11 *= shrink;
        ell.a12 *= shrink;
        ell.a22 *= shrink;
    }
    return ell;
}

}  // namespace airs::geom
