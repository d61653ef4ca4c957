#include "ellipfuse/geometry_oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ellipfuse/point_kernels.hpp"

namespace ellipfuse {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec2 boundary_point_at(const Vec2& center, const SpdMatrix2& sqrt_shape, double phi) {
    return center + sqrt_shape.apply({std::cos(phi), std::sin(phi)});
}

struct JointBox {
    double x_lo, x_hi, y_lo, y_hi;
};

JointBox joint_bounding_box(const Ellipsoid& ei, const Ellipsoid& ej) {
    const Vec2 hi = ei.bounding_half_widths();
    const Vec2 hj = ej.bounding_half_widths();
    return {std::min(ei.center.x - hi.x, ej.center.x - hj.x),
            std::max(ei.center.x + hi.x, ej.center.x + hj.x),
            std::min(ei.center.y - hi.y, ej.center.y - hj.y),
            std::max(ei.center.y + hi.y, ej.center.y + hj.y)};
}

// Row-major lattice over the box, written as structure-of-arrays for the
// batch kernels.
void fill_grid(const JointBox& box, int resolution, std::vector<double>& xs,
               std::vector<double>& ys) {
    const std::size_t n = static_cast<std::size_t>(resolution) * resolution;
    xs.resize(n);
    ys.resize(n);
    const double sx = (box.x_hi - box.x_lo) / (resolution - 1);
    const double sy = (box.y_hi - box.y_lo) / (resolution - 1);
    std::size_t k = 0;
    for (int r = 0; r < resolution; ++r) {
        const double y = box.y_lo + sy * r;
        for (int c = 0; c < resolution; ++c, ++k) {
            xs[k] = box.x_lo + sx * c;
            ys[k] = y;
        }
    }
}

} // namespace

std::vector<Vec2> boundary_points(const Ellipsoid& e, int count) {
    if (count < 3) {
        throw ParameterError("boundary_points requires count >= 3");
    }
    const SpdMatrix2 root = e.shape.sqrt();
    std::vector<Vec2> pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        pts.push_back(boundary_point_at(e.center, root, kTwoPi * k / count));
    }
    return pts;
}

std::vector<Vec2> boundary_intersection(const Ellipsoid& ei, const Ellipsoid& ej, double tol) {
    constexpr int kSamples = 720;
    constexpr double kAngleTol = 1e-12;

    const SpdMatrix2 root = ei.shape.sqrt();
    const auto g = [&](double phi) {
        return mahalanobis_sq(boundary_point_at(ei.center, root, phi), ej.center, ej.shape) - 1.0;
    };

    std::vector<Vec2> pts;
    double phi_prev = 0.0;
    double g_prev = g(phi_prev);
    for (int k = 1; k <= kSamples; ++k) {
        const double phi = kTwoPi * k / kSamples;
        const double g_cur = g(phi);
        const bool crossing = (g_prev <= 0.0 && g_cur > 0.0) || (g_prev > 0.0 && g_cur <= 0.0) ||
                              (g_prev == 0.0);
        if (crossing) {
            double lo = phi_prev, hi = phi, g_lo = g_prev;
            while (hi - lo > kAngleTol) {
                const double mid = 0.5 * (lo + hi);
                const double g_mid = g(mid);
                if ((g_lo <= 0.0) == (g_mid <= 0.0)) {
                    lo = mid;
                    g_lo = g_mid;
                } else {
                    hi = mid;
                }
            }
            const double phi_root = 0.5 * (lo + hi);
            const Vec2 p = boundary_point_at(ei.center, root, phi_root);
            if (std::abs(mahalanobis_sq(p, ej.center, ej.shape) - 1.0) <= tol &&
                std::abs(mahalanobis_sq(p, ei.center, ei.shape) - 1.0) <= tol) {
                pts.push_back(p);
            }
        }
        phi_prev = phi;
        g_prev = g_cur;
    }

    // Drop near-duplicate roots (a crossing found at both ends of a sample).
    const double scale = std::max({1.0, ei.bounding_half_widths().x, ei.bounding_half_widths().y});
    std::vector<Vec2> unique_pts;
    for (const Vec2& p : pts) {
        const bool dup = std::any_of(unique_pts.begin(), unique_pts.end(), [&](const Vec2& q) {
            return (p - q).norm() <= 1e-9 * scale;
        });
        if (!dup) unique_pts.push_back(p);
    }
    return unique_pts;
}

GridSamples grid_oracle(const Ellipsoid& ei, const Ellipsoid& ej, int resolution) {
    if (resolution < 11) {
        throw ParameterError("grid_oracle requires resolution >= 11");
    }
    std::vector<double> xs, ys;
    fill_grid(joint_bounding_box(ei, ej), resolution, xs, ys);
    const std::size_t n = xs.size();

    std::vector<double> qi(n), qj(n);
    kernels::eval(kernels::quadform(ei), xs.data(), ys.data(), n, qi.data());
    kernels::eval(kernels::quadform(ej), xs.data(), ys.data(), n, qj.data());

    GridSamples out;
    for (std::size_t k = 0; k < n; ++k) {
        const bool in_i = qi[k] <= 1.0;
        const bool in_j = qj[k] <= 1.0;
        if (in_i && in_j) out.intersection.push_back({xs[k], ys[k]});
        if (in_i || in_j) out.union_points.push_back({xs[k], ys[k]});
    }
    return out;
}

std::vector<Vec2> grid_points_inside(const Ellipsoid& e, int resolution) {
    if (resolution < 11) {
        throw ParameterError("grid_points_inside requires resolution >= 11");
    }
    std::vector<double> xs, ys;
    fill_grid(joint_bounding_box(e, e), resolution, xs, ys);
    const std::size_t n = xs.size();

    std::vector<double> q(n);
    kernels::eval(kernels::quadform(e), xs.data(), ys.data(), n, q.data());

    std::vector<Vec2> inside;
    for (std::size_t k = 0; k < n; ++k) {
        if (q[k] <= 1.0) inside.push_back({xs[k], ys[k]});
    }
    return inside;
}

bool loewner_leq(const SpdMatrix2& a, const SpdMatrix2& b, double tol) {
    // min eigenvalue of the (symmetric, possibly indefinite) difference b - a.
    const double dxx = b.xx() - a.xx();
    const double dxy = b.xy() - a.xy();
    const double dyy = b.yy() - a.yy();
    const double mean = 0.5 * (dxx + dyy);
    const double r = std::hypot(0.5 * (dxx - dyy), dxy);
    return mean - r >= -tol;
}

} // namespace ellipfuse
