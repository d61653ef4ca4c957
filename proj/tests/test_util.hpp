#pragma once

// Shared test helpers. The oracle here deliberately avoids the library's
// closed-form 2x2 arithmetic: inverses go through Gauss-Jordan elimination
// with partial pivoting and the fusion rules are straight-line transcriptions
// on top of it, so agreement with the library is a genuine cross-check.

#include <array>
#include <cmath>
#include <numbers>

#include "ellipfuse/ellipsoid.hpp"
#include "ellipfuse/rng.hpp"

namespace testutil {

using ellipfuse::Ellipsoid;
using ellipfuse::Rng;
using ellipfuse::SpdMatrix2;
using ellipfuse::Vec2;

using Mat = std::array<std::array<double, 2>, 2>;

inline Mat mat_of(const SpdMatrix2& m) {
    return {{{m.xx(), m.xy()}, {m.xy(), m.yy()}}};
}

inline Mat add(const Mat& a, const Mat& b) {
    Mat r{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r[i][j] = a[i][j] + b[i][j];
    return r;
}

inline Mat sub(const Mat& a, const Mat& b) {
    Mat r{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r[i][j] = a[i][j] - b[i][j];
    return r;
}

inline Mat scale(const Mat& a, double s) {
    Mat r{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r[i][j] = a[i][j] * s;
    return r;
}

inline Mat matmul(const Mat& a, const Mat& b) {
    Mat r{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) r[i][j] += a[i][k] * b[k][j];
    return r;
}

inline Vec2 matvec(const Mat& a, const Vec2& v) {
    return {a[0][0] * v.x + a[0][1] * v.y, a[1][0] * v.x + a[1][1] * v.y};
}

/// Generic Gauss-Jordan inverse with partial pivoting.
inline Mat gj_inverse(Mat a) {
    Mat inv = {{{1.0, 0.0}, {0.0, 1.0}}};
    for (int col = 0; col < 2; ++col) {
        int pivot = col;
        if (std::abs(a[1 - col][col]) > std::abs(a[col][col]) && col == 0) pivot = 1;
        if (pivot != col) {
            std::swap(a[0], a[1]);
            std::swap(inv[0], inv[1]);
        }
        const double p = a[col][col];
        for (int j = 0; j < 2; ++j) {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for (int row = 0; row < 2; ++row) {
            if (row == col) continue;
            const double f = a[row][col];
            for (int j = 0; j < 2; ++j) {
                a[row][j] -= f * a[col][j];
                inv[row][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

inline double quadform(const Mat& w, const Vec2& d) {
    const Vec2 wd = matvec(w, d);
    return d.x * wd.x + d.y * wd.y;
}

struct OracleFusion {
    Vec2 center;
    Mat shape;
    double k = 1.0;
};

inline OracleFusion oracle_kalman(const Ellipsoid& ei, const Ellipsoid& ej) {
    const Mat ii = gj_inverse(mat_of(ei.shape));
    const Mat ij = gj_inverse(mat_of(ej.shape));
    const Mat shape = gj_inverse(add(ii, ij));
    const Vec2 c = matvec(shape, matvec(ii, ei.center) + matvec(ij, ej.center));
    return {c, shape, 1.0};
}

inline OracleFusion oracle_ci(const Ellipsoid& ei, const Ellipsoid& ej, double a) {
    const Mat ii = gj_inverse(mat_of(ei.shape));
    const Mat ij = gj_inverse(mat_of(ej.shape));
    const Mat shape = gj_inverse(add(scale(ii, a), scale(ij, 1.0 - a)));
    const Vec2 c =
        matvec(shape, matvec(ii, ei.center) * a + matvec(ij, ej.center) * (1.0 - a));
    return {c, shape, 1.0};
}

inline OracleFusion oracle_cce(const Ellipsoid& ei, const Ellipsoid& ej, double a) {
    const Mat ii = gj_inverse(mat_of(ei.shape));
    const Mat ij = gj_inverse(mat_of(ej.shape));
    const Mat x = gj_inverse(add(scale(ii, a), scale(ij, 1.0 - a)));
    const Mat spread = add(scale(mat_of(ei.shape), 1.0 / a), scale(mat_of(ej.shape), 1.0 / (1.0 - a)));
    const double d_sq = quadform(gj_inverse(spread), ej.center - ei.center);
    const double k = 1.0 - d_sq;
    const Vec2 c = matvec(x, matvec(ii, ei.center) * a + matvec(ij, ej.center) * (1.0 - a));
    return {c, scale(x, k), k};
}

inline OracleFusion oracle_ici(const Ellipsoid& ei, const Ellipsoid& ej, double w) {
    const Mat pi = mat_of(ei.shape);
    const Mat pj = mat_of(ej.shape);
    const Mat ii = gj_inverse(pi);
    const Mat ij = gj_inverse(pj);
    const Mat gamma_inv = gj_inverse(add(scale(pi, w), scale(pj, 1.0 - w)));
    const Mat shape = gj_inverse(sub(add(ii, ij), gamma_inv));
    const Mat ki = matmul(shape, sub(ii, scale(gamma_inv, w)));
    const Mat kj = matmul(shape, sub(ij, scale(gamma_inv, 1.0 - w)));
    const Vec2 c = matvec(ki, ei.center) + matvec(kj, ej.center);
    return {c, shape, 1.0};
}

inline double oracle_mahalanobis_sq(const Vec2& p, const Vec2& c, const SpdMatrix2& w) {
    return quadform(gj_inverse(mat_of(w)), p - c);
}

/// Random SPD matrix with eigenvalues in [lo, hi] (log-uniform) and a random
/// rotation.
inline SpdMatrix2 random_spd(Rng& rng, double lo = 0.3, double hi = 3.0) {
    const double l1 = std::exp(rng.uniform(std::log(lo), std::log(hi)));
    const double l2 = std::exp(rng.uniform(std::log(lo), std::log(hi)));
    const double t = rng.uniform(0.0, std::numbers::pi);
    const double c = std::cos(t), s = std::sin(t);
    return SpdMatrix2(l1 * c * c + l2 * s * s, (l1 - l2) * s * c, l1 * s * s + l2 * c * c);
}

inline Ellipsoid random_ellipsoid(Rng& rng, double center_span = 2.0) {
    return Ellipsoid({rng.uniform(-center_span, center_span),
                      rng.uniform(-center_span, center_span)},
                     random_spd(rng));
}

/// Relative agreement check for values that can span many magnitudes.
inline bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

} // namespace testutil
