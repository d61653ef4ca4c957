#include "ellipfuse/fusion.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace ellipfuse {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Unvalidated symmetric 2x2 scratch type for the inner loops; converted back
// to SpdMatrix2 (and thereby re-validated) only at the API boundary.
struct Sym2 {
    double xx, xy, yy;
};

Sym2 sym(const SpdMatrix2& m) { return {m.xx(), m.xy(), m.yy()}; }
SpdMatrix2 spd(const Sym2& m) { return {m.xx, m.xy, m.yy}; }

double det(const Sym2& m) { return m.xx * m.yy - m.xy * m.xy; }
double trace(const Sym2& m) { return m.xx + m.yy; }

Sym2 inv(const Sym2& m) {
    const double d = det(m);
    return {m.yy / d, -m.xy / d, m.xx / d};
}

Sym2 add(const Sym2& a, const Sym2& b) { return {a.xx + b.xx, a.xy + b.xy, a.yy + b.yy}; }
Sym2 sub(const Sym2& a, const Sym2& b) { return {a.xx - b.xx, a.xy - b.xy, a.yy - b.yy}; }
Sym2 mul(const Sym2& m, double s) { return {m.xx * s, m.xy * s, m.yy * s}; }

Vec2 apply(const Sym2& m, const Vec2& v) {
    return {m.xx * v.x + m.xy * v.y, m.xy * v.x + m.yy * v.y};
}

double quad(const Sym2& m, const Vec2& v) {
    return v.x * (m.xx * v.x + m.xy * v.y) + v.y * (m.xy * v.x + m.yy * v.y);
}

// Convex combination of information matrices and the matching center.
struct InfoBlend {
    Sym2 shape;
    Vec2 center;
};

InfoBlend blend(const Sym2& info_i, const Vec2& xi, const Sym2& info_j, const Vec2& xj,
                double alpha) {
    const Sym2 info = add(mul(info_i, alpha), mul(info_j, 1.0 - alpha));
    const Sym2 shape = inv(info);
    const Vec2 weighted = apply(info_i, xi) * alpha + apply(info_j, xj) * (1.0 - alpha);
    return {shape, apply(shape, weighted)};
}

double cce_k(const Sym2& pi, const Sym2& pj, const Vec2& diff, double alpha) {
    const Sym2 spread = add(mul(pi, 1.0 / alpha), mul(pj, 1.0 / (1.0 - alpha)));
    const double d_sq = quad(inv(spread), diff);
    return 1.0 - d_sq;
}

double criterion_value(const Sym2& shape, AlphaCriterion criterion) {
    return criterion == AlphaCriterion::min_determinant ? det(shape) : trace(shape);
}

struct GoldenResult {
    double x;
    double fx;
};

// Derivative-free bounded minimization. Assumes the objective is unimodal on
// [lo, hi]; callers certify against a grid afterwards.
GoldenResult golden_section(const std::function<double(double)>& f, double lo, double hi,
                            double tol, int max_iter) {
    constexpr double kRatio = 0.6180339887498949; // (sqrt(5) - 1) / 2
    double a = lo, b = hi;
    double c = b - kRatio * (b - a);
    double d = a + kRatio * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kRatio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kRatio * (b - a);
            fd = f(d);
        }
    }
    const double x = 0.5 * (a + b);
    return {x, f(x)};
}

} // namespace

OverlapResult overlap_test(const Ellipsoid& ei, const Ellipsoid& ej) {
    const double d_sq = mahalanobis_sq(ej.center, ei.center, ei.shape + ej.shape);
    const double d_m = std::sqrt(d_sq);
    return {d_m, d_m <= 2.0};
}

FusionOutcome kalman_fuse(const Ellipsoid& ei, const Ellipsoid& ej) {
    const Sym2 info_i = inv(sym(ei.shape));
    const Sym2 info_j = inv(sym(ej.shape));
    const Sym2 shape = inv(add(info_i, info_j));
    const Vec2 weighted = apply(info_i, ei.center) + apply(info_j, ej.center);
    const Vec2 center = apply(shape, weighted);
    return {Ellipsoid(center, spd(shape)), 0.5, 1.0, overlap_test(ei, ej).d_m};
}

FusionOutcome ci_fuse(const Ellipsoid& ei, const Ellipsoid& ej, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw ParameterError("ci_fuse: alpha must lie in [0, 1]");
    }
    const double d_m = overlap_test(ei, ej).d_m;
    if (alpha == 1.0) return {ei, alpha, 1.0, d_m};
    if (alpha == 0.0) return {ej, alpha, 1.0, d_m};
    const InfoBlend b = blend(inv(sym(ei.shape)), ei.center, inv(sym(ej.shape)), ej.center, alpha);
    return {Ellipsoid(b.center, spd(b.shape)), alpha, 1.0, d_m};
}

FusionOutcome cce_fuse(const Ellipsoid& ei, const Ellipsoid& ej, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ParameterError("cce_fuse: alpha must lie in (0, 1); the endpoint limits are the "
                             "prior estimates themselves");
    }
    const Sym2 pi = sym(ei.shape);
    const Sym2 pj = sym(ej.shape);
    const double k = cce_k(pi, pj, ej.center - ei.center, alpha);
    if (k <= kCceKMin) {
        throw DisjointSetsError("cce_fuse: prior interiors do not intersect (k = " +
                                std::to_string(k) + ")");
    }
    const InfoBlend b = blend(inv(pi), ei.center, inv(pj), ej.center, alpha);
    return {Ellipsoid(b.center, spd(mul(b.shape, k))), alpha, k, overlap_test(ei, ej).d_m};
}

FusionOutcome ici_fuse(const Ellipsoid& ei, const Ellipsoid& ej, double omega) {
    if (!(omega >= 0.0 && omega <= 1.0)) {
        throw ParameterError("ici_fuse: omega must lie in [0, 1]");
    }
    const Sym2 pi = sym(ei.shape);
    const Sym2 pj = sym(ej.shape);
    const Sym2 info_i = inv(pi);
    const Sym2 info_j = inv(pj);
    const Sym2 common_info = inv(add(mul(pi, omega), mul(pj, 1.0 - omega)));
    const Sym2 shape = inv(sub(add(info_i, info_j), common_info));
    const Vec2 gain_i = apply(sub(info_i, mul(common_info, omega)), ei.center);
    const Vec2 gain_j = apply(sub(info_j, mul(common_info, 1.0 - omega)), ej.center);
    const Vec2 center = apply(shape, gain_i + gain_j);
    return {Ellipsoid(center, spd(shape)), omega, 1.0, overlap_test(ei, ej).d_m};
}

double optimize_alpha(FusionMethod method, const Ellipsoid& ei, const Ellipsoid& ej,
                      AlphaCriterion criterion) {
    if (method == FusionMethod::kalman) {
        throw ParameterError("optimize_alpha: kalman fusion has no free parameter");
    }

    const Sym2 pi = sym(ei.shape);
    const Sym2 pj = sym(ej.shape);
    const Sym2 info_i = inv(pi);
    const Sym2 info_j = inv(pj);
    const Vec2 diff = ej.center - ei.center;
    const double prior_i_value = criterion_value(pi, criterion);
    const double prior_j_value = criterion_value(pj, criterion);

    const std::function<double(double)> objective = [&](double a) -> double {
        switch (method) {
        case FusionMethod::ci:
            // Exact at the endpoints: the inactive information term is zeroed.
            return criterion_value(inv(add(mul(info_i, a), mul(info_j, 1.0 - a))), criterion);
        case FusionMethod::cce: {
            // Endpoint limits: the scale factor k tends to 1 and the shape to
            // the respective prior.
            if (a <= 0.0) return prior_j_value;
            if (a >= 1.0) return prior_i_value;
            const double k = cce_k(pi, pj, diff, a);
            if (k <= kCceKMin) return kInf;
            const Sym2 x = inv(add(mul(info_i, a), mul(info_j, 1.0 - a)));
            return criterion_value(mul(x, k), criterion);
        }
        case FusionMethod::ici: {
            const Sym2 common_info = inv(add(mul(pi, a), mul(pj, 1.0 - a)));
            return criterion_value(inv(sub(add(info_i, info_j), common_info)), criterion);
        }
        default:
            return kInf;
        }
    };

    // 101-point certification grid over [0, 1], endpoints included.
    constexpr int kGridPoints = 101;
    double grid_min = kInf, grid_max = -kInf;
    double grid_argmin = 0.5;
    bool cce_interior_infeasible = false;
    for (int g = 0; g < kGridPoints; ++g) {
        const double a = static_cast<double>(g) / (kGridPoints - 1);
        const double v = objective(a);
        if (std::isfinite(v)) {
            if (v < grid_min) {
                grid_min = v;
                grid_argmin = a;
            }
            if (v > grid_max) grid_max = v;
        } else if (g != 0 && g != kGridPoints - 1) {
            cce_interior_infeasible = true;
        }
    }
    if (method == FusionMethod::cce && cce_interior_infeasible) {
        // The prior interiors intersect if and only if the scale factor k
        // stays positive over the whole parameter range; a negative k at any
        // sampled point certifies disjointness.
        throw DisjointSetsError("optimize_alpha: priors disjoint (k not positive over the "
                                "parameter range)");
    }
    if (grid_max - grid_min <= 1e-12 * std::max(1.0, std::abs(grid_min))) {
        return 0.5; // constant objective; tie-break by symmetry
    }

    constexpr double kEdge = 1e-6;
    constexpr double kSearchTol = 1e-8;
    constexpr int kMaxIter = 200;
    GoldenResult best = golden_section(objective, kEdge, 1.0 - kEdge, kSearchTol, kMaxIter);

    // Certify against the grid; if the line search missed, re-search the
    // bracket around the best grid point.
    if (grid_min < best.fx) {
        const double step = 1.0 / (kGridPoints - 1);
        const double lo = std::max(0.0, grid_argmin - step);
        const double hi = std::min(1.0, grid_argmin + step);
        const GoldenResult refined = golden_section(objective, lo, hi, kSearchTol, kMaxIter);
        best = refined.fx < best.fx ? refined : best;
        if (grid_min < best.fx) {
            best = {grid_argmin, grid_min}; // grid endpoint (a prior) dominates
        }
    }
    if (best.fx == kInf) {
        throw DisjointSetsError("optimize_alpha: no feasible parameter (priors disjoint)");
    }
    return best.x;
}

FusionOutcome fuse(FusionMethod method, const Ellipsoid& ei, const Ellipsoid& ej, double alpha) {
    switch (method) {
    case FusionMethod::kalman:
        return kalman_fuse(ei, ej);
    case FusionMethod::ci:
        return ci_fuse(ei, ej, alpha);
    case FusionMethod::ici:
        return ici_fuse(ei, ej, alpha);
    case FusionMethod::cce:
        if (alpha == 1.0) return {ei, alpha, 1.0, overlap_test(ei, ej).d_m};
        if (alpha == 0.0) return {ej, alpha, 1.0, overlap_test(ei, ej).d_m};
        return cce_fuse(ei, ej, alpha);
    }
    throw ParameterError("fuse: unknown method");
}

FusionOutcome fuse_optimal(FusionMethod method, const Ellipsoid& ei, const Ellipsoid& ej,
                           AlphaCriterion criterion) {
    if (method == FusionMethod::kalman) {
        return kalman_fuse(ei, ej);
    }
    return fuse(method, ei, ej, optimize_alpha(method, ei, ej, criterion));
}

const char* to_string(FusionMethod m) {
    switch (m) {
    case FusionMethod::kalman: return "kalman";
    case FusionMethod::ci: return "ci";
    case FusionMethod::ici: return "ici";
    case FusionMethod::cce: return "cce";
    }
    return "?";
}

const char* to_string(AlphaCriterion c) {
    return c == AlphaCriterion::min_determinant ? "det" : "trace";
}

} // namespace ellipfuse
