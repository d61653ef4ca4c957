#pragma once

#include "ellipfuse/errors.hpp"
#include "ellipfuse/spd_matrix2.hpp"
#include "ellipfuse/vec2.hpp"

namespace ellipfuse {

/// The uncertainty set {x : (x - center)^T shape^{-1} (x - center) <= 1}.
///
/// Doubles as an estimate: `center` is the point estimate, `shape` the
/// estimated error covariance.
struct Ellipsoid {
    Vec2 center;
    SpdMatrix2 shape;

    Ellipsoid(const Vec2& c, const SpdMatrix2& s) : center(c), shape(s) {
        if (!c.finite()) {
            throw ParameterError("ellipsoid center must be finite");
        }
    }

    /// Axis-aligned bounding box half-widths: sqrt of the shape diagonal.
    Vec2 bounding_half_widths() const {
        return {std::sqrt(shape.xx()), std::sqrt(shape.yy())};
    }
};

/// Squared Mahalanobis distance (point - center)^T weight^{-1} (point - center).
/// Symmetric in point/center. `weight` being a SpdMatrix2 already guarantees
/// the SPD precondition.
inline double mahalanobis_sq(const Vec2& point, const Vec2& center, const SpdMatrix2& weight) {
    const Vec2 d = point - center;
    const double det = weight.determinant();
    // d^T adj(W) d / det(W), adjugate written out to avoid forming the inverse.
    const double q = d.x * (weight.yy() * d.x - weight.xy() * d.y) +
                     d.y * (weight.xx() * d.y - weight.xy() * d.x);
    return q / det;
}

/// Membership test with slack: quadratic form <= 1 + tol.
inline bool contains(const Ellipsoid& e, const Vec2& point, double tol = 0.0) {
    if (!(tol >= 0.0)) {
        throw ParameterError("containment tolerance must be non-negative");
    }
    return mahalanobis_sq(point, e.center, e.shape) <= 1.0 + tol;
}

} // namespace ellipfuse
