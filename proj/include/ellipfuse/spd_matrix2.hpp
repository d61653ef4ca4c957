#pragma once

#include <cmath>

#include "ellipfuse/errors.hpp"
#include "ellipfuse/vec2.hpp"

namespace ellipfuse {

/// Tolerance used when validating that user-supplied matrix entries are
/// symmetric, and as the default slack for Loewner-order comparisons.
inline constexpr double kSymmetryTol = 1e-9;

/// Eigendecomposition of a symmetric 2x2 matrix, closed form.
struct SymEigen {
    double lambda_max = 0.0;
    double lambda_min = 0.0;
    Vec2 axis_max; ///< unit eigenvector for lambda_max
    Vec2 axis_min; ///< unit eigenvector for lambda_min
};

/// Symmetric positive definite 2x2 matrix (units m^2).
///
/// Construction validates the invariants and throws InvalidMatrixError on
/// violation; a held SpdMatrix2 is always strictly positive definite.
/// Positive definiteness is checked through the exact Sylvester conditions
/// (xx > 0, yy > 0, det > 0), which is equivalent to both eigenvalues being
/// strictly positive. All algebra is closed form: inverse via adjugate over
/// determinant, eigenvalues via the trace/determinant quadratic.
class SpdMatrix2 {
public:
    /// Symmetric storage: entries (xx, xy, yy) of [[xx, xy], [xy, yy]].
    SpdMatrix2(double xx, double xy, double yy) : xx_(xx), xy_(xy), yy_(yy) {
        validate();
    }

    /// Build from four row-major entries, checking symmetry within
    /// kSymmetryTol before folding the off-diagonal pair.
    static SpdMatrix2 from_rows(double m00, double m01, double m10, double m11) {
        if (!(std::abs(m01 - m10) <= kSymmetryTol)) {
            throw InvalidMatrixError("matrix is not symmetric: |m01 - m10| = " +
                                     std::to_string(std::abs(m01 - m10)));
        }
        return SpdMatrix2(m00, 0.5 * (m01 + m10), m11);
    }

    static SpdMatrix2 identity() { return SpdMatrix2(1.0, 0.0, 1.0); }
    static SpdMatrix2 diagonal(double a, double b) { return SpdMatrix2(a, 0.0, b); }
    static SpdMatrix2 isotropic(double a) { return SpdMatrix2(a, 0.0, a); }

    double xx() const { return xx_; }
    double xy() const { return xy_; }
    double yy() const { return yy_; }

    double determinant() const { return xx_ * yy_ - xy_ * xy_; }
    double trace() const { return xx_ + yy_; }

    SpdMatrix2 inverse() const {
        const double d = determinant();
        return SpdMatrix2(yy_ / d, -xy_ / d, xx_ / d);
    }

    SpdMatrix2 operator+(const SpdMatrix2& r) const {
        return SpdMatrix2(xx_ + r.xx_, xy_ + r.xy_, yy_ + r.yy_);
    }

    /// Matrix scaled by s > 0.
    SpdMatrix2 scaled(double s) const {
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw ParameterError("scale factor must be positive and finite");
        }
        return SpdMatrix2(s * xx_, s * xy_, s * yy_);
    }

    Vec2 apply(const Vec2& v) const {
        return {xx_ * v.x + xy_ * v.y, xy_ * v.x + yy_ * v.y};
    }

    /// Quadratic form v^T M v (of this matrix itself, not its inverse).
    double quadratic_form(const Vec2& v) const {
        return v.x * (xx_ * v.x + xy_ * v.y) + v.y * (xy_ * v.x + yy_ * v.y);
    }

    SymEigen eigen() const {
        SymEigen e;
        const double mean = 0.5 * (xx_ + yy_);
        const double half_diff = 0.5 * (xx_ - yy_);
        const double r = std::hypot(half_diff, xy_);
        e.lambda_max = mean + r;
        e.lambda_min = mean - r;
        if (r == 0.0) {
            e.axis_max = {1.0, 0.0};
            e.axis_min = {0.0, 1.0};
            return e;
        }
        // Pick the better-conditioned eigenvector expression.
        Vec2 v = (half_diff >= 0.0) ? Vec2{half_diff + r, xy_} : Vec2{xy_, r - half_diff};
        const double n = v.norm();
        e.axis_max = {v.x / n, v.y / n};
        e.axis_min = {-e.axis_max.y, e.axis_max.x};
        return e;
    }

    double min_eigenvalue() const { return eigen().lambda_min; }
    double max_eigenvalue() const { return eigen().lambda_max; }

    /// Unique SPD square root, via eigendecomposition.
    SpdMatrix2 sqrt() const {
        const SymEigen e = eigen();
        const double s1 = std::sqrt(e.lambda_max);
        const double s2 = std::sqrt(e.lambda_min);
        const Vec2 u = e.axis_max;
        return SpdMatrix2(s1 * u.x * u.x + s2 * u.y * u.y,
                          (s1 - s2) * u.x * u.y,
                          s1 * u.y * u.y + s2 * u.x * u.x);
    }

private:
    void validate() const {
        if (!std::isfinite(xx_) || !std::isfinite(xy_) || !std::isfinite(yy_)) {
            throw InvalidMatrixError("matrix entries must be finite");
        }
        if (!(xx_ > 0.0) || !(yy_ > 0.0) || !(determinant() > 0.0)) {
            throw InvalidMatrixError("matrix is not strictly positive definite");
        }
    }

    double xx_, xy_, yy_;
};

} // namespace ellipfuse
