#pragma once

#include <string>

#include "ellipfuse/ellipsoid.hpp"

namespace ellipfuse {

/// Rules for fusing two ellipsoidal estimates.
///
/// - kalman: information-weighted fusion, optimal for independent estimates
///   but overconfident when the inputs are correlated.
/// - ci: covariance intersection (Julier & Uhlmann 1997), a convex
///   combination of the inverse shape matrices.
/// - ici: inverse covariance intersection (Noack et al. 2017), which
///   subtracts an estimate of the common information.
/// - cce: convex combination of the two defining quadratic forms, the
///   classical set-membership rule; its output contains the intersection of
///   the priors and stays inside their union.
enum class FusionMethod { kalman, ci, ici, cce };

/// Objective for choosing the free fusion parameter.
enum class AlphaCriterion { min_determinant, min_trace };

/// Fused estimate plus diagnostics.
struct FusionOutcome {
    Ellipsoid estimate;
    double alpha;       ///< parameter used (CI/CCE alpha or ICI omega; 0.5 for kalman)
    double k;           ///< CCE shrink factor 1 - d^2; 1 for the other rules
    double mahalanobis; ///< overlap distance d_m between the two inputs
};

/// d_m = sqrt((c_j - c_i)^T (P_i + P_j)^{-1} (c_j - c_i)); the pair is
/// declared overlapping when d_m <= 2.
struct OverlapResult {
    double d_m;
    bool overlapping;
};

OverlapResult overlap_test(const Ellipsoid& ei, const Ellipsoid& ej);

/// shape = (P_i^{-1} + P_j^{-1})^{-1}; center weighted by information.
/// The result is Loewner-smaller than both inputs.
FusionOutcome kalman_fuse(const Ellipsoid& ei, const Ellipsoid& ej);

/// shape = (a P_i^{-1} + (1-a) P_j^{-1})^{-1} for alpha in [0, 1]. The
/// endpoints return the corresponding prior verbatim (no inversion
/// round-trip).
FusionOutcome ci_fuse(const Ellipsoid& ei, const Ellipsoid& ej, double alpha);

/// Convex combination of the two quadratic forms, alpha in (0, 1):
///   X = (a P_i^{-1} + (1-a) P_j^{-1})^{-1}
///   d^2 = |x_j - x_i|^2 weighted by (P_i/a + P_j/(1-a))^{-1}
///   k = 1 - d^2, shape = k X, center as in CI.
/// Throws DisjointSetsError when k falls below kCceKMin.
FusionOutcome cce_fuse(const Ellipsoid& ei, const Ellipsoid& ej, double alpha);

/// With G = w P_i + (1-w) P_j:
///   shape = (P_i^{-1} + P_j^{-1} - G^{-1})^{-1}
///   center = K_i x_i + K_j x_j,
///   K_i = shape (P_i^{-1} - w G^{-1}), K_j = shape (P_j^{-1} - (1-w) G^{-1}).
FusionOutcome ici_fuse(const Ellipsoid& ei, const Ellipsoid& ej, double omega);

/// Minimal CCE scale factor: smaller computed k is treated as disjoint.
inline constexpr double kCceKMin = 1e-9;

/// Parameter search for ci/ici/cce: golden-section minimization of the
/// chosen criterion on [1e-6, 1 - 1e-6] (tolerance 1e-8, at most 200
/// iterations) followed by a 101-point grid certification; if a grid point
/// beats the line search the bracket around it is re-searched, so the
/// returned value is never worse than the grid. Constant objectives resolve
/// to 0.5. For cce the search domain is open and the endpoints are evaluated
/// as their limits (the respective prior); exactly 0 or 1 may be returned
/// when a prior dominates. Throws DisjointSetsError when the cce scale
/// factor k fails to stay positive across the parameter grid, which
/// certifies that the prior interiors do not intersect.
double optimize_alpha(FusionMethod method, const Ellipsoid& ei, const Ellipsoid& ej,
                      AlphaCriterion criterion);

/// Applies `method` at the given parameter (ignored for kalman). For cce the
/// endpoint convention of optimize_alpha is honored: alpha 0 / 1 returns the
/// respective prior.
FusionOutcome fuse(FusionMethod method, const Ellipsoid& ei, const Ellipsoid& ej, double alpha);

/// Convenience: optimize the parameter, then fuse.
FusionOutcome fuse_optimal(FusionMethod method, const Ellipsoid& ei, const Ellipsoid& ej,
                           AlphaCriterion criterion);

const char* to_string(FusionMethod m);
const char* to_string(AlphaCriterion c);

} // namespace ellipfuse
