#pragma once

#include <vector>

#include "ellipfuse/ellipsoid.hpp"

namespace ellipfuse {

/// `count` points on the boundary of `e`: center + shape^{1/2} [cos, sin] at
/// uniformly spaced angles. Every returned point satisfies the quadratic
/// form within 1e-9. Requires count >= 3.
std::vector<Vec2> boundary_points(const Ellipsoid& e, int count);

/// Points where the boundaries of `ei` and `ej` cross (at most 4 for
/// distinct conics). Found by parameterizing the boundary of `ei` by angle
/// and bisecting sign changes of `ej`'s quadratic form over 720 initial
/// samples; each returned point satisfies both quadratic forms within `tol`.
/// Returns an empty list when the boundaries do not cross. For coincident
/// boundaries the sampling may degenerate; the contract is only that every
/// returned point lies on both boundaries.
std::vector<Vec2> boundary_intersection(const Ellipsoid& ei, const Ellipsoid& ej,
                                        double tol = 1e-9);

/// Grid-sampled membership classification of two ellipsoids, used as a
/// brute-force oracle for set-containment properties.
struct GridSamples {
    std::vector<Vec2> intersection; ///< grid points inside both ellipsoids
    std::vector<Vec2> union_points; ///< grid points inside at least one
};

/// Classifies a `resolution` x `resolution` uniform grid spanning the joint
/// axis-aligned bounding box of both ellipsoids. Requires resolution >= 11.
GridSamples grid_oracle(const Ellipsoid& ei, const Ellipsoid& ej, int resolution);

/// Grid points (over `e`'s own bounding box) that lie inside `e`.
std::vector<Vec2> grid_points_inside(const Ellipsoid& e, int resolution);

/// Loewner order test: true iff min_eig(b - a) >= -tol.
bool loewner_leq(const SpdMatrix2& a, const SpdMatrix2& b, double tol = kSymmetryTol);

} // namespace ellipfuse
