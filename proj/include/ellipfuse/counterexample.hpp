#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "ellipfuse/fusion.hpp"
#include "ellipfuse/rng.hpp"

namespace ellipfuse {

/// Set-property audit of one fused ellipsoid against its two priors:
///   1. contains the sampled prior intersection,
///   2. keeps every boundary-crossing point on its own boundary,
///   3. stays inside the sampled prior union.
/// CI and ICI are expected to fail some of these; the convex-combination rule
/// is expected to satisfy all three.
struct PropertyCheck {
    bool intersection_ok = true; ///< property 1
    bool boundary_ok = true;     ///< property 2
    bool union_ok = true;        ///< property 3
    std::optional<Vec2> intersection_witness; ///< prior-intersection point left out
    std::optional<Vec2> union_witness;        ///< fused-set point outside the union
};

struct PairCheck {
    double alpha_ci = 0.0, alpha_ici = 0.0, alpha_cce = 0.0; ///< det-optimal parameters
    PropertyCheck ci, ici, cce;
    bool cce_feasible = true; ///< false when cce found the interiors disjoint
};

/// Grid/boundary tolerance defaults match the library's property tests: a
/// membership violation needs quadratic form > 1 + form_tol, a boundary
/// violation |form - 1| > boundary_tol.
PairCheck check_pair(const Ellipsoid& ei, const Ellipsoid& ej, int resolution,
                     double form_tol = 1e-9, double boundary_tol = 1e-6);

/// Draws a random pair of ellipsoids whose interiors intersect.
std::pair<Ellipsoid, Ellipsoid> random_overlapping_pair(Rng& rng);

struct Witness {
    int trial = 0;
    Vec2 point;
    Ellipsoid ei;
    Ellipsoid ej;
    double alpha = 0.0;
};

struct SearchReport {
    int trials = 0;
    std::uint64_t seed = 0;
    int resolution = 0;
    // violation counts per method, properties 1..3
    int ci_violations[3] = {0, 0, 0};
    int ici_violations[3] = {0, 0, 0};
    int cce_violations[3] = {0, 0, 0};
    int cce_infeasible = 0;
    std::optional<Witness> ci_union_witness;        ///< CI point outside the union
    std::optional<Witness> ici_intersection_witness; ///< intersection point ICI excludes
};

SearchReport run_counterexample_search(int trials, std::uint64_t seed, int resolution = 101);

nlohmann::json to_json(const SearchReport& report);

} // namespace ellipfuse
