#include "ellipfuse/counterexample.hpp"

#include <cmath>
#include <numbers>

#include "ellipfuse/geometry_oracles.hpp"

namespace ellipfuse {

namespace {

PropertyCheck check_properties(const Ellipsoid& fused, const Ellipsoid& ei, const Ellipsoid& ej,
                               const std::vector<Vec2>& prior_intersection,
                               const std::vector<Vec2>& boundary_pts, int resolution,
                               double form_tol, double boundary_tol) {
    PropertyCheck out;
    for (const Vec2& p : prior_intersection) {
        if (mahalanobis_sq(p, fused.center, fused.shape) > 1.0 + form_tol) {
            out.intersection_ok = false;
            if (!out.intersection_witness) out.intersection_witness = p;
        }
    }
    for (const Vec2& p : boundary_pts) {
        if (std::abs(mahalanobis_sq(p, fused.center, fused.shape) - 1.0) > boundary_tol) {
            out.boundary_ok = false;
        }
    }
    for (const Vec2& p : grid_points_inside(fused, resolution)) {
        const double qi = mahalanobis_sq(p, ei.center, ei.shape);
        const double qj = mahalanobis_sq(p, ej.center, ej.shape);
        if (qi > 1.0 + form_tol && qj > 1.0 + form_tol) {
            out.union_ok = false;
            if (!out.union_witness) out.union_witness = p;
        }
    }
    return out;
}

} // namespace

PairCheck check_pair(const Ellipsoid& ei, const Ellipsoid& ej, int resolution, double form_tol,
                     double boundary_tol) {
    const std::vector<Vec2> prior_intersection = grid_oracle(ei, ej, resolution).intersection;
    const std::vector<Vec2> boundary_pts = boundary_intersection(ei, ej);

    PairCheck out;
    out.alpha_ci = optimize_alpha(FusionMethod::ci, ei, ej, AlphaCriterion::min_determinant);
    const Ellipsoid ci = fuse(FusionMethod::ci, ei, ej, out.alpha_ci).estimate;
    out.ci = check_properties(ci, ei, ej, prior_intersection, boundary_pts, resolution, form_tol,
                              boundary_tol);

    out.alpha_ici = optimize_alpha(FusionMethod::ici, ei, ej, AlphaCriterion::min_determinant);
    const Ellipsoid ici = fuse(FusionMethod::ici, ei, ej, out.alpha_ici).estimate;
    out.ici = check_properties(ici, ei, ej, prior_intersection, boundary_pts, resolution,
                               form_tol, boundary_tol);

    try {
        out.alpha_cce = optimize_alpha(FusionMethod::cce, ei, ej, AlphaCriterion::min_determinant);
        const Ellipsoid cce = fuse(FusionMethod::cce, ei, ej, out.alpha_cce).estimate;
        out.cce = check_properties(cce, ei, ej, prior_intersection, boundary_pts, resolution,
                                   form_tol, boundary_tol);
    } catch (const DisjointSetsError&) {
        out.cce_feasible = false;
    }
    return out;
}

std::pair<Ellipsoid, Ellipsoid> random_overlapping_pair(Rng& rng) {
    const auto random_shape = [&rng]() {
        const double l1 = std::exp(rng.uniform(std::log(0.3), std::log(3.0)));
        const double l2 = std::exp(rng.uniform(std::log(0.3), std::log(3.0)));
        const double theta = rng.uniform(0.0, std::numbers::pi);
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        return SpdMatrix2(l1 * c * c + l2 * s * s, (l1 - l2) * s * c, l1 * s * s + l2 * c * c);
    };

    for (;;) {
        const SpdMatrix2 pi = random_shape();
        const SpdMatrix2 pj = random_shape();
        const Vec2 ci{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        const double reach =
            std::sqrt(pi.max_eigenvalue()) + std::sqrt(pj.max_eigenvalue());
        const double dir = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double dist = reach * rng.uniform(0.05, 0.75);
        const Vec2 cj = ci + dist * Vec2{std::cos(dir), std::sin(dir)};

        const Ellipsoid ei(ci, pi);
        const Ellipsoid ej(cj, pj);

        const bool crossing = contains(ei, cj) || contains(ej, ci) ||
                              !boundary_intersection(ei, ej).empty();
        if (!crossing) continue;

        // Require a robust convex-combination scale across the whole
        // parameter grid so downstream det-optimal searches stay clear of
        // the disjointness threshold.
        bool robust = true;
        for (int g = 1; g < 100 && robust; ++g) {
            const double a = static_cast<double>(g) / 100.0;
            try {
                if (cce_fuse(ei, ej, a).k <= 1e-2) robust = false;
            } catch (const DisjointSetsError&) {
                robust = false;
            }
        }
        if (robust) return {ei, ej};
    }
}

SearchReport run_counterexample_search(int trials, std::uint64_t seed, int resolution) {
    if (trials < 1) {
        throw ParameterError("counterexample search requires trials >= 1");
    }
    SearchReport report;
    report.trials = trials;
    report.seed = seed;
    report.resolution = resolution;

    for (int t = 0; t < trials; ++t) {
        Rng rng = Rng::stream(seed, StreamPurpose::pair_generation, static_cast<std::uint64_t>(t));
        const auto [ei, ej] = random_overlapping_pair(rng);
        const PairCheck pc = check_pair(ei, ej, resolution);

        const auto tally = [](const PropertyCheck& c, int (&counts)[3]) {
            if (!c.intersection_ok) ++counts[0];
            if (!c.boundary_ok) ++counts[1];
            if (!c.union_ok) ++counts[2];
        };
        tally(pc.ci, report.ci_violations);
        tally(pc.ici, report.ici_violations);
        if (pc.cce_feasible) {
            tally(pc.cce, report.cce_violations);
        } else {
            ++report.cce_infeasible;
        }

        if (!report.ci_union_witness && pc.ci.union_witness) {
            report.ci_union_witness = Witness{t, *pc.ci.union_witness, ei, ej, pc.alpha_ci};
        }
        if (!report.ici_intersection_witness && pc.ici.intersection_witness) {
            report.ici_intersection_witness =
                Witness{t, *pc.ici.intersection_witness, ei, ej, pc.alpha_ici};
        }
    }
    return report;
}

nlohmann::json to_json(const SearchReport& report) {
    using nlohmann::json;
    const auto violations = [](const int (&v)[3]) {
        return json{{"intersection", v[0]}, {"boundary", v[1]}, {"union", v[2]}};
    };
    const auto witness = [](const std::optional<Witness>& w) -> json {
        if (!w) return nullptr;
        return json{{"trial", w->trial},
                    {"point", {w->point.x, w->point.y}},
                    {"alpha", w->alpha},
                    {"ei",
                     {{"center", {w->ei.center.x, w->ei.center.y}},
                      {"shape",
                       {{w->ei.shape.xx(), w->ei.shape.xy()},
                        {w->ei.shape.xy(), w->ei.shape.yy()}}}}},
                    {"ej",
                     {{"center", {w->ej.center.x, w->ej.center.y}},
                      {"shape",
                       {{w->ej.shape.xx(), w->ej.shape.xy()},
                        {w->ej.shape.xy(), w->ej.shape.yy()}}}}}};
    };
    return json{{"trials", report.trials},
                {"seed", report.seed},
                {"grid_resolution", report.resolution},
                {"violations",
                 {{"ci", violations(report.ci_violations)},
                  {"ici", violations(report.ici_violations)},
                  {"cce", violations(report.cce_violations)}}},
                {"cce_infeasible", report.cce_infeasible},
                {"ci_union_witness", witness(report.ci_union_witness)},
                {"ici_intersection_witness", witness(report.ici_intersection_witness)}};
}

} // namespace ellipfuse
