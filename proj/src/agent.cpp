#include "ellipfuse/agent.hpp"

namespace ellipfuse {

void AgentEstimator::handle_measurement(const BearingMeasurement& meas) {
    const Ellipsoid meas_ell = measurement_ellipse(sensor_, meas);
    const OverlapResult overlap = overlap_test(estimate_, meas_ell);
    if (overlap.overlapping) {
        estimate_ = kalman_fuse(estimate_, meas_ell).estimate;
    } else {
        // Discount a disjoint measurement once by d_m instead of discarding:
        // a fresh reading is independent and may carry corrective information.
        const Ellipsoid discounted(meas_ell.center, meas_ell.shape.scaled(overlap.d_m));
        estimate_ = kalman_fuse(estimate_, discounted).estimate;
    }
}

bool AgentEstimator::handle_communication(const Ellipsoid& peer_estimate) {
    if (!collaborative_) {
        return false;
    }
    if (!overlap_test(estimate_, peer_estimate).overlapping) {
        return false;
    }
    try {
        estimate_ = fuse_optimal(comm_method_, estimate_, peer_estimate, criterion_).estimate;
        return true;
    } catch (const Error&) {
        // The d_m <= 2 gate is a heuristic; cce can still find the interiors
        // disjoint. Treat any fusion failure as a discarded message.
        return false;
    }
}

} // namespace ellipfuse
