#pragma once

#include "ellipfuse/bearing.hpp"
#include "ellipfuse/fusion.hpp"

namespace ellipfuse {

/// One node's estimator: the running ellipsoidal estimate plus the policies
/// for folding in its own measurements and peer communications.
///
/// Measurements are always fused with the Kalman rule (a fresh sensor reading
/// is independent of the current estimate); when the measurement ellipse does
/// not overlap the estimate its shape is first discounted by the overlap
/// distance d_m. Communications pass the overlap gate first: disjoint peers
/// are discarded outright, overlapping ones are fused with the configured
/// method at a freshly optimized parameter. A non-collaborative agent ignores
/// communications entirely.
class AgentEstimator {
public:
    AgentEstimator(int id, const Ellipsoid& initial, const SensorParams& sensor,
                   FusionMethod comm_method, AlphaCriterion criterion, bool collaborative = true)
        : id_(id), estimate_(initial), sensor_(sensor), comm_method_(comm_method),
          criterion_(criterion), collaborative_(collaborative) {}

    /// Fuse a bearing measurement from this agent's own sensor.
    void handle_measurement(const BearingMeasurement& meas);

    /// Fuse a peer's broadcast estimate; returns true when the message was
    /// accepted (fused) and false when it was discarded. Never throws:
    /// fusion failures degrade to a discard.
    bool handle_communication(const Ellipsoid& peer_estimate);

    /// Copy of the current estimate, as shared on the network.
    Ellipsoid broadcast() const { return estimate_; }

    int id() const { return id_; }
    const Ellipsoid& estimate() const { return estimate_; }
    const SensorParams& sensor() const { return sensor_; }
    FusionMethod comm_method() const { return comm_method_; }
    AlphaCriterion criterion() const { return criterion_; }
    bool collaborative() const { return collaborative_; }

private:
    int id_;
    Ellipsoid estimate_;
    SensorParams sensor_;
    FusionMethod comm_method_;
    AlphaCriterion criterion_;
    bool collaborative_;
};

} // namespace ellipfuse
