#pragma once

#include <cmath>
#include <numbers>

#include "ellipfuse/ellipsoid.hpp"

namespace ellipfuse {

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
    double r = std::remainder(a, 2.0 * std::numbers::pi);
    if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
    return r;
}

/// A bearing sensor: position, operating range band and angular noise.
///
/// sigma is stored in radians; configuration files specify degrees.
struct SensorParams {
    Vec2 pose;    ///< sensor position (m)
    double r_min; ///< minimum operating range (m)
    double r_max; ///< maximum operating range (m)
    double sigma; ///< bearing standard deviation (rad)

    SensorParams(const Vec2& pose_, double r_min_, double r_max_, double sigma_rad)
        : pose(pose_), r_min(r_min_), r_max(r_max_), sigma(sigma_rad) {
        if (!pose.finite() || !std::isfinite(r_min) || !std::isfinite(r_max) ||
            !std::isfinite(sigma)) {
            throw ParameterError("sensor parameters must be finite");
        }
        if (!(0.0 < r_min && r_min < r_max)) {
            throw ParameterError("sensor range band requires 0 < r_min < r_max");
        }
        if (!(0.0 < sigma && sigma < 0.5 * std::numbers::pi)) {
            throw ParameterError("sensor sigma must lie in (0, pi/2) radians");
        }
    }

    static SensorParams from_degrees(const Vec2& pose, double r_min, double r_max,
                                     double sigma_deg) {
        return SensorParams(pose, r_min, r_max, sigma_deg * std::numbers::pi / 180.0);
    }

    double sigma_deg() const { return sigma * 180.0 / std::numbers::pi; }
};

/// One noisy bearing angle, wrapped to (-pi, pi].
struct BearingMeasurement {
    double angle;

    explicit BearingMeasurement(double a) : angle(wrap_angle(a)) {
        if (!std::isfinite(angle)) {
            throw ParameterError("bearing angle must be finite");
        }
    }
};

/// Angle of (target - sensor_pose), counterclockwise from +x, in (-pi, pi].
double true_bearing(const Vec2& target, const Vec2& sensor_pose);

/// noise_draw is a standard-normal deviate supplied by the caller's RNG.
BearingMeasurement sample_measurement(const Vec2& target, const SensorParams& sensor,
                                      double noise_draw);

/// True iff r_min <= |target - pose| <= r_max (closed band).
bool in_range(const Vec2& target, const SensorParams& sensor);

/// The measurement ellipse for a bearing: centered mid-range along the
/// measured direction, stretched along the bearing (half-length w, half of
/// the range band) and sized across it by the angular noise
/// (h = mid_range * tan(sigma)).
Ellipsoid measurement_ellipse(const SensorParams& sensor, const BearingMeasurement& meas);

} // namespace ellipfuse
