#include "ellipfuse/bearing.hpp"

namespace ellipfuse {

double true_bearing(const Vec2& target, const Vec2& sensor_pose) {
    const Vec2 d = target - sensor_pose;
    if (d.x == 0.0 && d.y == 0.0) {
        throw DegenerateGeometryError("true_bearing: target coincides with the sensor");
    }
    return wrap_angle(std::atan2(d.y, d.x));
}

BearingMeasurement sample_measurement(const Vec2& target, const SensorParams& sensor,
                                      double noise_draw) {
    return BearingMeasurement(true_bearing(target, sensor.pose) + sensor.sigma * noise_draw);
}

bool in_range(const Vec2& target, const SensorParams& sensor) {
    const double dist = (target - sensor.pose).norm();
    return sensor.r_min <= dist && dist <= sensor.r_max;
}

Ellipsoid measurement_ellipse(const SensorParams& sensor, const BearingMeasurement& meas) {
    const double mid = 0.5 * (sensor.r_min + sensor.r_max);
    const double w = 0.5 * (sensor.r_max - sensor.r_min);
    const double h = mid * std::tan(sensor.sigma);
    const double c = std::cos(meas.angle);
    const double s = std::sin(meas.angle);

    const Vec2 center = sensor.pose + mid * Vec2{c, s};
    // R diag(w^2, h^2) R^T with R the rotation by the measured bearing.
    const double w2 = w * w;
    const double h2 = h * h;
    const SpdMatrix2 shape(w2 * c * c + h2 * s * s, (w2 - h2) * s * c,
                           w2 * s * s + h2 * c * c);
    return Ellipsoid(center, shape);
}

} // namespace ellipfuse
