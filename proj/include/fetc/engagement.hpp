// Planar engagement kinematics for a constant-speed pursuer against a
// stationary target. Pure value types and pure functions.
#pragma once

#include <cmath>

#include "fetc/angles.hpp"
#include "fetc/errors.hpp"

namespace fetc {

/// Inertial state of the missile.
///
/// Speed is constant for the whole engagement: the guidance command acts
/// perpendicular to the velocity and never changes it. The path angle is kept
/// unwrapped so terminal impact-angle comparisons are unambiguous.
struct MissileState {
    double x = 0.0;          ///< inertial position x [m]
    double y = 0.0;          ///< inertial position y [m]
    double speed = 0.0;      ///< speed v_m > 0 [m/s]
    double path_angle = 0.0; ///< flight-path angle of the velocity vector [rad]
};

/// Stationary target position.
struct TargetState {
    double x = 0.0; ///< inertial position x [m]
    double y = 0.0; ///< inertial position y [m]
};

/// Missile state relative to the target.
///
/// The lead angle is measured from the line of sight to the velocity vector
/// and is zero on a collision course; it always satisfies
/// path_angle = los_angle + lead_angle (mod 2*pi).
struct RelativeState {
    double range = 0.0;      ///< distance to target r > 0 [m]
    double los_angle = 0.0;  ///< line-of-sight angle q [rad]
    double lead_angle = 0.0; ///< lead angle theta_m [rad]
};

/// Time derivative of the engagement state.
///
/// The lead-angle rate is not stored: it is path_angle_rate - los_rate by the
/// angle identity.
struct StateDerivative {
    double x_rate = 0.0;          ///< [m/s]
    double y_rate = 0.0;          ///< [m/s]
    double path_angle_rate = 0.0; ///< accel / speed [rad/s]
    double range_rate = 0.0;      ///< -speed * cos(lead) [m/s]
    double los_rate = 0.0;        ///< -speed * sin(lead) / range [rad/s]
};

/// Compute the relative state from inertial missile and target states.
///
/// The line-of-sight angle is the direction of the missile-to-target vector,
/// in (-pi, pi]; the lead angle is wrapped into (-pi, pi] at construction.
///
/// Throws GeometryError for coincident positions.
inline RelativeState relative_from_inertial(const MissileState& missile,
                                            const TargetState& target) {
    const double dx = target.x - missile.x;
    const double dy = target.y - missile.y;
    const double range = std::hypot(dx, dy);
    if (range <= 0.0) {
        throw GeometryError("relative_from_inertial: missile and target coincide");
    }
    const double los = wrap_pi(std::atan2(dy, dx));
    return RelativeState{range, los, wrap_pi(missile.path_angle - los)};
}

/// Right-hand side of the engagement equations of motion under a lateral
/// acceleration command.
///
/// Throws GeometryError when range is not positive.
inline StateDerivative kinematics_rhs(const MissileState& missile,
                                      const RelativeState& rel,
                                      double lateral_accel) {
    if (rel.range <= 0.0) {
        throw GeometryError("kinematics_rhs: range must be positive");
    }
    const double v = missile.speed;
    return StateDerivative{
        v * std::cos(missile.path_angle),
        v * std::sin(missile.path_angle),
        lateral_accel / v,
        -v * std::cos(rel.lead_angle),
        -v * std::sin(rel.lead_angle) / rel.range,
    };
}

} // namespace fetc
