// Closed-loop lateral-acceleration commands: proportional navigation, the
// three free-time convergent laws (lead-angle, impact-angle and impact-time
// control), and the optimal-error-dynamics baselines they reduce to, together
// with the predictors they need.
#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "fetc/engagement.hpp"
#include "fetc/error_dynamics.hpp"
#include "fetc/errors.hpp"

namespace fetc {

enum class GuidanceLaw {
    Png,        ///< a = N v qdot
    FetcedLacg, ///< free-time convergent lead-angle control
    FetcedIacg, ///< free-time convergent impact-angle control
    FetcedItcg, ///< free-time convergent impact-time control
    OedIacg,    ///< optimal-error-dynamics impact-angle baseline
    OedItcg,    ///< optimal-error-dynamics impact-time baseline
};

/// Which law to run and its parameters. Fields that a law does not use stay
/// disengaged; validate() enforces the per-law requirements.
struct GuidanceSpec {
    GuidanceLaw law = GuidanceLaw::Png;
    double nav_ratio = 0.0; ///< N; must exceed 1 where terminal-angle or
                            ///< impact-time prediction divides by N - 1, 2N - 1
    double gain = 0.0;      ///< K of the reaching law
    std::optional<double> converge_time;  ///< T_s [s]; free-time laws only
    std::optional<double> impact_angle_d; ///< desired impact angle [rad]
    std::optional<double> impact_time_d;  ///< desired impact time [s]
};

/// Lead-angle deadband for the impact-time biases, which divide by theta_m.
/// Inside the band the bias is suppressed for the step.
inline constexpr double kLeadAngleDeadband = 0.01; // rad

/// Proportional navigation: a = N v qdot.
inline double png_command(double speed, double los_rate, double nav_ratio) {
    return nav_ratio * speed * los_rate;
}

/// Lead-angle control command.
///
/// Enforces the reaching law on the lead angle; the command is zero after the
/// convergence time (the lead angle has already converged, the course is a
/// collision course). `time_guard` is the remaining-time threshold below which
/// the post-convergence branch applies.
inline double lacg_command(const RelativeState& rel, double speed, double t,
                           double gain, double converge_time,
                           double time_guard = kConvergeTimeGuard) {
    if (rel.range <= 0.0) {
        throw GeometryError("lacg_command: range must be positive");
    }
    const double remaining = converge_time - t;
    if (remaining < time_guard) {
        return 0.0;
    }
    const double eps = rel.lead_angle;
    return -gain * speed * (-std::expm1(-eps)) / remaining -
           speed * speed * std::sin(eps) / rel.range;
}

/// Terminal impact angle reached when flying proportional navigation with
/// ratio N from the given geometry: (N q - phi) / (N - 1).
inline double predict_terminal_angle(double los_angle, double path_angle,
                                     double nav_ratio) {
    if (nav_ratio <= 1.0) {
        throw ParameterError("predict_terminal_angle: nav ratio must exceed 1");
    }
    return (nav_ratio * los_angle - path_angle) / (nav_ratio - 1.0);
}

/// Impact-angle error: desired minus predicted terminal angle.
inline double impact_angle_error(double los_angle, double path_angle,
                                 const GuidanceSpec& spec) {
    return *spec.impact_angle_d -
           predict_terminal_angle(los_angle, path_angle, spec.nav_ratio);
}

/// Impact-angle control command: proportional navigation plus a bias that
/// enforces the reaching law on the impact-angle error.
///
/// The bias sign is the one under which the closed-loop error actually obeys
/// the reaching law (the error rate is bias / ((N - 1) v)); after the
/// convergence time the law reduces to plain proportional navigation.
inline double iacg_command(const RelativeState& rel, double speed,
                           double los_rate, double path_angle, double t,
                           const GuidanceSpec& spec,
                           double time_guard = kConvergeTimeGuard) {
    const double png = png_command(speed, los_rate, spec.nav_ratio);
    const double remaining = *spec.converge_time - t;
    if (remaining < time_guard) {
        return png;
    }
    const double eps = impact_angle_error(rel.los_angle, path_angle, spec);
    return png - spec.gain * (spec.nav_ratio - 1.0) * speed * (-std::expm1(-eps)) /
                     remaining;
}

/// Impact-angle baseline with the bias linear in the error over time to go.
inline double oed_iacg_command(const RelativeState& rel, double speed,
                               double los_rate, double path_angle, double t_go,
                               const GuidanceSpec& spec,
                               double time_guard = kConvergeTimeGuard) {
    const double png = png_command(speed, los_rate, spec.nav_ratio);
    if (t_go < time_guard) {
        return png;
    }
    const double eps = impact_angle_error(rel.los_angle, path_angle, spec);
    return png - spec.gain * (spec.nav_ratio - 1.0) * speed * eps / t_go;
}

/// Total impact-time estimate when flying proportional navigation:
/// t + (r / v) (1 + theta^2 / (2 (2N - 1))).
inline double estimate_impact_time(double range, double speed,
                                   double lead_angle, double t,
                                   double nav_ratio) {
    if (range < 0.0) {
        throw GeometryError("estimate_impact_time: range must be non-negative");
    }
    if (speed <= 0.0) {
        throw ParameterError("estimate_impact_time: speed must be positive");
    }
    if (nav_ratio <= 0.5) {
        throw ParameterError("estimate_impact_time: nav ratio must exceed 1/2");
    }
    return t + (range / speed) *
                   (1.0 + lead_angle * lead_angle / (2.0 * (2.0 * nav_ratio - 1.0)));
}

/// Impact-time error: desired impact time minus the current estimate.
/// Recomputed from the estimate every step, never integrated.
inline double impact_time_error(const RelativeState& rel, double speed, double t,
                                const GuidanceSpec& spec) {
    return *spec.impact_time_d -
           estimate_impact_time(rel.range, speed, rel.lead_angle, t, spec.nav_ratio);
}

/// Impact-time control command: proportional navigation plus a bias that
/// enforces the reaching law on the impact-time error.
///
/// The bias divides by the lead angle (zero exactly on the collision course,
/// where impact time can no longer be shaped); inside the deadband it is
/// suppressed for the step. After the convergence time the law reduces to
/// plain proportional navigation.
inline double itcg_command(const RelativeState& rel, double speed,
                           double los_rate, double t, const GuidanceSpec& spec,
                           double time_guard = kConvergeTimeGuard) {
    if (rel.range <= 0.0) {
        throw GeometryError("itcg_command: range must be positive");
    }
    const double png = png_command(speed, los_rate, spec.nav_ratio);
    const double remaining = *spec.converge_time - t;
    if (remaining < time_guard || std::abs(rel.lead_angle) < kLeadAngleDeadband) {
        return png;
    }
    const double eps = impact_time_error(rel, speed, t, spec);
    return png + spec.gain * (2.0 * spec.nav_ratio - 1.0) * speed * speed *
                     (-std::expm1(-eps)) /
                     (rel.range * rel.lead_angle * remaining);
}

/// Impact-time baseline with the bias linear in the error over time to go.
inline double oed_itcg_command(const RelativeState& rel, double speed,
                               double los_rate, double t_go, double t,
                               const GuidanceSpec& spec,
                               double time_guard = kConvergeTimeGuard) {
    if (rel.range <= 0.0) {
        throw GeometryError("oed_itcg_command: range must be positive");
    }
    const double png = png_command(speed, los_rate, spec.nav_ratio);
    if (t_go < time_guard || std::abs(rel.lead_angle) < kLeadAngleDeadband) {
        return png;
    }
    const double eps = impact_time_error(rel, speed, t, spec);
    return png + spec.gain * (2.0 * spec.nav_ratio - 1.0) * speed * speed * eps /
                     (rel.range * rel.lead_angle * t_go);
}

/// Full impact-time error rate, before the small-lead-angle approximation:
///
///   cos(theta) (1 + theta^2 / (2(2N-1))) + (N-1) theta sin(theta) / (2N-1)
///     - r theta a_bias / ((2N-1) v^2) - 1
///
/// Kept as an oracle for bounding how much the linearized error dynamics the
/// impact-time bias is designed against deviates from the true rate.
inline double impact_time_error_rate_full(const RelativeState& rel, double speed,
                                          double bias_accel, double nav_ratio) {
    const double theta = rel.lead_angle;
    const double two_n1 = 2.0 * nav_ratio - 1.0;
    return std::cos(theta) * (1.0 + theta * theta / (2.0 * two_n1)) +
           (nav_ratio - 1.0) * theta * std::sin(theta) / two_n1 -
           rel.range * theta * bias_accel / (two_n1 * speed * speed) - 1.0;
}

// ---------------------------------------------------------------------------
// Law dispatch
// ---------------------------------------------------------------------------

/// Tracking errors observable at one instant; only the errors the active law
/// defines are engaged.
struct ErrorReadout {
    std::optional<double> lead_angle_error;  ///< [rad]
    std::optional<double> impact_angle_error; ///< [rad]
    std::optional<double> impact_time_error;  ///< [s]

    /// The governing error of the active law.
    double active() const {
        if (impact_time_error) {
            return *impact_time_error;
        }
        if (impact_angle_error) {
            return *impact_angle_error;
        }
        return lead_angle_error.value_or(0.0);
    }
};

struct GuidanceCommand {
    double accel = 0.0; ///< lateral acceleration [m/s^2]
    ErrorReadout errors;
};

/// Convergence tolerance on the governing error of a law: 0.01 rad for angle
/// errors, 0.05 s for the impact-time error (whose in-loop estimate is itself
/// approximate).
inline double error_tolerance(GuidanceLaw law) {
    switch (law) {
    case GuidanceLaw::FetcedItcg:
    case GuidanceLaw::OedItcg:
        return 0.05;
    default:
        return 0.01;
    }
}

inline bool uses_converge_time(GuidanceLaw law) {
    return law == GuidanceLaw::FetcedLacg || law == GuidanceLaw::FetcedIacg ||
           law == GuidanceLaw::FetcedItcg;
}

/// Check the per-law parameter requirements; throws ParameterError.
inline void validate(const GuidanceSpec& spec) {
    const bool needs_nav = spec.law != GuidanceLaw::FetcedLacg;
    const bool needs_gain = spec.law != GuidanceLaw::Png;
    if (needs_nav && spec.nav_ratio <= 0.0) {
        throw ParameterError("guidance: nav ratio must be positive");
    }
    if ((spec.law == GuidanceLaw::FetcedIacg || spec.law == GuidanceLaw::OedIacg ||
         spec.law == GuidanceLaw::FetcedItcg || spec.law == GuidanceLaw::OedItcg) &&
        spec.nav_ratio <= 1.0) {
        throw ParameterError("guidance: nav ratio must exceed 1 for angle/time control");
    }
    if (needs_gain && spec.gain < 1.0) {
        throw ParameterError("guidance: gain must be at least 1");
    }
    if (spec.law == GuidanceLaw::FetcedLacg && spec.gain <= 1.0) {
        throw ParameterError("guidance: lead-angle control needs gain above 1");
    }
    if (uses_converge_time(spec.law)) {
        if (!spec.converge_time || *spec.converge_time <= 0.0) {
            throw ParameterError("guidance: free-time laws need a positive convergence time");
        }
    } else if (spec.converge_time) {
        throw ParameterError("guidance: convergence time is not used by this law");
    }
    const bool needs_angle =
        spec.law == GuidanceLaw::FetcedIacg || spec.law == GuidanceLaw::OedIacg;
    if (needs_angle != spec.impact_angle_d.has_value()) {
        throw ParameterError(needs_angle
                                 ? "guidance: impact-angle control needs a desired angle"
                                 : "guidance: desired impact angle is not used by this law");
    }
    const bool needs_time =
        spec.law == GuidanceLaw::FetcedItcg || spec.law == GuidanceLaw::OedItcg;
    if (needs_time != spec.impact_time_d.has_value()) {
        throw ParameterError(needs_time
                                 ? "guidance: impact-time control needs a desired time"
                                 : "guidance: desired impact time is not used by this law");
    }
}

/// Evaluate the active law at one instant.
///
/// `time_guard` is the simulation step: bias terms switch to their
/// post-convergence branch within one step of the convergence time, and the
/// baselines drop their bias within one step of interception.
inline GuidanceCommand evaluate_guidance(const GuidanceSpec& spec,
                                         const RelativeState& rel,
                                         const MissileState& missile, double t,
                                         double time_guard = kConvergeTimeGuard) {
    const double v = missile.speed;
    const double los_rate = -v * std::sin(rel.lead_angle) / rel.range;
    GuidanceCommand out;
    switch (spec.law) {
    case GuidanceLaw::Png:
        out.errors.lead_angle_error = rel.lead_angle;
        out.accel = png_command(v, los_rate, spec.nav_ratio);
        break;
    case GuidanceLaw::FetcedLacg:
        out.errors.lead_angle_error = rel.lead_angle;
        out.accel = lacg_command(rel, v, t, spec.gain, *spec.converge_time,
                                 time_guard);
        break;
    case GuidanceLaw::FetcedIacg:
        out.errors.impact_angle_error =
            impact_angle_error(rel.los_angle, missile.path_angle, spec);
        out.accel = iacg_command(rel, v, los_rate, missile.path_angle, t, spec,
                                 time_guard);
        break;
    case GuidanceLaw::OedIacg:
        out.errors.impact_angle_error =
            impact_angle_error(rel.los_angle, missile.path_angle, spec);
        out.accel = oed_iacg_command(rel, v, los_rate, missile.path_angle,
                                     rel.range / v, spec, time_guard);
        break;
    case GuidanceLaw::FetcedItcg:
        out.errors.impact_time_error = impact_time_error(rel, v, t, spec);
        out.accel = itcg_command(rel, v, los_rate, t, spec, time_guard);
        break;
    case GuidanceLaw::OedItcg:
        out.errors.impact_time_error = impact_time_error(rel, v, t, spec);
        out.accel =
            oed_itcg_command(rel, v, los_rate, rel.range / v, t, spec, time_guard);
        break;
    }
    return out;
}

inline std::string to_string(GuidanceLaw law) {
    switch (law) {
    case GuidanceLaw::Png:
        return "PNG";
    case GuidanceLaw::FetcedLacg:
        return "FETCED_LACG";
    case GuidanceLaw::FetcedIacg:
        return "FETCED_IACG";
    case GuidanceLaw::FetcedItcg:
        return "FETCED_ITCG";
    case GuidanceLaw::OedIacg:
        return "OED_IACG";
    case GuidanceLaw::OedItcg:
        return "OED_ITCG";
    }
    return "PNG";
}

inline GuidanceLaw law_from_string(const std::string& name) {
    if (name == "PNG") return GuidanceLaw::Png;
    if (name == "FETCED_LACG") return GuidanceLaw::FetcedLacg;
    if (name == "FETCED_IACG") return GuidanceLaw::FetcedIacg;
    if (name == "FETCED_ITCG") return GuidanceLaw::FetcedItcg;
    if (name == "OED_IACG") return GuidanceLaw::OedIacg;
    if (name == "OED_ITCG") return GuidanceLaw::OedItcg;
    throw SchemaError("unknown guidance law name: " + name);
}

} // namespace fetc
