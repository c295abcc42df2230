// Fixed-step closed-loop engagement integration with termination detection and
// metric extraction. Inertial states are the source of truth: the relative
// state is recomputed from positions every step, never co-integrated.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "fetc/engagement.hpp"
#include "fetc/errors.hpp"
#include "fetc/guidance.hpp"

namespace fetc {

enum class Integrator { Rk4, Euler };

struct SimConfig {
    double dt = 0.01;        ///< integration step [s]
    double t_max = 100.0;    ///< wall-clock cap [s]
    double hit_radius = 0.5; ///< intercept radius [m]
    Integrator integrator = Integrator::Rk4;
};

/// One recorded sample. The command is held constant over the step that
/// starts here (zero-order hold); the terminal sample carries no command.
struct TrajectoryPoint {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double range = 0.0;
    double los_angle = 0.0;
    double path_angle = 0.0;
    double lead_angle = 0.0;
    double accel = 0.0;
    double eps_active = 0.0;
    double energy = 0.0; ///< accumulated integral of accel^2 [(m/s^2)^2 s]
};

using Trajectory = std::vector<TrajectoryPoint>;

struct EngagementMetrics {
    double miss_distance = 0.0; ///< [m]
    double impact_time = 0.0;   ///< closest-approach time [s]
    double impact_angle = 0.0;  ///< path angle at closest approach [rad]
    double total_energy = 0.0;
    /// First time the governing error drops below the law's tolerance and
    /// stays there (endgame samples excluded, where line-of-sight quantities
    /// degenerate); NaN when it never converges.
    double error_convergence_time = std::numeric_limits<double>::quiet_NaN();
    bool intercepted = false;
};

/// Trajectory plus summary metrics of one engagement.
struct EngagementRecord {
    Trajectory trajectory;
    EngagementMetrics metrics;
};

/// Advance the inertial state one step with the command held constant.
inline MissileState advance_state(const MissileState& m, double accel, double dt,
                                  Integrator integrator) {
    const double v = m.speed;
    MissileState next = m;
    if (integrator == Integrator::Euler) {
        next.x += dt * v * std::cos(m.path_angle);
        next.y += dt * v * std::sin(m.path_angle);
        next.path_angle += dt * accel / v;
        return next;
    }
    const double turn_rate = accel / v;
    const double p1 = m.path_angle;
    const double p2 = m.path_angle + 0.5 * dt * turn_rate;
    const double p4 = m.path_angle + dt * turn_rate;
    // Classic RK4; the two midpoint stages coincide because the turn rate is
    // constant across the step.
    next.x += dt / 6.0 * (v * std::cos(p1) + 4.0 * v * std::cos(p2) + v * std::cos(p4));
    next.y += dt / 6.0 * (v * std::sin(p1) + 4.0 * v * std::sin(p2) + v * std::sin(p4));
    next.path_angle = p4;
    return next;
}

struct StepOutcome {
    MissileState missile;
    double accel = 0.0;
    ErrorReadout errors;
};

/// One closed-loop step: evaluate the active law at the step start, hold the
/// command over the step, integrate, and check the result is finite.
inline StepOutcome step(const MissileState& missile, const TargetState& target,
                        const GuidanceSpec& spec, const SimConfig& cfg, double t) {
    const RelativeState rel = relative_from_inertial(missile, target);
    if (rel.range <= cfg.hit_radius) {
        throw GeometryError("step: engagement already inside the hit radius");
    }
    if (t >= cfg.t_max) {
        throw DomainError("step: engagement already past the time cap");
    }
    const GuidanceCommand cmd = evaluate_guidance(spec, rel, missile, t, cfg.dt);
    StepOutcome out;
    out.missile = advance_state(missile, cmd.accel, cfg.dt, cfg.integrator);
    out.accel = cmd.accel;
    out.errors = cmd.errors;
    if (!std::isfinite(out.missile.x) || !std::isfinite(out.missile.y) ||
        !std::isfinite(out.missile.path_angle)) {
        throw NumericError("step: non-finite state", t);
    }
    return out;
}

namespace detail {

/// Quadratic through three equally spaced samples of squared range; its vertex
/// locates the closest approach with sub-step resolution. Squared range is
/// exactly quadratic in time for straight-line passage, where plain range has
/// a kink.
struct ClosestApproach {
    double t = 0.0;
    double distance = 0.0;
};

inline ClosestApproach refine_closest_approach(const TrajectoryPoint& a,
                                               const TrajectoryPoint& b,
                                               const TrajectoryPoint& c,
                                               double dt) {
    const double y0 = a.range * a.range;
    const double y1 = b.range * b.range;
    const double y2 = c.range * c.range;
    const double curvature = y0 - 2.0 * y1 + y2;
    if (curvature <= 0.0) {
        // No interior minimum resolvable; fall back to the best sample.
        const TrajectoryPoint& best = (a.range <= b.range && a.range <= c.range)
                                          ? a
                                          : (b.range <= c.range ? b : c);
        return {best.t, best.range};
    }
    double t_star = b.t + dt * (y0 - y2) / (2.0 * curvature);
    t_star = std::min(std::max(t_star, a.t), c.t + dt);
    const double slope = (y2 - y0) / (2.0 * dt);
    const double quad = curvature / (2.0 * dt * dt);
    const double d = t_star - b.t;
    const double value = y1 + slope * d + quad * d * d;
    return {t_star, std::sqrt(std::max(value, 0.0))};
}

inline double interpolate_path_angle(const TrajectoryPoint& a,
                                     const TrajectoryPoint& b,
                                     const TrajectoryPoint& c, double t_star,
                                     double dt) {
    const TrajectoryPoint& lo = (t_star <= b.t) ? a : b;
    const TrajectoryPoint& hi = (t_star <= b.t) ? b : c;
    const double w = (t_star - lo.t) / dt;
    return lo.path_angle + w * (hi.path_angle - lo.path_angle);
}

} // namespace detail

/// Run an engagement to interception, passage, or the time cap.
///
/// Termination: range within the hit radius; or range increasing while inside
/// ten hit radii (the target has been passed); or the time cap. Impact time
/// and miss distance are refined by a quadratic fit of squared range over the
/// last three samples; the impact angle is the path angle at that instant.
/// The time cap yields a flagged no-intercept record with metrics taken at the
/// closest recorded approach.
inline EngagementRecord run_engagement(const MissileState& missile0,
                                       const TargetState& target,
                                       const GuidanceSpec& spec,
                                       const SimConfig& cfg) {
    validate(spec);
    if (cfg.dt <= 0.0 || cfg.hit_radius <= 0.0 || cfg.t_max <= 0.0) {
        throw ParameterError("run_engagement: dt, hit radius and time cap must be positive");
    }
    if (missile0.speed <= 0.0) {
        throw ParameterError("run_engagement: speed must be positive");
    }

    EngagementRecord record;
    Trajectory& traj = record.trajectory;
    const double dt = cfg.dt;

    MissileState m = missile0;
    // Wrapped at construction, then propagated continuously: the raw angles
    // are re-derived from positions each step and snapped to the branch
    // closest to the previous sample. The lead-angle offset is an exact
    // multiple of 2*pi, so the angle identity survives to the bit.
    RelativeState rel = relative_from_inertial(m, target);
    const double lead_offset = rel.lead_angle - (m.path_angle - rel.los_angle);
    double energy = 0.0;
    std::size_t min_index = 0;

    enum class Stop { None, Hit, Passed, Timeout };
    Stop stop = Stop::None;

    for (std::size_t i = 0;; ++i) {
        const double t = static_cast<double>(i) * dt;
        if (rel.range <= cfg.hit_radius) {
            stop = Stop::Hit;
        } else if (!traj.empty() && rel.range > traj.back().range &&
                   traj.back().range < 10.0 * cfg.hit_radius) {
            stop = Stop::Passed;
        } else if (t >= cfg.t_max) {
            stop = Stop::Timeout;
        }

        TrajectoryPoint point;
        point.t = t;
        point.x = m.x;
        point.y = m.y;
        point.range = rel.range;
        point.los_angle = rel.los_angle;
        point.path_angle = m.path_angle;
        point.lead_angle = rel.lead_angle;

        if (stop == Stop::None) {
            const GuidanceCommand cmd = evaluate_guidance(spec, rel, m, t, dt);
            point.accel = cmd.accel;
            point.eps_active = cmd.errors.active();
        } else {
            // Terminal sample: the flight is over, no command is issued.
            point.accel = 0.0;
            point.eps_active = traj.empty() ? 0.0 : traj.back().eps_active;
        }
        if (!traj.empty()) {
            const double prev = traj.back().accel;
            energy += 0.5 * (prev * prev + point.accel * point.accel) * dt;
        }
        point.energy = energy;
        if (traj.empty() || point.range < traj[min_index].range) {
            min_index = traj.size();
        }
        traj.push_back(point);
        if (stop != Stop::None) {
            break;
        }

        m = advance_state(m, point.accel, dt, cfg.integrator);
        if (!std::isfinite(m.x) || !std::isfinite(m.y) ||
            !std::isfinite(m.path_angle)) {
            throw NumericError("run_engagement: non-finite state", t);
        }
        const double dx = target.x - m.x;
        const double dy = target.y - m.y;
        const double range = std::hypot(dx, dy);
        if (range <= 0.0) {
            // Dead-center sample: keep the previous sight-line direction.
            rel.range = 0.0;
        } else {
            const double los = continue_angle(rel.los_angle, std::atan2(dy, dx));
            rel.range = range;
            rel.los_angle = los;
            rel.lead_angle = (m.path_angle - los) + lead_offset;
        }
    }

    EngagementMetrics& metrics = record.metrics;
    metrics.intercepted = stop != Stop::Timeout;
    metrics.total_energy = energy;

    // Closest approach around the best recorded sample.
    std::size_t anchor = metrics.intercepted ? traj.size() - 1 : min_index;
    anchor = std::min(std::max<std::size_t>(anchor, 2), traj.size() - 1);
    if (traj.size() >= 3) {
        const auto ca = detail::refine_closest_approach(traj[anchor - 2],
                                                        traj[anchor - 1],
                                                        traj[anchor], dt);
        metrics.miss_distance = ca.distance;
        metrics.impact_time = std::min(ca.t, cfg.t_max);
        metrics.impact_angle = detail::interpolate_path_angle(
            traj[anchor - 2], traj[anchor - 1], traj[anchor], ca.t, dt);
    } else {
        const TrajectoryPoint& last = traj.back();
        metrics.miss_distance = last.range;
        metrics.impact_time = last.t;
        metrics.impact_angle = last.path_angle;
    }

    // Convergence time of the governing error, assessed outside the endgame
    // sphere where the sight line degenerates.
    const double tol = error_tolerance(spec.law);
    std::ptrdiff_t last_bad = -1;
    std::size_t scanned = 0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (traj[i].range <= 10.0 * cfg.hit_radius) {
            break;
        }
        scanned = i + 1;
        if (std::abs(traj[i].eps_active) >= tol) {
            last_bad = static_cast<std::ptrdiff_t>(i);
        }
    }
    if (last_bad + 1 < static_cast<std::ptrdiff_t>(scanned)) {
        metrics.error_convergence_time = traj[static_cast<std::size_t>(last_bad + 1)].t;
    }
    return record;
}

} // namespace fetc
