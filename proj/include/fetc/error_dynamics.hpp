// Free-time convergent error dynamics: a reaching law whose convergence time
// is set directly, independent of the initial error and of the gain, plus its
// closed-form solution and sampled profiles.
#pragma once

#include <cmath>
#include <vector>

#include "fetc/errors.hpp"

namespace fetc {

/// Parameters of the free-time convergent reaching law.
struct FetcParams {
    double gain = 1.0;          ///< K >= 1, dimensionless
    double converge_time = 1.0; ///< T_s > 0, the free convergence time [s]
};

/// Below this remaining time the rate law switches to its post-convergence
/// branch; the exact law is singular at t = T_s while its closed form proves
/// the limit is zero.
inline constexpr double kConvergeTimeGuard = 1e-9;

/// Reaching-law error rate.
///
/// For t <= T_s the rate is -(K / (T_s - t)) * (1 - exp(-eps)); afterwards the
/// error holds at zero and the rate is zero. Total in its inputs: the singular
/// instant t = T_s returns the limit value 0 and, when the error has not
/// actually converged there, reports it through `converge_miss`.
inline double fetc_rate(double eps, double t, const FetcParams& p,
                        bool* converge_miss = nullptr) {
    if (converge_miss != nullptr) {
        *converge_miss = false;
    }
    const double remaining = p.converge_time - t;
    if (remaining < kConvergeTimeGuard) {
        if (converge_miss != nullptr && std::abs(remaining) <= kConvergeTimeGuard &&
            std::abs(eps) > 1e-12) {
            *converge_miss = true;
        }
        return 0.0;
    }
    return -(p.gain / remaining) * (-std::expm1(-eps));
}

/// Closed-form solution of the reaching law.
///
/// eps(t) = ln(C (T_s - t)^K + 1) with C fixed by the initial condition
/// (eps0 at t0). Exactly zero at t = T_s. Valid for t0 < T_s and t <= T_s;
/// later queries are out of the expression's domain (the error simply stays
/// zero there) and throw DomainError.
inline double fetc_closed_form(double eps0, double t0, double t,
                               const FetcParams& p) {
    if (t0 >= p.converge_time) {
        throw DomainError("fetc_closed_form: t0 must precede the convergence time");
    }
    if (t > p.converge_time) {
        throw DomainError("fetc_closed_form: t beyond the convergence time");
    }
    const double c = std::expm1(eps0) / std::pow(p.converge_time - t0, p.gain);
    return std::log1p(c * std::pow(p.converge_time - t, p.gain));
}

/// Time derivative of the closed-form solution.
///
/// Agrees with fetc_rate evaluated on the closed-form error everywhere on
/// [t0, T_s]; zero at t = T_s for K > 1.
inline double fetc_closed_form_rate(double eps0, double t0, double t,
                                    const FetcParams& p) {
    if (t0 >= p.converge_time) {
        throw DomainError("fetc_closed_form_rate: t0 must precede the convergence time");
    }
    if (t > p.converge_time) {
        throw DomainError("fetc_closed_form_rate: t beyond the convergence time");
    }
    const double c = std::expm1(eps0) / std::pow(p.converge_time - t0, p.gain);
    const double remaining = p.converge_time - t;
    return -c * p.gain * std::pow(remaining, p.gain - 1.0) /
           (c * std::pow(remaining, p.gain) + 1.0);
}

/// Sampled reaching trajectory on [t0, T_s].
struct ReachingProfile {
    std::vector<double> times;    ///< sample instants, strictly increasing [s]
    std::vector<double> eps;      ///< error samples
    std::vector<double> eps_rate; ///< error-rate samples
};

/// Sample the closed-form error and rate on [t0, T_s] at spacing dt.
///
/// The final sample lands exactly at T_s, where the error is exactly zero.
inline ReachingProfile reaching_profile(double eps0, double t0,
                                        const FetcParams& p, double dt) {
    if (dt <= 0.0) {
        throw ParameterError("reaching_profile: dt must be positive");
    }
    ReachingProfile profile;
    const double span = p.converge_time - t0;
    const auto steps = static_cast<std::size_t>(std::floor(span / dt));
    profile.times.reserve(steps + 2);
    for (std::size_t i = 0; i <= steps; ++i) {
        const double t = t0 + static_cast<double>(i) * dt;
        if (t > p.converge_time) {
            break;
        }
        profile.times.push_back(t);
    }
    if (profile.times.empty() || profile.times.back() < p.converge_time) {
        profile.times.push_back(p.converge_time);
    }
    profile.eps.reserve(profile.times.size());
    profile.eps_rate.reserve(profile.times.size());
    for (double t : profile.times) {
        profile.eps.push_back(fetc_closed_form(eps0, t0, t, p));
        profile.eps_rate.push_back(fetc_closed_form_rate(eps0, t0, t, p));
    }
    return profile;
}

} // namespace fetc
