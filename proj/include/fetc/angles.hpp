// Angle conventions: radians everywhere inside the library, degrees only at
// file boundaries. Headings are stored unwrapped; wrapping happens once at
// construction of a relative state and never per-step.
#pragma once

#include <cmath>
#include <numbers>

namespace fetc {

inline constexpr double deg_to_rad = std::numbers::pi / 180.0;
inline constexpr double rad_to_deg = 180.0 / std::numbers::pi;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Wrap an angle into (-pi, pi].
inline double wrap_pi(double angle) {
    double w = std::remainder(angle, two_pi);
    if (w <= -std::numbers::pi) {
        w += two_pi;
    }
    return w;
}

/// Pick the 2*pi branch of `wrapped` closest to `previous`.
///
/// Keeps a propagated angle continuous across the +-pi seam; the shift is an
/// exact multiple of 2*pi so wrapped comparisons are unaffected.
inline double continue_angle(double previous, double wrapped) {
    return wrapped + two_pi * std::round((previous - wrapped) / two_pi);
}

} // namespace fetc
