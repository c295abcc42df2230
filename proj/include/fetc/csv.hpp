// CSV emission. Scientific notation with nine fractional digits everywhere so
// written values parse back to within 1e-9 relative; byte output is
// deterministic for identical inputs.
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "fetc/angles.hpp"
#include "fetc/error_dynamics.hpp"
#include "fetc/errors.hpp"
#include "fetc/simulate.hpp"

namespace fetc {

inline std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9e", v);
    return buf;
}

inline std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t,x,y,r,q_deg,phi_deg,theta_deg,a_m,eps,energy\n";
    for (const TrajectoryPoint& p : traj) {
        out += format_value(p.t);
        out += ',';
        out += format_value(p.x);
        out += ',';
        out += format_value(p.y);
        out += ',';
        out += format_value(p.range);
        out += ',';
        out += format_value(p.los_angle * rad_to_deg);
        out += ',';
        out += format_value(p.path_angle * rad_to_deg);
        out += ',';
        out += format_value(p.lead_angle * rad_to_deg);
        out += ',';
        out += format_value(p.accel);
        out += ',';
        out += format_value(p.eps_active);
        out += ',';
        out += format_value(p.energy);
        out += '\n';
    }
    return out;
}

inline std::string profile_csv(const ReachingProfile& profile) {
    std::string out = "t,eps,eps_dot\n";
    for (std::size_t i = 0; i < profile.times.size(); ++i) {
        out += format_value(profile.times[i]);
        out += ',';
        out += format_value(profile.eps[i]);
        out += ',';
        out += format_value(profile.eps_rate[i]);
        out += '\n';
    }
    return out;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream stream(path, std::ios::binary);
    if (!stream) {
        throw IoError("cannot open for writing: " + path.string());
    }
    stream << text;
    if (!stream) {
        throw IoError("write failed: " + path.string());
    }
}

inline void write_trajectory_csv(const Trajectory& traj,
                                 const std::filesystem::path& path) {
    write_file(path, trajectory_csv(traj));
}

inline void write_profile_csv(const ReachingProfile& profile,
                              const std::filesystem::path& path) {
    write_file(path, profile_csv(profile));
}

} // namespace fetc
