// Scenario files, the preset catalog, and run comparison.
//
// Scenario files are flat `key = value` text: dotted keys, `#` comments,
// degrees and explicit unit suffixes at the file boundary, radians inside.
// The documented schema:
//
//   label                                  optional free text
//   missile.x_m, missile.y_m              inertial placement [m], or
//   missile.r0_km, missile.q0_deg         polar placement about the target
//   missile.v_mps                         speed [m/s], required
//   missile.phi0_deg                      initial path angle [deg], required
//   target.x_m, target.y_m                default 0
//   law.name                              PNG | FETCED_LACG | FETCED_IACG |
//                                         FETCED_ITCG | OED_IACG | OED_ITCG
//   law.N, law.K, law.Ts_s,               per-law; keys a law does not use
//   law.phi_d_deg, law.t_d_s              are rejected
//   sim.dt_s, sim.t_max_s, sim.r_hit_m    defaults 0.01, 100, 0.5
//   sim.integrator                        RK4 (default) | Euler
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fetc/angles.hpp"
#include "fetc/csv.hpp"
#include "fetc/errors.hpp"
#include "fetc/simulate.hpp"

namespace fetc {

struct Scenario {
    std::string label;
    MissileState missile;
    TargetState target;
    GuidanceSpec guidance;
    SimConfig sim;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

inline double parse_number(const std::string& key, const std::string& value) {
    std::size_t consumed = 0;
    double out = 0.0;
    try {
        out = std::stod(value, &consumed);
    } catch (const std::exception&) {
        throw SchemaError("key '" + key + "': not a number: '" + value + "'");
    }
    if (consumed != value.size()) {
        throw SchemaError("key '" + key + "': trailing characters in '" + value + "'");
    }
    return out;
}

class KeyMap {
  public:
    explicit KeyMap(std::map<std::string, std::string> entries)
        : entries_(std::move(entries)) {}

    std::optional<std::string> take(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) {
            return std::nullopt;
        }
        std::string value = it->second;
        entries_.erase(it);
        return value;
    }

    std::optional<double> take_number(const std::string& key) {
        auto raw = take(key);
        if (!raw) {
            return std::nullopt;
        }
        return parse_number(key, *raw);
    }

    double require_number(const std::string& key) {
        auto value = take_number(key);
        if (!value) {
            throw SchemaError("missing required key '" + key + "'");
        }
        return *value;
    }

    void reject_leftovers() const {
        if (!entries_.empty()) {
            throw SchemaError("unknown key '" + entries_.begin()->first + "'");
        }
    }

  private:
    std::map<std::string, std::string> entries_;
};

inline void forbid(KeyMap& keys, const std::string& key, const std::string& law) {
    if (keys.take(key)) {
        throw SchemaError("key '" + key + "' is not used by law " + law);
    }
}

} // namespace detail

/// Parse scenario text against the documented schema. `context` names the
/// source (file path) in error messages.
inline Scenario parse_scenario(const std::string& text, const std::string& context) {
    std::map<std::string, std::string> entries;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = detail::trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw SchemaError(context + ": expected 'key = value', got '" + line + "'");
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw SchemaError(context + ": empty key or value in '" + line + "'");
        }
        if (!entries.emplace(key, value).second) {
            throw SchemaError(context + ": duplicate key '" + key + "'");
        }
    }

    detail::KeyMap keys(std::move(entries));
    Scenario s;
    try {
        s.label = keys.take("label").value_or("");

        // Missile placement: exactly one of inertial or polar.
        const auto x = keys.take_number("missile.x_m");
        const auto y = keys.take_number("missile.y_m");
        const auto r0_km = keys.take_number("missile.r0_km");
        const auto q0_deg = keys.take_number("missile.q0_deg");
        s.target.x = keys.take_number("target.x_m").value_or(0.0);
        s.target.y = keys.take_number("target.y_m").value_or(0.0);
        const bool inertial = x.has_value() || y.has_value();
        const bool polar = r0_km.has_value() || q0_deg.has_value();
        if (inertial == polar) {
            throw SchemaError("provide either missile.x_m/y_m or missile.r0_km/q0_deg");
        }
        if (inertial) {
            if (!x || !y) {
                throw SchemaError("missile.x_m and missile.y_m must appear together");
            }
            s.missile.x = *x;
            s.missile.y = *y;
        } else {
            if (!r0_km || !q0_deg) {
                throw SchemaError("missile.r0_km and missile.q0_deg must appear together");
            }
            if (*r0_km <= 0.0) {
                throw SchemaError("key 'missile.r0_km' must be positive");
            }
            const double r0 = *r0_km * 1000.0;
            const double q0 = *q0_deg * deg_to_rad;
            s.missile.x = s.target.x - r0 * std::cos(q0);
            s.missile.y = s.target.y - r0 * std::sin(q0);
        }
        s.missile.speed = keys.require_number("missile.v_mps");
        if (s.missile.speed <= 0.0) {
            throw SchemaError("key 'missile.v_mps' must be positive");
        }
        s.missile.path_angle = keys.require_number("missile.phi0_deg") * deg_to_rad;

        const auto law_name = keys.take("law.name");
        if (!law_name) {
            throw SchemaError("missing required key 'law.name'");
        }
        GuidanceSpec& g = s.guidance;
        g.law = law_from_string(*law_name);
        const std::string name = *law_name;
        const bool fetced = uses_converge_time(g.law);
        const bool iacg = g.law == GuidanceLaw::FetcedIacg || g.law == GuidanceLaw::OedIacg;
        const bool itcg = g.law == GuidanceLaw::FetcedItcg || g.law == GuidanceLaw::OedItcg;

        if (g.law == GuidanceLaw::FetcedLacg) {
            detail::forbid(keys, "law.N", name);
        } else {
            g.nav_ratio = keys.require_number("law.N");
            if (iacg || itcg) {
                if (g.nav_ratio <= 1.0) {
                    throw SchemaError("key 'law.N' must exceed 1 for law " + name);
                }
            } else if (g.nav_ratio <= 0.0) {
                throw SchemaError("key 'law.N' must be positive");
            }
        }
        if (g.law == GuidanceLaw::Png) {
            detail::forbid(keys, "law.K", name);
        } else {
            g.gain = keys.require_number("law.K");
            if (g.gain < 1.0 || (g.law == GuidanceLaw::FetcedLacg && g.gain <= 1.0)) {
                throw SchemaError("key 'law.K' out of range for law " + name);
            }
        }
        if (fetced) {
            const double ts = keys.require_number("law.Ts_s");
            if (ts <= 0.0) {
                throw SchemaError("key 'law.Ts_s' must be positive");
            }
            g.converge_time = ts;
        } else {
            detail::forbid(keys, "law.Ts_s", name);
        }
        if (iacg) {
            g.impact_angle_d = keys.require_number("law.phi_d_deg") * deg_to_rad;
        } else {
            detail::forbid(keys, "law.phi_d_deg", name);
        }
        if (itcg) {
            g.impact_time_d = keys.require_number("law.t_d_s");
        } else {
            detail::forbid(keys, "law.t_d_s", name);
        }

        s.sim.dt = keys.take_number("sim.dt_s").value_or(0.01);
        s.sim.t_max = keys.take_number("sim.t_max_s").value_or(100.0);
        s.sim.hit_radius = keys.take_number("sim.r_hit_m").value_or(0.5);
        if (s.sim.dt <= 0.0 || s.sim.t_max <= 0.0 || s.sim.hit_radius <= 0.0) {
            throw SchemaError("sim.dt_s, sim.t_max_s and sim.r_hit_m must be positive");
        }
        if (auto scheme = keys.take("sim.integrator")) {
            if (*scheme == "RK4") {
                s.sim.integrator = Integrator::Rk4;
            } else if (*scheme == "Euler") {
                s.sim.integrator = Integrator::Euler;
            } else {
                throw SchemaError("key 'sim.integrator' must be RK4 or Euler");
            }
        }
        keys.reject_leftovers();
        validate(g);
    } catch (const SchemaError& err) {
        throw SchemaError(context + ": " + err.what());
    } catch (const ParameterError& err) {
        throw SchemaError(context + ": " + err.what());
    }
    return s;
}

inline Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) {
        throw IoError("cannot read scenario file: " + path.string());
    }
    std::ostringstream text;
    text << stream.rdbuf();
    return parse_scenario(text.str(), path.string());
}

namespace detail {

inline std::string format_exact(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace detail

/// Emit a scenario in the file schema (inertial placement, degrees at the
/// boundary). Loading the result reproduces the scenario.
inline std::string serialize_scenario(const Scenario& s) {
    std::string out;
    auto put = [&out](const std::string& key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };
    if (!s.label.empty()) {
        put("label", s.label);
    }
    put("missile.x_m", detail::format_exact(s.missile.x));
    put("missile.y_m", detail::format_exact(s.missile.y));
    put("missile.v_mps", detail::format_exact(s.missile.speed));
    put("missile.phi0_deg", detail::format_exact(s.missile.path_angle * rad_to_deg));
    put("target.x_m", detail::format_exact(s.target.x));
    put("target.y_m", detail::format_exact(s.target.y));
    put("law.name", to_string(s.guidance.law));
    if (s.guidance.law != GuidanceLaw::FetcedLacg) {
        put("law.N", detail::format_exact(s.guidance.nav_ratio));
    }
    if (s.guidance.law != GuidanceLaw::Png) {
        put("law.K", detail::format_exact(s.guidance.gain));
    }
    if (s.guidance.converge_time) {
        put("law.Ts_s", detail::format_exact(*s.guidance.converge_time));
    }
    if (s.guidance.impact_angle_d) {
        put("law.phi_d_deg", detail::format_exact(*s.guidance.impact_angle_d * rad_to_deg));
    }
    if (s.guidance.impact_time_d) {
        put("law.t_d_s", detail::format_exact(*s.guidance.impact_time_d));
    }
    put("sim.dt_s", detail::format_exact(s.sim.dt));
    put("sim.t_max_s", detail::format_exact(s.sim.t_max));
    put("sim.r_hit_m", detail::format_exact(s.sim.hit_radius));
    put("sim.integrator", s.sim.integrator == Integrator::Rk4 ? "RK4" : "Euler");
    return out;
}

// ---------------------------------------------------------------------------
// Preset catalog: three comparison sets on the common engagement geometry
// (20 km initial range, -45 deg line of sight, 500 m/s, level initial flight).
// ---------------------------------------------------------------------------

namespace detail {

inline Scenario preset_base(std::string label) {
    Scenario s;
    s.label = std::move(label);
    const double r0 = 20000.0;
    const double q0 = -45.0 * deg_to_rad;
    s.missile.x = -r0 * std::cos(q0);
    s.missile.y = -r0 * std::sin(q0);
    s.missile.speed = 500.0;
    s.missile.path_angle = 0.0;
    return s;
}

} // namespace detail

/// Preset group `table`:
///   1 — lead-angle control (K = 3, T_s in {20, 30, 40} s) against PNG (N = 4);
///   2 — impact-angle control (N = 4, K = 3, same T_s sweep, -90 deg desired)
///       against the optimal-error-dynamics baseline;
///   3 — impact-time control (N = 4, K = 5, same T_s sweep, 45 s desired)
///       against the optimal-error-dynamics baseline.
inline std::vector<Scenario> preset_table(int table) {
    std::vector<Scenario> list;
    const double sweep[] = {20.0, 30.0, 40.0};
    switch (table) {
    case 1:
        for (double ts : sweep) {
            Scenario s = detail::preset_base("lacg_Ts" + std::to_string(static_cast<int>(ts)));
            s.guidance.law = GuidanceLaw::FetcedLacg;
            s.guidance.gain = 3.0;
            s.guidance.converge_time = ts;
            list.push_back(std::move(s));
        }
        {
            Scenario s = detail::preset_base("png_N4");
            s.guidance.law = GuidanceLaw::Png;
            s.guidance.nav_ratio = 4.0;
            list.push_back(std::move(s));
        }
        break;
    case 2:
        for (double ts : sweep) {
            Scenario s = detail::preset_base("iacg_Ts" + std::to_string(static_cast<int>(ts)));
            s.guidance.law = GuidanceLaw::FetcedIacg;
            s.guidance.nav_ratio = 4.0;
            s.guidance.gain = 3.0;
            s.guidance.converge_time = ts;
            s.guidance.impact_angle_d = -90.0 * deg_to_rad;
            list.push_back(std::move(s));
        }
        {
            Scenario s = detail::preset_base("oed_iacg");
            s.guidance.law = GuidanceLaw::OedIacg;
            s.guidance.nav_ratio = 4.0;
            s.guidance.gain = 3.0;
            s.guidance.impact_angle_d = -90.0 * deg_to_rad;
            list.push_back(std::move(s));
        }
        break;
    case 3:
        for (double ts : sweep) {
            Scenario s = detail::preset_base("itcg_Ts" + std::to_string(static_cast<int>(ts)));
            s.guidance.law = GuidanceLaw::FetcedItcg;
            s.guidance.nav_ratio = 4.0;
            s.guidance.gain = 5.0;
            s.guidance.converge_time = ts;
            s.guidance.impact_time_d = 45.0;
            list.push_back(std::move(s));
        }
        {
            Scenario s = detail::preset_base("oed_itcg");
            s.guidance.law = GuidanceLaw::OedItcg;
            s.guidance.nav_ratio = 4.0;
            s.guidance.gain = 5.0;
            s.guidance.impact_time_d = 45.0;
            list.push_back(std::move(s));
        }
        break;
    default:
        throw ParameterError("preset_table: table must be 1, 2 or 3");
    }
    return list;
}

/// All twelve presets, tables 1 through 3 in order.
inline std::vector<Scenario> preset_catalog() {
    std::vector<Scenario> all;
    for (int table = 1; table <= 3; ++table) {
        auto part = preset_table(table);
        all.insert(all.end(), part.begin(), part.end());
    }
    return all;
}

inline EngagementRecord run_scenario(const Scenario& s) {
    return run_engagement(s.missile, s.target, s.guidance, s.sim);
}

// ---------------------------------------------------------------------------
// Energy comparison across runs of one scenario geometry
// ---------------------------------------------------------------------------

struct RunSummary {
    Scenario scenario;
    EngagementMetrics metrics;
};

struct EnergyComparison {
    /// Run indices sorted by ascending total energy.
    std::vector<std::size_t> ascending;
    /// Within the free-time members, energy strictly decreases as the
    /// convergence time grows (vacuously true below two members).
    bool fetc_energy_decreases_with_converge_time = true;
    /// Every baseline (no convergence time) run costs less than every
    /// free-time run (vacuously true when either side is empty).
    bool baseline_minimal = true;
};

/// Metrics rows for a batch of runs, input order preserved. Unused law
/// parameters stay empty.
inline std::string run_report_csv(const std::vector<RunSummary>& runs) {
    std::string out =
        "label,law,N,K,Ts_s,phi_d_deg,t_d_s,miss_m,impact_time_s,"
        "impact_angle_deg,energy,converge_time_s,intercepted\n";
    for (const RunSummary& run : runs) {
        const GuidanceSpec& g = run.scenario.guidance;
        out += run.scenario.label;
        out += ',';
        out += to_string(g.law);
        out += ',';
        if (g.law != GuidanceLaw::FetcedLacg) {
            out += format_value(g.nav_ratio);
        }
        out += ',';
        if (g.law != GuidanceLaw::Png) {
            out += format_value(g.gain);
        }
        out += ',';
        if (g.converge_time) {
            out += format_value(*g.converge_time);
        }
        out += ',';
        if (g.impact_angle_d) {
            out += format_value(*g.impact_angle_d * rad_to_deg);
        }
        out += ',';
        if (g.impact_time_d) {
            out += format_value(*g.impact_time_d);
        }
        out += ',';
        out += format_value(run.metrics.miss_distance);
        out += ',';
        out += format_value(run.metrics.impact_time);
        out += ',';
        out += format_value(run.metrics.impact_angle * rad_to_deg);
        out += ',';
        out += format_value(run.metrics.total_energy);
        out += ',';
        out += format_value(run.metrics.error_convergence_time);
        out += ',';
        out += run.metrics.intercepted ? '1' : '0';
        out += '\n';
    }
    return out;
}

/// Compare total control effort across runs that share a scenario geometry
/// and differ only in the law or its convergence time.
inline EnergyComparison compare_energy(const std::vector<RunSummary>& runs) {
    if (runs.size() < 2) {
        throw ComparisonError("compare_energy: need at least two runs");
    }
    const Scenario& ref = runs.front().scenario;
    for (const RunSummary& run : runs) {
        const Scenario& s = run.scenario;
        const bool same = s.missile.x == ref.missile.x && s.missile.y == ref.missile.y &&
                          s.missile.speed == ref.missile.speed &&
                          s.missile.path_angle == ref.missile.path_angle &&
                          s.target.x == ref.target.x && s.target.y == ref.target.y &&
                          s.sim.dt == ref.sim.dt && s.sim.t_max == ref.sim.t_max &&
                          s.sim.hit_radius == ref.sim.hit_radius &&
                          s.sim.integrator == ref.sim.integrator;
        if (!same) {
            throw ComparisonError("compare_energy: runs use different scenario geometry");
        }
    }

    EnergyComparison out;
    out.ascending.resize(runs.size());
    std::iota(out.ascending.begin(), out.ascending.end(), std::size_t{0});
    std::stable_sort(out.ascending.begin(), out.ascending.end(),
                     [&runs](std::size_t a, std::size_t b) {
                         return runs[a].metrics.total_energy < runs[b].metrics.total_energy;
                     });

    std::vector<const RunSummary*> fetc;
    double min_fetc = std::numeric_limits<double>::infinity();
    for (const RunSummary& run : runs) {
        if (run.scenario.guidance.converge_time) {
            fetc.push_back(&run);
            min_fetc = std::min(min_fetc, run.metrics.total_energy);
        }
    }
    std::stable_sort(fetc.begin(), fetc.end(), [](const RunSummary* a, const RunSummary* b) {
        return *a->scenario.guidance.converge_time < *b->scenario.guidance.converge_time;
    });
    for (std::size_t i = 1; i < fetc.size(); ++i) {
        if (fetc[i]->metrics.total_energy >= fetc[i - 1]->metrics.total_energy) {
            out.fetc_energy_decreases_with_converge_time = false;
        }
    }
    for (const RunSummary& run : runs) {
        if (!run.scenario.guidance.converge_time && !fetc.empty() &&
            run.metrics.total_energy >= min_fetc) {
            out.baseline_minimal = false;
        }
    }
    return out;
}

} // namespace fetc
