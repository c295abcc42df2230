#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fetc/csv.hpp"
#include "fetc/scenario.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace fetc;

namespace {

const std::string kNominalText =
    "# nominal engagement\n"
    "label = nominal\n"
    "missile.r0_km = 20\n"
    "missile.q0_deg = -45\n"
    "missile.v_mps = 500\n"
    "missile.phi0_deg = 0\n"
    "target.x_m = 0\n"
    "target.y_m = 0\n"
    "law.name = FETCED_IACG\n"
    "law.N = 4\n"
    "law.K = 3\n"
    "law.Ts_s = 20\n"
    "law.phi_d_deg = -90\n"
    "sim.dt_s = 0.01\n"
    "sim.t_max_s = 100\n"
    "sim.r_hit_m = 0.5\n"
    "sim.integrator = RK4\n";

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream stream(text);
    std::string line;
    while (std::getline(stream, line)) {
        lines.push_back(line);
    }
    return lines;
}

std::vector<double> parse_csv_row(const std::string& line) {
    std::vector<double> values;
    std::istringstream stream(line);
    std::string cell;
    while (std::getline(stream, cell, ',')) {
        values.push_back(std::strtod(cell.c_str(), nullptr));
    }
    return values;
}

} // namespace

TEST_CASE("scenario parsing") {
    SECTION("polar placement resolves against the target") {
        const Scenario s = parse_scenario(kNominalText, "test");
        REQUIRE_THAT(s.missile.x, WithinAbs(-14142.135623730951, 1e-6));
        REQUIRE_THAT(s.missile.y, WithinAbs(14142.13562373095, 1e-6));
        REQUIRE(s.missile.path_angle == 0.0);
        REQUIRE(s.missile.speed == 500.0);
        REQUIRE(s.guidance.law == GuidanceLaw::FetcedIacg);
        REQUIRE(*s.guidance.converge_time == 20.0);
        REQUIRE_THAT(*s.guidance.impact_angle_d, WithinAbs(-std::numbers::pi / 2, 1e-12));
        REQUIRE(s.sim.integrator == Integrator::Rk4);
    }
    SECTION("missing required law parameter") {
        const std::string text =
            "missile.r0_km = 20\nmissile.q0_deg = -45\nmissile.v_mps = 500\n"
            "missile.phi0_deg = 0\nlaw.name = FETCED_ITCG\nlaw.N = 4\nlaw.K = 5\n"
            "law.Ts_s = 30\n";
        REQUIRE_THROWS_WITH(parse_scenario(text, "test"),
                            Catch::Matchers::ContainsSubstring("law.t_d_s"));
    }
    SECTION("navigation ratio bound is checked per law") {
        std::string text = kNominalText;
        const auto pos = text.find("law.N = 4");
        text.replace(pos, 9, "law.N = 1");
        REQUIRE_THROWS_WITH(parse_scenario(text, "test"),
                            Catch::Matchers::ContainsSubstring("law.N"));
    }
    SECTION("unknown keys are named") {
        REQUIRE_THROWS_WITH(parse_scenario(kNominalText + "law.M = 2\n", "test"),
                            Catch::Matchers::ContainsSubstring("law.M"));
    }
    SECTION("keys a law does not use are rejected") {
        const std::string text =
            "missile.x_m = -1000\nmissile.y_m = 0\nmissile.v_mps = 500\n"
            "missile.phi0_deg = 0\nlaw.name = PNG\nlaw.N = 4\nlaw.Ts_s = 20\n";
        REQUIRE_THROWS_WITH(parse_scenario(text, "test"),
                            Catch::Matchers::ContainsSubstring("law.Ts_s"));
    }
    SECTION("duplicate keys are rejected") {
        REQUIRE_THROWS_AS(parse_scenario(kNominalText + "missile.v_mps = 400\n", "test"),
                          SchemaError);
    }
    SECTION("exactly one placement form") {
        REQUIRE_THROWS_AS(parse_scenario(kNominalText + "missile.x_m = -1\nmissile.y_m = 0\n",
                                         "test"),
                          SchemaError);
        const std::string no_placement =
            "missile.v_mps = 500\nmissile.phi0_deg = 0\nlaw.name = PNG\nlaw.N = 4\n";
        REQUIRE_THROWS_AS(parse_scenario(no_placement, "test"), SchemaError);
    }
    SECTION("integrator spelling") {
        std::string text = kNominalText;
        const auto pos = text.find("sim.integrator = RK4");
        text.replace(pos, 20, "sim.integrator = Euler");
        REQUIRE(parse_scenario(text, "test").sim.integrator == Integrator::Euler);
        text.replace(text.find("sim.integrator = Euler"), 22, "sim.integrator = rk4  ");
        REQUIRE_THROWS_AS(parse_scenario(text, "test"), SchemaError);
    }
    SECTION("missing file") {
        REQUIRE_THROWS_AS(load_scenario("no_such_scenario_file.cfg"), IoError);
    }
}

TEST_CASE("preset catalog") {
    const std::vector<Scenario> all = preset_catalog();
    REQUIRE(all.size() == 12);

    const std::vector<Scenario> lead = preset_table(1);
    REQUIRE(lead.size() == 4);
    REQUIRE(lead[0].guidance.law == GuidanceLaw::FetcedLacg);
    REQUIRE(lead[0].guidance.gain == 3.0);
    REQUIRE(*lead[0].guidance.converge_time == 20.0);
    REQUIRE(lead[3].guidance.law == GuidanceLaw::Png);
    REQUIRE(lead[3].guidance.nav_ratio == 4.0);
    REQUIRE_FALSE(lead[3].guidance.converge_time.has_value());

    const std::vector<Scenario> angle = preset_table(2);
    REQUIRE(angle[1].guidance.law == GuidanceLaw::FetcedIacg);
    REQUIRE(*angle[1].guidance.converge_time == 30.0);
    REQUIRE_THAT(*angle[1].guidance.impact_angle_d,
                 WithinAbs(-std::numbers::pi / 2, 1e-12));
    REQUIRE(angle[3].guidance.law == GuidanceLaw::OedIacg);

    const std::vector<Scenario> timed = preset_table(3);
    REQUIRE(timed[0].guidance.law == GuidanceLaw::FetcedItcg);
    REQUIRE(timed[0].guidance.nav_ratio == 4.0);
    REQUIRE(timed[0].guidance.gain == 5.0);
    REQUIRE(*timed[0].guidance.impact_time_d == 45.0);
    REQUIRE(timed[3].guidance.law == GuidanceLaw::OedItcg);

    // every preset shares the nominal geometry
    for (const Scenario& s : all) {
        const RelativeState rel = relative_from_inertial(s.missile, s.target);
        REQUIRE_THAT(rel.range, WithinRel(20000.0, 1e-12));
        REQUIRE_THAT(rel.los_angle, WithinAbs(-45.0 * deg_to_rad, 1e-12));
        REQUIRE(s.sim.dt == 0.01);
    }
    REQUIRE_THROWS_AS(preset_table(4), ParameterError);
}

TEST_CASE("presets round-trip through serialization") {
    for (const Scenario& s : preset_catalog()) {
        const Scenario back = parse_scenario(serialize_scenario(s), s.label);
        REQUIRE(back.label == s.label);
        REQUIRE_THAT(back.missile.x, WithinRel(s.missile.x, 1e-13));
        REQUIRE_THAT(back.missile.y, WithinRel(s.missile.y, 1e-13));
        REQUIRE(back.missile.speed == s.missile.speed);
        REQUIRE_THAT(back.missile.path_angle, WithinAbs(s.missile.path_angle, 1e-15));
        REQUIRE(back.target.x == s.target.x);
        REQUIRE(back.target.y == s.target.y);
        REQUIRE(back.guidance.law == s.guidance.law);
        REQUIRE(back.guidance.nav_ratio == s.guidance.nav_ratio);
        REQUIRE(back.guidance.gain == s.guidance.gain);
        REQUIRE(back.guidance.converge_time == s.guidance.converge_time);
        REQUIRE(back.guidance.impact_time_d == s.guidance.impact_time_d);
        if (s.guidance.impact_angle_d) {
            REQUIRE_THAT(*back.guidance.impact_angle_d,
                         WithinRel(*s.guidance.impact_angle_d, 1e-13));
        } else {
            REQUIRE_FALSE(back.guidance.impact_angle_d.has_value());
        }
        REQUIRE(back.sim.dt == s.sim.dt);
        REQUIRE(back.sim.t_max == s.sim.t_max);
        REQUIRE(back.sim.hit_radius == s.sim.hit_radius);
        REQUIRE(back.sim.integrator == s.sim.integrator);
    }
}

TEST_CASE("trajectory CSV") {
    SECTION("empty trajectory is a bare header") {
        REQUIRE(trajectory_csv({}) == "t,x,y,r,q_deg,phi_deg,theta_deg,a_m,eps,energy\n");
    }
    SECTION("one line per sample plus the header") {
        Trajectory traj(3);
        traj[0].t = 0.0;
        traj[1].t = 0.01;
        traj[2].t = 0.02;
        REQUIRE(split_lines(trajectory_csv(traj)).size() == 4);
    }
    SECTION("written values parse back to 1e-9 relative") {
        Scenario s;
        s.missile = MissileState{-1500.0, 733.0, 500.0, -0.3};
        s.guidance.law = GuidanceLaw::Png;
        s.guidance.nav_ratio = 4.0;
        const EngagementRecord record = run_scenario(s);
        const auto lines = split_lines(trajectory_csv(record.trajectory));
        REQUIRE(lines.size() == record.trajectory.size() + 1);
        for (std::size_t i = 1; i < lines.size(); ++i) {
            const TrajectoryPoint& p = record.trajectory[i - 1];
            const std::vector<double> row = parse_csv_row(lines[i]);
            REQUIRE(row.size() == 10);
            const double expected[10] = {
                p.t,       p.x,
                p.y,       p.range,
                p.los_angle * rad_to_deg, p.path_angle * rad_to_deg,
                p.lead_angle * rad_to_deg, p.accel,
                p.eps_active, p.energy};
            for (int c = 0; c < 10; ++c) {
                if (expected[c] == 0.0) {
                    REQUIRE_THAT(row[c], WithinAbs(0.0, 1e-12));
                } else {
                    REQUIRE_THAT(row[c], WithinRel(expected[c], 1e-9));
                }
            }
        }
    }
}

TEST_CASE("profile CSV matches the closed form") {
    const FetcParams p{4.0, 40.0};
    const ReachingProfile profile = reaching_profile(3.0, 0.0, p, 1.0);
    const auto lines = split_lines(profile_csv(profile));
    REQUIRE(lines[0] == "t,eps,eps_dot");
    REQUIRE(lines.size() == profile.times.size() + 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::vector<double> row = parse_csv_row(lines[i]);
        REQUIRE(std::abs(row[1] - fetc_closed_form(3.0, 0.0, row[0], p)) <= 1e-6);
        REQUIRE(std::abs(row[2] - fetc_closed_form_rate(3.0, 0.0, row[0], p)) <= 1e-6);
    }
}

TEST_CASE("reports are byte-deterministic") {
    auto build = []() {
        std::vector<RunSummary> runs;
        std::string trajectories;
        for (const Scenario& s : preset_table(1)) {
            const EngagementRecord record = run_scenario(s);
            runs.push_back(RunSummary{s, record.metrics});
            trajectories += trajectory_csv(record.trajectory);
        }
        return std::pair{run_report_csv(runs), trajectories};
    };
    const auto first = build();
    const auto second = build();
    REQUIRE(first.first == second.first);
    REQUIRE(first.second == second.second);
    REQUIRE(split_lines(first.first).size() == 5);
}
