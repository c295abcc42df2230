// fetcsim: run engagements, preset comparison sets, reaching-law profiles and
// the acceptance suite from the command line.
//
// Exit codes: 0 success, 1 failed expectations, 2 usage or schema errors.
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fetc/acceptance.hpp"
#include "fetc/csv.hpp"
#include "fetc/scenario.hpp"

namespace fs = std::filesystem;

namespace {

void ensure_directory(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw fetc::IoError("cannot create output directory: " + dir.string());
    }
}

std::string safe_label(const fetc::Scenario& scenario) {
    return scenario.label.empty() ? std::string("engagement") : scenario.label;
}

int cmd_run(const std::string& scenario_path, const fs::path& out_dir) {
    const fetc::Scenario scenario = fetc::load_scenario(scenario_path);
    ensure_directory(out_dir);
    const fetc::EngagementRecord record = fetc::run_scenario(scenario);
    fetc::write_trajectory_csv(record.trajectory, out_dir / "trajectory.csv");
    const std::vector<fetc::RunSummary> runs{{scenario, record.metrics}};
    fetc::write_file(out_dir / "metrics.csv", fetc::run_report_csv(runs));

    const fetc::EngagementMetrics& m = record.metrics;
    std::cout << safe_label(scenario) << ": "
              << (m.intercepted ? "intercept" : "NO intercept") << ", miss "
              << m.miss_distance << " m, impact " << m.impact_time << " s, angle "
              << m.impact_angle * fetc::rad_to_deg << " deg, energy "
              << m.total_energy << "\n";
    return m.intercepted ? 0 : 1;
}

int cmd_presets(int table, const fs::path& out_dir) {
    ensure_directory(out_dir);
    const fetc::acceptance::TableRuns runs = fetc::acceptance::run_table(table);
    for (std::size_t i = 0; i < runs.runs.size(); ++i) {
        const std::string label = safe_label(runs.runs[i].scenario);
        fetc::write_trajectory_csv(runs.records[i].trajectory,
                                   out_dir / (label + "_trajectory.csv"));
        const fetc::EngagementMetrics& m = runs.runs[i].metrics;
        std::cout << label << ": miss " << m.miss_distance << " m, impact "
                  << m.impact_time << " s, angle "
                  << m.impact_angle * fetc::rad_to_deg << " deg, energy "
                  << m.total_energy << "\n";
    }
    fetc::write_file(out_dir / "report.csv", fetc::run_report_csv(runs.runs));

    const fetc::CheckResult verdict = fetc::acceptance::evaluate_table(table, runs);
    std::cout << (verdict.passed ? "[PASS] " : "[FAIL] ") << verdict.name << ": "
              << verdict.detail << "\n";
    return verdict.passed ? 0 : 1;
}

int cmd_profile(double eps0, double gain, double converge_time, double t0,
                double dt, const fs::path& out_dir) {
    const fetc::FetcParams params{gain, converge_time};
    const fetc::ReachingProfile profile = fetc::reaching_profile(eps0, t0, params, dt);
    ensure_directory(out_dir);
    const fs::path file = out_dir / "profile.csv";
    fetc::write_profile_csv(profile, file);
    std::cout << "wrote " << profile.times.size() << " samples to " << file.string()
              << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Free-time convergent guidance laws and planar engagement simulator"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir;
    auto* run = app.add_subcommand("run", "run one engagement from a scenario file");
    run->add_option("--scenario", scenario_path, "scenario file")->required();
    run->add_option("--out", out_dir, "output directory")->required();

    int table = 0;
    std::string presets_out;
    auto* presets =
        app.add_subcommand("presets", "run a preset comparison set and its report");
    presets->add_option("--table", table, "preset table (1, 2 or 3)")
        ->required()
        ->check(CLI::Range(1, 3));
    presets->add_option("--out", presets_out, "output directory")->required();

    double eps0 = 3.0;
    double gain = 4.0;
    double converge_time = 40.0;
    double t0 = 0.0;
    double dt = 0.01;
    std::string profile_out;
    auto* profile =
        app.add_subcommand("profile", "sample a reaching-law profile to CSV");
    profile->add_option("--eps0", eps0, "initial error")->required();
    profile->add_option("--K", gain, "reaching-law gain")->required();
    profile->add_option("--Ts", converge_time, "free convergence time [s]")->required();
    profile->add_option("--t0", t0, "initial time [s]");
    profile->add_option("--dt", dt, "sample spacing [s]");
    profile->add_option("--out", profile_out, "output directory")->required();

    auto* check = app.add_subcommand("check", "run the acceptance suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) {
            return cmd_run(scenario_path, fs::path(out_dir));
        }
        if (presets->parsed()) {
            return cmd_presets(table, presets_out);
        }
        if (profile->parsed()) {
            return cmd_profile(eps0, gain, converge_time, t0, dt, profile_out);
        }
        if (check->parsed()) {
            const int failures = fetc::print_acceptance_report(std::cout);
            return failures == 0 ? 0 : 1;
        }
    } catch (const fetc::SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 2;
    } catch (const fetc::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const fetc::ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 2;
    } catch (const fetc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
