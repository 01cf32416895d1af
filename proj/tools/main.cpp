// Command-line front end: scenario simulation, single solves, spectrum
// export, and Monte-Carlo benchmark sweeps driven by a JSON run config.
// Exit codes: 0 success, 2 config error, 3 numerical failure, 4 I/O error.

#include "CLI11.hpp"
#include "json.hpp"

#include "lrsd/bench.hpp"
#include "lrsd/decomposer.hpp"
#include "lrsd/detector.hpp"
#include "lrsd/doa.hpp"
#include "lrsd/io_util.hpp"
#include "lrsd/refine.hpp"
#include "lrsd/run_config.hpp"
#include "lrsd/scenario_io.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using lrsd::RunConfig;

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw lrsd::IoError("cannot open output file: " + path);
    }
    return out;
}

struct CommonFlags {
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<int> workers;
};

/// flag > file > default
void apply_overrides(RunConfig& config, const CommonFlags& flags) {
    if (flags.seed) {
        config.array.seed = *flags.seed;
        config.bench.master_seed = *flags.seed;
    }
    if (flags.trials) {
        config.bench.num_trials = *flags.trials;
    }
    if (flags.workers) {
        config.bench.workers = *flags.workers;
    }
}

int cmd_simulate(const std::string& config_path, const std::string& out_path,
                 const CommonFlags& flags) {
    RunConfig config = lrsd::parse_run_config_file(config_path);
    apply_overrides(config, flags);
    config.validate();

    const lrsd::ArrayScenario scenario = lrsd::generate_scenario(config.array);
    lrsd::write_scenario_file(out_path, scenario);
    lrsd::write_run_config(std::cout, config);
    std::cerr << "wrote " << out_path << "\n";
    return 0;
}

int cmd_solve(const std::string& config_path, const std::string& scenario_path,
              const std::string& out_path, std::string trace_path, const CommonFlags& flags) {
    if (config_path.empty() == scenario_path.empty()) {
        throw lrsd::ConfigError("solve: exactly one of --config / --scenario is required");
    }

    RunConfig config;
    lrsd::ArrayScenario scenario;
    if (!config_path.empty()) {
        config = lrsd::parse_run_config_file(config_path);
        apply_overrides(config, flags);
        config.validate();
        scenario = lrsd::generate_scenario(config.array);
    } else {
        scenario = lrsd::read_scenario_file(scenario_path);
        config.array = scenario.config;
        config.solver.gamma_max = config.array.gamma_max;
        apply_overrides(config, flags);
        config.validate();
    }

    if (trace_path.empty()) {
        trace_path = out_path + ".trace.csv";
    }

    std::vector<lrsd::IterationRecord> trace;
    lrsd::SolverParams params = config.solver;
    params.trace_sink = &trace;

    // The decomposition runs at its calibrated scale; z_hat is stored back in
    // measurement units and the trace objective stays at the solver scale.
    const double scale = lrsd::measurement_scale(scenario.measurements);
    lrsd::DecompositionResult result;
    try {
        result = lrsd::run_decomposition(scenario.measurements / scale, params);
    } catch (const lrsd::NumericalError&) {
        auto trace_out = open_output(trace_path);
        lrsd::write_trace_csv(trace_out, trace);
        std::cerr << "solver failed; partial trace in " << trace_path << "\n";
        throw;
    }
    result.z_hat *= scale;

    const std::vector<double> angles = lrsd::uniform_angle_grid(config.bench.music_grid_step_deg);
    const lrsd::DoaEstimate estimate = lrsd::estimate_doas(
        lrsd::music_spectrum(result.z_hat, config.array.num_sources, angles,
                             config.array.spacing_wavelengths),
        config.array.num_sources);
    lrsd::RefineParams refine_params;
    refine_params.h_factor = config.bench.h_factor;
    const lrsd::RefineResult refined = lrsd::refine_solution(
        scenario.measurements, result.gamma_hat, result.z_hat,
        config.array.num_sources, config.array.spacing_wavelengths,
        params.gamma_max, angles, refine_params);

    lrsd::SolutionRecord record;
    record.config = config;
    record.z_hat = result.z_hat;
    record.gamma_hat = result.gamma_hat;
    record.doas_deg = estimate.doas_deg;
    record.doa_degenerate = estimate.degenerate;
    record.detection = lrsd::detect_distorted(result.gamma_hat, config.bench.h_factor);
    record.refined = refined;
    record.converged = result.converged;
    record.iterations = static_cast<int>(result.trace.size());
    record.final_objective = result.trace.empty() ? 0.0 : result.trace.back().objective;

    lrsd::write_solution_file(out_path, record);
    {
        auto trace_out = open_output(trace_path);
        lrsd::write_trace_csv(trace_out, trace);
    }

    std::cout << "converged=" << (record.converged ? "true" : "false")
              << " iterations=" << record.iterations
              << " objective=" << lrsd::format_double(record.final_objective) << "\n";
    std::cout << "doas_deg=";
    for (std::size_t i = 0; i < record.refined.doas_deg.size(); ++i) {
        std::cout << (i ? "," : "") << lrsd::format_double(record.refined.doas_deg[i]);
    }
    std::cout << "\ndistorted=";
    for (std::size_t i = 0; i < record.refined.distorted_indices.size(); ++i) {
        std::cout << (i ? "," : "") << record.refined.distorted_indices[i];
    }
    std::cout << "\n";
    std::cerr << "wrote " << out_path << " and " << trace_path << "\n";
    return 0;
}

int cmd_spectrum(const std::string& in_path, const std::string& out_path,
                 std::optional<int> sources, std::optional<double> step) {
    std::string format;
    {
        std::ifstream probe(in_path, std::ios::binary);
        if (!probe) {
            throw lrsd::IoError("cannot open input file: " + in_path);
        }
        nlohmann::json root;
        try {
            root = nlohmann::json::parse(probe);
        } catch (const nlohmann::json::parse_error& e) {
            throw lrsd::ConfigError(in_path + ": parse error: " + e.what());
        }
        if (!root.is_object() || !root.contains("format") || !root["format"].is_string()) {
            throw lrsd::ConfigError(in_path + ": missing format tag");
        }
        format = root["format"].get<std::string>();
    }

    lrsd::ComplexMatrix matrix;
    int num_sources = 0;
    double spacing = 0.5;
    double grid_step = 0.05;
    if (format == "lrsd-scenario/1") {
        const lrsd::ArrayScenario scenario = lrsd::read_scenario_file(in_path);
        matrix = scenario.measurements;
        num_sources = scenario.config.num_sources;
        spacing = scenario.config.spacing_wavelengths;
    } else if (format == "lrsd-solution/1") {
        const lrsd::SolutionRecord solution = lrsd::read_solution_file(in_path);
        matrix = solution.z_hat;
        num_sources = solution.config.array.num_sources;
        spacing = solution.config.array.spacing_wavelengths;
        grid_step = solution.config.bench.music_grid_step_deg;
    } else {
        throw lrsd::ConfigError(in_path + ": unsupported format \"" + format + "\"");
    }
    if (sources) num_sources = *sources;
    if (step) grid_step = *step;

    const lrsd::SpectrumGrid spectrum =
        lrsd::music_spectrum(matrix, num_sources, lrsd::uniform_angle_grid(grid_step), spacing);
    auto out = open_output(out_path);
    lrsd::write_spectrum_csv(out, spectrum);
    std::cerr << "wrote " << out_path << "\n";
    return 0;
}

nlohmann::ordered_json trial_to_json(const lrsd::TrialOutcome& outcome) {
    // wall_time_s is intentionally omitted: trial records must be
    // bit-identical across reruns and worker counts.
    nlohmann::ordered_json record;
    record["trial_index"] = outcome.trial_index;
    record["doa_abs_errors_deg"] = outcome.doa_abs_errors_deg;
    record["doas_deg"] = outcome.doas_deg;
    record["detected_indices"] = outcome.detected_indices;
    record["true_indices"] = outcome.true_indices;
    record["resolved"] = outcome.resolved;
    record["detection_correct"] = outcome.detection_correct;
    record["solver_converged"] = outcome.solver_converged;
    record["failed"] = outcome.failed;
    record["error"] = outcome.error;
    return record;
}

void write_trials_json(const std::string& path, double sweep_value,
                       const std::vector<lrsd::TrialOutcome>& outcomes) {
    nlohmann::ordered_json root;
    root["format"] = "lrsd-trials/1";
    root["sweep_value"] = sweep_value;
    nlohmann::ordered_json trials = nlohmann::ordered_json::array();
    for (const auto& outcome : outcomes) {
        trials.push_back(trial_to_json(outcome));
    }
    root["trials"] = std::move(trials);
    auto out = open_output(path);
    out << root.dump(2) << '\n';
}

int cmd_bench(const std::string& config_path, std::string out_dir, const CommonFlags& flags) {
    RunConfig config = lrsd::parse_run_config_file(config_path);
    apply_overrides(config, flags);
    if (!out_dir.empty()) {
        config.out_dir = out_dir;
    }
    config.validate();
    if (config.out_dir.empty()) {
        throw lrsd::ConfigError("bench: output directory required (--out-dir or bench.out_dir)");
    }
    out_dir = config.out_dir;

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw lrsd::IoError("cannot create output directory: " + out_dir + ": " + ec.message());
    }

    {
        auto echo = open_output(out_dir + "/config_echo.json");
        lrsd::write_run_config(echo, config);
    }

    std::vector<lrsd::MetricsReport> reports;
    std::string csv_path;
    if (config.sweep_axis) {
        csv_path = out_dir + "/sweep_" + lrsd::sweep_axis_name(*config.sweep_axis) + ".csv";
        if (config.write_trials) {
            for (std::size_t i = 0; i < config.sweep_values.size(); ++i) {
                lrsd::ArrayConfig array = config.array;
                const double value = config.sweep_values[i];
                if (*config.sweep_axis == lrsd::SweepAxis::SnrDb) {
                    array.snr_db = value;
                } else {
                    array.snapshots = static_cast<int>(value);
                }
                const auto outcomes = lrsd::run_batch(array, config.solver, config.bench);
                lrsd::MetricsReport report =
                    lrsd::aggregate(outcomes, config.bench.resolution_threshold_deg);
                report.sweep_value = value;
                reports.push_back(report);
                write_trials_json(out_dir + "/trials_" +
                                      lrsd::sweep_axis_name(*config.sweep_axis) + "_" +
                                      lrsd::format_double(value) + ".json",
                                  value, outcomes);
            }
        } else {
            reports = lrsd::sweep(config.array, config.solver, *config.sweep_axis,
                                  config.sweep_values, config.bench);
        }
    } else {
        csv_path = out_dir + "/bench.csv";
        const auto outcomes = lrsd::run_batch(config.array, config.solver, config.bench);
        lrsd::MetricsReport report =
            lrsd::aggregate(outcomes, config.bench.resolution_threshold_deg);
        report.sweep_value = config.array.snr_db;
        reports.push_back(report);
        if (config.write_trials) {
            write_trials_json(out_dir + "/trials.json", report.sweep_value, outcomes);
        }
    }

    {
        auto csv = open_output(csv_path);
        lrsd::write_sweep_csv(csv, reports);
    }
    for (const auto& report : reports) {
        std::cout << "sweep_value=" << lrsd::format_double(report.sweep_value)
                  << " rmse_deg=" << lrsd::format_double(report.rmse_deg)
                  << " res_prob=" << lrsd::format_double(report.res_prob)
                  << " det_rate=" << lrsd::format_double(report.det_rate)
                  << " q=" << report.num_trials
                  << " convergence_rate=" << lrsd::format_double(report.convergence_rate) << "\n";
    }
    std::cerr << "wrote " << csv_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint direction-of-arrival estimation and distorted-sensor detection "
                 "via low-rank plus row-sparse decomposition"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::uint64_t seed_value = 0;
    int trials_value = 0;
    int workers_value = 0;

    std::string config_path;
    std::string scenario_path;
    std::string in_path;
    std::string out_path;
    std::string out_dir;
    std::string trace_path;
    std::optional<int> sources;
    std::optional<double> step;
    int sources_value = 0;
    double step_value = 0.0;

    CLI::App* simulate = app.add_subcommand("simulate", "Draw a scenario and write it to a file");
    simulate->add_option("--config", config_path, "Run config JSON")->required();
    simulate->add_option("--out", out_path, "Scenario output path")->required();
    auto* sim_seed = simulate->add_option("--seed", seed_value, "Override array seed");

    CLI::App* solve = app.add_subcommand("solve", "Run the decomposition on one scenario");
    solve->add_option("--config", config_path, "Run config JSON (generates the scenario)");
    solve->add_option("--scenario", scenario_path, "Scenario file to solve instead");
    solve->add_option("--out", out_path, "Solution output path")->required();
    solve->add_option("--trace", trace_path, "Iteration trace CSV (default <out>.trace.csv)");
    auto* solve_seed = solve->add_option("--seed", seed_value, "Override array seed");

    CLI::App* spectrum = app.add_subcommand("spectrum", "Write the MUSIC pseudospectrum CSV");
    spectrum->add_option("--in", in_path, "Scenario or solution file")->required();
    spectrum->add_option("--out", out_path, "Spectrum CSV path")->required();
    auto* spec_sources = spectrum->add_option("--sources", sources_value, "Override source count");
    auto* spec_step = spectrum->add_option("--step", step_value, "Grid step in degrees");

    CLI::App* bench = app.add_subcommand("bench", "Run Monte-Carlo sweeps and write CSV reports");
    bench->add_option("--config", config_path, "Run config JSON")->required();
    bench->add_option("--out-dir", out_dir, "Output directory");
    auto* bench_seed = bench->add_option("--seed", seed_value, "Override master seed");
    auto* bench_trials = bench->add_option("--trials", trials_value, "Override trial count");
    auto* bench_workers = bench->add_option("--workers", workers_value, "Override worker count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (sim_seed->count() || solve_seed->count() || bench_seed->count()) flags.seed = seed_value;
    if (bench_trials->count()) flags.trials = trials_value;
    if (bench_workers->count()) flags.workers = workers_value;
    if (spec_sources->count()) sources = sources_value;
    if (spec_step->count()) step = step_value;

    try {
        if (simulate->parsed()) return cmd_simulate(config_path, out_path, flags);
        if (solve->parsed()) return cmd_solve(config_path, scenario_path, out_path, trace_path, flags);
        if (spectrum->parsed()) return cmd_spectrum(in_path, out_path, sources, step);
        if (bench->parsed()) return cmd_bench(config_path, out_dir, flags);
    } catch (const lrsd::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const lrsd::NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const lrsd::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
