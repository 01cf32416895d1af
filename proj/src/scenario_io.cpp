#include "lrsd/scenario_io.hpp"

#include "json_util.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace lrsd {

namespace {

using detail::Json;

Json parse_stream(std::istream& in) {
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("parse error: ") + e.what());
    }
}

void check_format(const Json& root, const std::string& path, const char* expected) {
    const std::string format =
        detail::get_string(detail::member(root, path, "format"), path + ".format");
    if (format != expected) {
        detail::fail(path + ".format",
                     std::string("expected \"") + expected + "\", got \"" + format + "\"");
    }
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open output file: " + path);
    }
    return out;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open input file: " + path);
    }
    return in;
}

} // namespace

void write_scenario(std::ostream& out, const ArrayScenario& scenario) {
    Json root;
    root["format"] = "lrsd-scenario/1";
    root["config"] = detail::array_config_to_json(scenario.config);
    root["steering"] = detail::matrix_to_json(scenario.steering);
    root["signals"] = detail::matrix_to_json(scenario.signals);
    root["gamma_true"] = detail::cvector_to_json(scenario.gamma_true);
    root["distorted_indices"] = scenario.distorted_indices;
    root["noise"] = detail::matrix_to_json(scenario.noise);
    root["measurements"] = detail::matrix_to_json(scenario.measurements);
    out << root.dump(2) << '\n';
}

void write_scenario_file(const std::string& path, const ArrayScenario& scenario) {
    auto out = open_output(path);
    write_scenario(out, scenario);
    if (!out) {
        throw IoError("failed writing scenario file: " + path);
    }
}

ArrayScenario read_scenario(std::istream& in) {
    const Json root = parse_stream(in);
    detail::check_keys(root, "scenario",
                       {"format", "config", "steering", "signals", "gamma_true",
                        "distorted_indices", "noise", "measurements"});
    check_format(root, "scenario", "lrsd-scenario/1");

    ArrayScenario scenario;
    scenario.config = detail::array_config_from_json(detail::member(root, "scenario", "config"),
                                                     "scenario.config");
    scenario.steering = detail::matrix_from_json(detail::member(root, "scenario", "steering"),
                                                 "scenario.steering");
    scenario.signals = detail::matrix_from_json(detail::member(root, "scenario", "signals"),
                                                "scenario.signals");
    scenario.gamma_true = detail::cvector_from_json(detail::member(root, "scenario", "gamma_true"),
                                                    "scenario.gamma_true");
    const Json& indices = detail::member(root, "scenario", "distorted_indices");
    if (!indices.is_array()) {
        detail::fail("scenario.distorted_indices", "expected an array");
    }
    for (std::size_t i = 0; i < indices.size(); ++i) {
        scenario.distorted_indices.push_back(
            detail::get_int(indices[i], "scenario.distorted_indices"));
    }
    scenario.noise =
        detail::matrix_from_json(detail::member(root, "scenario", "noise"), "scenario.noise");
    scenario.measurements = detail::matrix_from_json(
        detail::member(root, "scenario", "measurements"), "scenario.measurements");

    const Index m = scenario.config.num_sensors;
    const Index k = scenario.config.num_sources;
    const Index t = scenario.config.snapshots;
    if (scenario.steering.rows() != m || scenario.steering.cols() != k ||
        scenario.signals.rows() != k || scenario.signals.cols() != t ||
        scenario.gamma_true.size() != m || scenario.noise.rows() != m ||
        scenario.noise.cols() != t || scenario.measurements.rows() != m ||
        scenario.measurements.cols() != t) {
        detail::fail("scenario", "matrix dimensions inconsistent with config");
    }
    for (std::size_t i = 0; i < scenario.distorted_indices.size(); ++i) {
        const int idx = scenario.distorted_indices[i];
        if (idx < 0 || idx >= m || (i > 0 && idx <= scenario.distorted_indices[i - 1])) {
            detail::fail("scenario.distorted_indices", "expected sorted indices in [0, M)");
        }
    }
    return scenario;
}

ArrayScenario read_scenario_file(const std::string& path) {
    auto in = open_input(path);
    try {
        return read_scenario(in);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void write_solution(std::ostream& out, const SolutionRecord& record) {
    Json root;
    root["format"] = "lrsd-solution/1";
    root["config"] = detail::run_config_to_json(record.config);
    root["z_hat"] = detail::matrix_to_json(record.z_hat);
    root["gamma_hat"] = detail::cvector_to_json(record.gamma_hat);
    Json doa;
    doa["doas_deg"] = record.doas_deg;
    doa["degenerate"] = record.doa_degenerate;
    root["doa"] = std::move(doa);
    Json detection;
    detection["num_distorted"] = record.detection.num_distorted;
    detection["distorted_indices"] = record.detection.distorted_indices;
    detection["sorted_magnitudes"] = record.detection.sorted_magnitudes;
    detection["gap_threshold"] = record.detection.gap_threshold;
    root["detection"] = std::move(detection);
    Json refined;
    refined["doas_deg"] = record.refined.doas_deg;
    refined["degenerate"] = record.refined.doa_degenerate;
    refined["distorted_indices"] = record.refined.distorted_indices;
    refined["gamma"] = detail::cvector_to_json(record.refined.gamma_refit);
    refined["fallback"] = record.refined.fallback;
    root["refined"] = std::move(refined);
    Json solver;
    solver["converged"] = record.converged;
    solver["iterations"] = record.iterations;
    solver["final_objective"] = record.final_objective;
    root["solver"] = std::move(solver);
    out << root.dump(2) << '\n';
}

void write_solution_file(const std::string& path, const SolutionRecord& record) {
    auto out = open_output(path);
    write_solution(out, record);
    if (!out) {
        throw IoError("failed writing solution file: " + path);
    }
}

SolutionRecord read_solution(std::istream& in) {
    const Json root = parse_stream(in);
    detail::check_keys(root, "solution",
                       {"format", "config", "z_hat", "gamma_hat", "doa", "detection", "refined",
                        "solver"});
    check_format(root, "solution", "lrsd-solution/1");

    SolutionRecord record;
    {
        std::stringstream config_stream;
        config_stream << detail::member(root, "solution", "config").dump();
        record.config = parse_run_config(config_stream);
    }
    record.z_hat =
        detail::matrix_from_json(detail::member(root, "solution", "z_hat"), "solution.z_hat");
    record.gamma_hat = detail::cvector_from_json(detail::member(root, "solution", "gamma_hat"),
                                                 "solution.gamma_hat");

    const Json& doa = detail::member(root, "solution", "doa");
    detail::check_keys(doa, "solution.doa", {"doas_deg", "degenerate"});
    record.doas_deg =
        detail::get_double_list(detail::member(doa, "solution.doa", "doas_deg"),
                                "solution.doa.doas_deg");
    record.doa_degenerate = detail::get_bool(detail::member(doa, "solution.doa", "degenerate"),
                                             "solution.doa.degenerate");

    const Json& detection = detail::member(root, "solution", "detection");
    detail::check_keys(detection, "solution.detection",
                       {"num_distorted", "distorted_indices", "sorted_magnitudes",
                        "gap_threshold"});
    record.detection.num_distorted =
        detail::get_int(detail::member(detection, "solution.detection", "num_distorted"),
                        "solution.detection.num_distorted");
    const Json& indices = detail::member(detection, "solution.detection", "distorted_indices");
    if (!indices.is_array()) {
        detail::fail("solution.detection.distorted_indices", "expected an array");
    }
    for (std::size_t i = 0; i < indices.size(); ++i) {
        record.detection.distorted_indices.push_back(
            detail::get_int(indices[i], "solution.detection.distorted_indices"));
    }
    record.detection.sorted_magnitudes = detail::get_double_list(
        detail::member(detection, "solution.detection", "sorted_magnitudes"),
        "solution.detection.sorted_magnitudes");
    record.detection.gap_threshold =
        detail::get_double(detail::member(detection, "solution.detection", "gap_threshold"),
                           "solution.detection.gap_threshold");

    const Json& refined = detail::member(root, "solution", "refined");
    detail::check_keys(refined, "solution.refined",
                       {"doas_deg", "degenerate", "distorted_indices", "gamma", "fallback"});
    record.refined.doas_deg =
        detail::get_double_list(detail::member(refined, "solution.refined", "doas_deg"),
                                "solution.refined.doas_deg");
    record.refined.doa_degenerate =
        detail::get_bool(detail::member(refined, "solution.refined", "degenerate"),
                         "solution.refined.degenerate");
    const Json& refined_indices =
        detail::member(refined, "solution.refined", "distorted_indices");
    if (!refined_indices.is_array()) {
        detail::fail("solution.refined.distorted_indices", "expected an array");
    }
    for (std::size_t i = 0; i < refined_indices.size(); ++i) {
        record.refined.distorted_indices.push_back(
            detail::get_int(refined_indices[i], "solution.refined.distorted_indices"));
    }
    record.refined.gamma_refit =
        detail::cvector_from_json(detail::member(refined, "solution.refined", "gamma"),
                                  "solution.refined.gamma");
    record.refined.fallback =
        detail::get_bool(detail::member(refined, "solution.refined", "fallback"),
                         "solution.refined.fallback");

    const Json& solver = detail::member(root, "solution", "solver");
    detail::check_keys(solver, "solution.solver", {"converged", "iterations", "final_objective"});
    record.converged = detail::get_bool(detail::member(solver, "solution.solver", "converged"),
                                        "solution.solver.converged");
    record.iterations = detail::get_int(detail::member(solver, "solution.solver", "iterations"),
                                        "solution.solver.iterations");
    record.final_objective =
        detail::get_double(detail::member(solver, "solution.solver", "final_objective"),
                           "solution.solver.final_objective");
    return record;
}

SolutionRecord read_solution_file(const std::string& path) {
    auto in = open_input(path);
    try {
        return read_solution(in);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

} // namespace lrsd
