#include "lrsd/run_config.hpp"

#include "json_util.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace lrsd {

namespace detail {

Json array_config_to_json(const ArrayConfig& config) {
    Json out;
    out["num_sensors"] = config.num_sensors;
    out["num_sources"] = config.num_sources;
    out["doas_deg"] = config.doas_deg;
    out["spacing_wavelengths"] = config.spacing_wavelengths;
    out["snapshots"] = config.snapshots;
    out["snr_db"] = double_or_inf(config.snr_db);
    out["num_distorted"] = config.num_distorted;
    out["gain_range"] = config.gain_range;
    out["phase_range_deg"] = config.phase_range_deg;
    out["gamma_max"] = config.gamma_max;
    out["seed"] = config.seed;
    return out;
}

ArrayConfig array_config_from_json(const Json& value, const std::string& path) {
    check_keys(value, path,
               {"num_sensors", "num_sources", "doas_deg", "spacing_wavelengths", "snapshots",
                "snr_db", "num_distorted", "gain_range", "phase_range_deg", "gamma_max", "seed"});
    ArrayConfig config;
    if (value.contains("num_sensors")) {
        config.num_sensors = get_int(value["num_sensors"], path + ".num_sensors");
    }
    if (value.contains("num_sources")) {
        config.num_sources = get_int(value["num_sources"], path + ".num_sources");
    }
    if (value.contains("doas_deg")) {
        config.doas_deg = get_double_list(value["doas_deg"], path + ".doas_deg");
    }
    if (value.contains("spacing_wavelengths")) {
        config.spacing_wavelengths =
            get_double(value["spacing_wavelengths"], path + ".spacing_wavelengths");
    }
    if (value.contains("snapshots")) {
        config.snapshots = get_int(value["snapshots"], path + ".snapshots");
    }
    if (value.contains("snr_db")) {
        config.snr_db = get_double_or_inf(value["snr_db"], path + ".snr_db");
    }
    if (value.contains("num_distorted")) {
        config.num_distorted = get_int(value["num_distorted"], path + ".num_distorted");
    }
    if (value.contains("gain_range")) {
        const auto list = get_double_list(value["gain_range"], path + ".gain_range");
        if (list.size() != 2) fail(path + ".gain_range", "expected two numbers");
        config.gain_range = {list[0], list[1]};
    }
    if (value.contains("phase_range_deg")) {
        const auto list = get_double_list(value["phase_range_deg"], path + ".phase_range_deg");
        if (list.size() != 2) fail(path + ".phase_range_deg", "expected two numbers");
        config.phase_range_deg = {list[0], list[1]};
    }
    if (value.contains("gamma_max")) {
        config.gamma_max = get_double(value["gamma_max"], path + ".gamma_max");
    }
    if (value.contains("seed")) {
        config.seed = get_u64(value["seed"], path + ".seed");
    }
    return config;
}

namespace {

Json solver_to_json(const SolverParams& params) {
    Json out;
    out["lambda1"] = params.lambda1;
    out["lambda2"] = params.lambda2;
    out["mu0"] = params.mu0;
    out["alpha"] = params.alpha;
    out["mu_min"] = params.mu_min;
    out["gamma_max"] = params.gamma_max;
    out["epsilon"] = double_or_inf(params.epsilon);
    out["k_max"] = params.k_max;
    out["inner_tol"] = params.inner.tol;
    out["inner_max_iter"] = params.inner.max_iter;
    return out;
}

SolverParams solver_from_json(const Json& value, const std::string& path,
                              double default_gamma_max) {
    check_keys(value, path,
               {"lambda1", "lambda2", "mu0", "alpha", "mu_min", "gamma_max", "epsilon", "k_max",
                "inner_tol", "inner_max_iter"});
    SolverParams params;
    params.gamma_max = default_gamma_max;
    if (value.contains("lambda1")) params.lambda1 = get_double(value["lambda1"], path + ".lambda1");
    if (value.contains("lambda2")) params.lambda2 = get_double(value["lambda2"], path + ".lambda2");
    if (value.contains("mu0")) params.mu0 = get_double(value["mu0"], path + ".mu0");
    if (value.contains("alpha")) params.alpha = get_double(value["alpha"], path + ".alpha");
    if (value.contains("mu_min")) params.mu_min = get_double(value["mu_min"], path + ".mu_min");
    if (value.contains("gamma_max")) {
        params.gamma_max = get_double(value["gamma_max"], path + ".gamma_max");
    }
    if (value.contains("epsilon")) {
        params.epsilon = get_double_or_inf(value["epsilon"], path + ".epsilon");
    }
    if (value.contains("k_max")) params.k_max = get_int(value["k_max"], path + ".k_max");
    if (value.contains("inner_tol")) {
        params.inner.tol = get_double(value["inner_tol"], path + ".inner_tol");
    }
    if (value.contains("inner_max_iter")) {
        params.inner.max_iter = get_int(value["inner_max_iter"], path + ".inner_max_iter");
    }
    return params;
}

} // namespace

Json run_config_to_json(const RunConfig& config) {
    Json out;
    out["format"] = "lrsd-run/1";
    out["array"] = array_config_to_json(config.array);
    out["solver"] = solver_to_json(config.solver);
    Json music;
    music["grid_step_deg"] = config.bench.music_grid_step_deg;
    out["music"] = std::move(music);
    Json detector;
    detector["h_factor"] = config.bench.h_factor;
    out["detector"] = std::move(detector);
    Json bench;
    bench["num_trials"] = config.bench.num_trials;
    bench["master_seed"] = config.bench.master_seed;
    bench["workers"] = config.bench.workers;
    bench["resolution_threshold_deg"] = config.bench.resolution_threshold_deg;
    if (config.sweep_axis) {
        bench["sweep_axis"] = sweep_axis_name(*config.sweep_axis);
        bench["sweep_values"] = config.sweep_values;
    }
    if (!config.out_dir.empty()) {
        bench["out_dir"] = config.out_dir;
    }
    bench["write_trials"] = config.write_trials;
    out["bench"] = std::move(bench);
    return out;
}

} // namespace detail

namespace {

using detail::Json;

RunConfig run_config_from_json(const Json& root) {
    detail::check_keys(root, "config",
                       {"format", "array", "solver", "music", "detector", "bench"});
    if (root.contains("format")) {
        const std::string format = detail::get_string(root["format"], "config.format");
        if (format != "lrsd-run/1") {
            detail::fail("config.format", "expected \"lrsd-run/1\", got \"" + format + "\"");
        }
    }

    RunConfig config;
    if (root.contains("array")) {
        config.array = detail::array_config_from_json(root["array"], "config.array");
    }
    // gamma_max defaults to the array bound so the solver box always covers
    // the simulated distortions unless explicitly overridden.
    config.solver.gamma_max = config.array.gamma_max;
    if (root.contains("solver")) {
        config.solver =
            detail::solver_from_json(root["solver"], "config.solver", config.array.gamma_max);
    }
    if (root.contains("music")) {
        detail::check_keys(root["music"], "config.music", {"grid_step_deg"});
        if (root["music"].contains("grid_step_deg")) {
            config.bench.music_grid_step_deg =
                detail::get_double(root["music"]["grid_step_deg"], "config.music.grid_step_deg");
        }
    }
    if (root.contains("detector")) {
        detail::check_keys(root["detector"], "config.detector", {"h_factor"});
        if (root["detector"].contains("h_factor")) {
            config.bench.h_factor =
                detail::get_double(root["detector"]["h_factor"], "config.detector.h_factor");
        }
    }
    if (root.contains("bench")) {
        const Json& bench = root["bench"];
        detail::check_keys(bench, "config.bench",
                           {"num_trials", "master_seed", "workers", "resolution_threshold_deg",
                            "sweep_axis", "sweep_values", "out_dir", "write_trials"});
        if (bench.contains("num_trials")) {
            config.bench.num_trials = detail::get_int(bench["num_trials"], "config.bench.num_trials");
        }
        if (bench.contains("master_seed")) {
            config.bench.master_seed =
                detail::get_u64(bench["master_seed"], "config.bench.master_seed");
        }
        if (bench.contains("workers")) {
            config.bench.workers = detail::get_int(bench["workers"], "config.bench.workers");
        }
        if (bench.contains("resolution_threshold_deg")) {
            config.bench.resolution_threshold_deg = detail::get_double(
                bench["resolution_threshold_deg"], "config.bench.resolution_threshold_deg");
        }
        if (bench.contains("sweep_axis")) {
            const std::string axis =
                detail::get_string(bench["sweep_axis"], "config.bench.sweep_axis");
            if (axis == "snr_db") {
                config.sweep_axis = SweepAxis::SnrDb;
            } else if (axis == "snapshots") {
                config.sweep_axis = SweepAxis::Snapshots;
            } else {
                detail::fail("config.bench.sweep_axis",
                             "expected \"snr_db\" or \"snapshots\", got \"" + axis + "\"");
            }
        }
        if (bench.contains("sweep_values")) {
            config.sweep_values =
                detail::get_double_list(bench["sweep_values"], "config.bench.sweep_values");
        }
        if (bench.contains("out_dir")) {
            config.out_dir = detail::get_string(bench["out_dir"], "config.bench.out_dir");
        }
        if (bench.contains("write_trials")) {
            config.write_trials =
                detail::get_bool(bench["write_trials"], "config.bench.write_trials");
        }
    }
    return config;
}

} // namespace

void RunConfig::validate() const {
    array.validate();
    solver.validate();
    bench.validate();
    if (sweep_axis && sweep_values.empty()) {
        throw ConfigError("config.bench.sweep_values: required when sweep_axis is set");
    }
    if (!sweep_axis && !sweep_values.empty()) {
        throw ConfigError("config.bench.sweep_axis: required when sweep_values is set");
    }
    if (sweep_axis && *sweep_axis == SweepAxis::Snapshots) {
        for (double v : sweep_values) {
            if (!(v > 0.0) || std::floor(v) != v || v > 1e9) {
                throw ConfigError("config.bench.sweep_values: snapshot values must be "
                                  "positive integers");
            }
        }
    }
}

RunConfig parse_run_config(std::istream& in) {
    Json root;
    try {
        root = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return run_config_from_json(root);
}

RunConfig parse_run_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file: " + path);
    }
    try {
        return parse_run_config(in);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void write_run_config(std::ostream& out, const RunConfig& config) {
    out << detail::run_config_to_json(config).dump(2) << '\n';
}

std::string run_config_to_string(const RunConfig& config) {
    std::ostringstream out;
    write_run_config(out, config);
    return out.str();
}

std::string sweep_axis_name(SweepAxis axis) {
    switch (axis) {
    case SweepAxis::SnrDb:
        return "snr_db";
    case SweepAxis::Snapshots:
        return "snapshots";
    }
    throw DomainError("sweep_axis_name: unknown axis");
}

} // namespace lrsd
