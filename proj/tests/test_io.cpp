#include "doctest.h"
#include "lrsd/run_config.hpp"
#include "lrsd/scenario_io.hpp"

#include <cmath>
#include <limits>
#include <sstream>

using namespace lrsd;

namespace {

ArrayScenario sample_scenario() {
    ArrayConfig config;
    config.num_sensors = 4;
    config.num_sources = 2;
    config.doas_deg = {-12.0, 7.5};
    config.snapshots = 6;
    config.num_distorted = 2;
    config.seed = 31;
    return generate_scenario(config);
}

} // namespace

TEST_CASE("scenario files round-trip every matrix bit for bit") {
    const ArrayScenario original = sample_scenario();
    std::stringstream buffer;
    write_scenario(buffer, original);
    const ArrayScenario loaded = read_scenario(buffer);

    CHECK((loaded.measurements - original.measurements).norm() == 0.0);
    CHECK((loaded.signals - original.signals).norm() == 0.0);
    CHECK((loaded.steering - original.steering).norm() == 0.0);
    CHECK((loaded.noise - original.noise).norm() == 0.0);
    CHECK((loaded.gamma_true - original.gamma_true).norm() == 0.0);
    CHECK(loaded.distorted_indices == original.distorted_indices);
    CHECK(loaded.config.seed == original.config.seed);
    CHECK(loaded.config.snr_db == original.config.snr_db);
    CHECK(loaded.config.doas_deg == original.config.doas_deg);
}

TEST_CASE("scenario serialization is byte deterministic") {
    const ArrayScenario scenario = sample_scenario();
    std::ostringstream a;
    std::ostringstream b;
    write_scenario(a, scenario);
    write_scenario(b, scenario);
    CHECK(a.str() == b.str());
    CHECK(!a.str().empty());
}

TEST_CASE("infinite snr survives the round trip through the sentinel") {
    ArrayConfig config;
    config.snr_db = std::numeric_limits<double>::infinity();
    config.snapshots = 4;
    ArrayScenario scenario = generate_scenario(config);
    std::stringstream buffer;
    write_scenario(buffer, scenario);
    CHECK(buffer.str().find("\"inf\"") != std::string::npos);
    const ArrayScenario loaded = read_scenario(buffer);
    CHECK(std::isinf(loaded.config.snr_db));
}

TEST_CASE("scenario reader rejects malformed input") {
    const ArrayScenario scenario = sample_scenario();
    std::ostringstream buffer;
    write_scenario(buffer, scenario);
    const std::string good = buffer.str();

    SUBCASE("unknown top-level key") {
        std::string bad = good;
        bad.insert(bad.find("\"config\""), "\"bogus\": 1,\n  ");
        std::istringstream in(bad);
        CHECK_THROWS_WITH_AS(read_scenario(in),
                             doctest::Contains("unknown key"), ConfigError);
    }
    SUBCASE("wrong format tag") {
        std::string bad = good;
        const auto at = bad.find("lrsd-scenario/1");
        bad.replace(at, 15, "lrsd-scenario/9");
        std::istringstream in(bad);
        CHECK_THROWS_AS(read_scenario(in), ConfigError);
    }
    SUBCASE("not json at all") {
        std::istringstream in("snapshots: 100");
        CHECK_THROWS_AS(read_scenario(in), ConfigError);
    }
    SUBCASE("dimension mismatch") {
        std::string bad = good;
        const auto at = bad.find("\"snapshots\": 6");
        bad.replace(at, 14, "\"snapshots\": 7");
        std::istringstream in(bad);
        CHECK_THROWS_WITH_AS(read_scenario(in),
                             doctest::Contains("dimensions"), ConfigError);
    }
}

TEST_CASE("missing files raise io errors") {
    CHECK_THROWS_AS(read_scenario_file("/nonexistent/path.json"), IoError);
    CHECK_THROWS_AS(parse_run_config_file("/nonexistent/config.json"), IoError);
}

TEST_CASE("empty config document yields all defaults") {
    std::istringstream in("{}");
    const RunConfig config = parse_run_config(in);
    CHECK(config.array.num_sensors == 8);
    CHECK(config.array.num_sources == 2);
    CHECK(config.array.snapshots == 100);
    CHECK(config.solver.lambda1 == 2.0);
    CHECK(config.solver.lambda2 == 0.2);
    CHECK(config.solver.mu0 == 1.0);
    CHECK(config.solver.alpha == 0.95);
    CHECK(config.solver.k_max == 100);
    CHECK(config.bench.num_trials == 1000);
    CHECK(config.bench.music_grid_step_deg == 0.05);
    CHECK(config.bench.h_factor == 10.0);
    CHECK(config.bench.resolution_threshold_deg == 0.5);
    CHECK(!config.sweep_axis.has_value());
    CHECK_NOTHROW(config.validate());
}

TEST_CASE("solver box bound follows the array bound unless overridden") {
    SUBCASE("no solver section") {
        std::istringstream in(R"({"array": {"gamma_max": 5.0}})");
        CHECK(parse_run_config(in).solver.gamma_max == 5.0);
    }
    SUBCASE("solver section without the key") {
        std::istringstream in(R"({"array": {"gamma_max": 5.0}, "solver": {"lambda1": 1.0}})");
        CHECK(parse_run_config(in).solver.gamma_max == 5.0);
    }
    SUBCASE("explicit override wins") {
        std::istringstream in(
            R"({"array": {"gamma_max": 5.0}, "solver": {"gamma_max": 7.0}})");
        CHECK(parse_run_config(in).solver.gamma_max == 7.0);
    }
}

TEST_CASE("run config echo round-trips") {
    std::istringstream in(R"({
      "array": {"num_sensors": 6, "num_sources": 1, "doas_deg": [3.0],
                "snapshots": 32, "snr_db": "inf", "num_distorted": 2, "seed": 17},
      "solver": {"lambda2": 0.3, "epsilon": "inf"},
      "music": {"grid_step_deg": 0.5},
      "detector": {"h_factor": 12.0},
      "bench": {"num_trials": 7, "master_seed": 3, "workers": 2,
                "sweep_axis": "snapshots", "sweep_values": [50, 100],
                "out_dir": "somewhere", "write_trials": true}
    })");
    const RunConfig config = parse_run_config(in);
    CHECK(std::isinf(config.array.snr_db));
    CHECK(std::isinf(config.solver.epsilon));
    CHECK(config.bench.music_grid_step_deg == 0.5);
    CHECK(config.bench.h_factor == 12.0);
    REQUIRE(config.sweep_axis.has_value());
    CHECK(*config.sweep_axis == SweepAxis::Snapshots);
    CHECK(config.sweep_values == std::vector<double>{50.0, 100.0});
    CHECK(config.out_dir == "somewhere");
    CHECK(config.write_trials);

    std::stringstream echo;
    write_run_config(echo, config);
    const RunConfig reloaded = parse_run_config(echo);
    CHECK(reloaded.array.num_sensors == 6);
    CHECK(std::isinf(reloaded.array.snr_db));
    CHECK(std::isinf(reloaded.solver.epsilon));
    CHECK(reloaded.solver.lambda2 == 0.3);
    CHECK(reloaded.solver.gamma_max == config.solver.gamma_max);
    CHECK(reloaded.bench.num_trials == 7);
    CHECK(*reloaded.sweep_axis == SweepAxis::Snapshots);
    CHECK(reloaded.sweep_values == config.sweep_values);
    CHECK(reloaded.out_dir == "somewhere");
    CHECK(reloaded.write_trials);
}

TEST_CASE("config parser rejects unknown keys with a path") {
    SUBCASE("top level") {
        std::istringstream in(R"({"arrray": {}})");
        CHECK_THROWS_WITH_AS(parse_run_config(in), doctest::Contains("arrray"), ConfigError);
    }
    SUBCASE("array section") {
        std::istringstream in(R"({"array": {"sensors": 8}})");
        CHECK_THROWS_WITH_AS(parse_run_config(in),
                             doctest::Contains("config.array"), ConfigError);
    }
    SUBCASE("bench section") {
        std::istringstream in(R"({"bench": {"trials": 5}})");
        CHECK_THROWS_WITH_AS(parse_run_config(in),
                             doctest::Contains("config.bench"), ConfigError);
    }
}

TEST_CASE("config parser rejects wrong types and bad values") {
    SUBCASE("string for a count") {
        std::istringstream in(R"({"array": {"num_sensors": "eight"}})");
        CHECK_THROWS_AS(parse_run_config(in), ConfigError);
    }
    SUBCASE("fractional count") {
        std::istringstream in(R"({"array": {"num_sensors": 8.5}})");
        CHECK_THROWS_AS(parse_run_config(in), ConfigError);
    }
    SUBCASE("negative seed") {
        std::istringstream in(R"({"array": {"seed": -4}})");
        CHECK_THROWS_AS(parse_run_config(in), ConfigError);
    }
    SUBCASE("unsupported sentinel") {
        std::istringstream in(R"({"array": {"snr_db": "infinite"}})");
        CHECK_THROWS_AS(parse_run_config(in), ConfigError);
    }
    SUBCASE("unknown sweep axis") {
        std::istringstream in(R"({"bench": {"sweep_axis": "bandwidth"}})");
        CHECK_THROWS_WITH_AS(parse_run_config(in),
                             doctest::Contains("bandwidth"), ConfigError);
    }
    SUBCASE("axis without values fails validation") {
        std::istringstream in(R"({"bench": {"sweep_axis": "snr_db"}})");
        const RunConfig config = parse_run_config(in);
        CHECK_THROWS_AS(config.validate(), ConfigError);
    }
    SUBCASE("wrong format tag") {
        std::istringstream in(R"({"format": "lrsd-run/2"})");
        CHECK_THROWS_AS(parse_run_config(in), ConfigError);
    }
}

TEST_CASE("solution files round-trip") {
    SolutionRecord record;
    record.config = RunConfig{};
    record.config.array.seed = 5;
    record.z_hat = ComplexMatrix::Zero(2, 3);
    record.z_hat(0, 0) = Complex(1.25, -0.5);
    record.z_hat(1, 2) = Complex(0.0, 3.75);
    record.gamma_hat = ComplexVector::Zero(2);
    record.gamma_hat(1) = Complex(-2.0, 0.125);
    record.doas_deg = {-10.0, 10.05};
    record.doa_degenerate = false;
    record.detection.num_distorted = 1;
    record.detection.distorted_indices = {1};
    record.detection.sorted_magnitudes = {0.0, 2.003};
    record.detection.gap_threshold = 0.25;
    record.refined.doas_deg = {-10.0, 10.0};
    record.refined.doa_degenerate = false;
    record.refined.distorted_indices = {0, 1};
    record.refined.gamma_refit = ComplexVector::Zero(2);
    record.refined.gamma_refit(0) = Complex(0.5, -1.5);
    record.refined.fallback = true;
    record.converged = true;
    record.iterations = 17;
    record.final_objective = 123.456;

    std::stringstream buffer;
    write_solution(buffer, record);
    const SolutionRecord loaded = read_solution(buffer);

    CHECK((loaded.z_hat - record.z_hat).norm() == 0.0);
    CHECK((loaded.gamma_hat - record.gamma_hat).norm() == 0.0);
    CHECK(loaded.doas_deg == record.doas_deg);
    CHECK(loaded.doa_degenerate == record.doa_degenerate);
    CHECK(loaded.detection.num_distorted == 1);
    CHECK(loaded.detection.distorted_indices == record.detection.distorted_indices);
    CHECK(loaded.detection.sorted_magnitudes == record.detection.sorted_magnitudes);
    CHECK(loaded.detection.gap_threshold == record.detection.gap_threshold);
    CHECK(loaded.refined.doas_deg == record.refined.doas_deg);
    CHECK(loaded.refined.doa_degenerate == record.refined.doa_degenerate);
    CHECK(loaded.refined.distorted_indices == record.refined.distorted_indices);
    CHECK((loaded.refined.gamma_refit - record.refined.gamma_refit).norm() == 0.0);
    CHECK(loaded.refined.fallback == record.refined.fallback);
    CHECK(loaded.converged);
    CHECK(loaded.iterations == 17);
    CHECK(loaded.final_objective == record.final_objective);
    CHECK(loaded.config.array.seed == 5);
}
