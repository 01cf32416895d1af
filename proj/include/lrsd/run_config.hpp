#pragma once

#include "lrsd/array_sim.hpp"
#include "lrsd/bench.hpp"
#include "lrsd/decomposer.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lrsd {

/// Parsed run configuration (JSON document with format tag "lrsd-run/1" and
/// sections array, solver, music, detector, bench; every section and key is
/// optional and defaults are filled in, but unknown keys are rejected).
/// Precedence is CLI flag > file > default; flag overrides are applied by
/// the caller after parsing.
struct RunConfig {
    ArrayConfig array;
    SolverParams solver;
    BenchOptions bench;
    std::optional<SweepAxis> sweep_axis;
    std::vector<double> sweep_values;
    std::string out_dir;       // bench output directory ("" = required on CLI)
    bool write_trials = false;

    void validate() const;  // throws ConfigError
};

/// Throws ConfigError with a key path on any malformed content.
RunConfig parse_run_config(std::istream& in);
RunConfig parse_run_config_file(const std::string& path);

/// Fully resolved echo (all defaults made explicit); parseable by
/// parse_run_config.
void write_run_config(std::ostream& out, const RunConfig& config);
std::string run_config_to_string(const RunConfig& config);

std::string sweep_axis_name(SweepAxis axis);

} // namespace lrsd
