#pragma once

#include "lrsd/array_sim.hpp"
#include "lrsd/detector.hpp"
#include "lrsd/refine.hpp"
#include "lrsd/run_config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace lrsd {

/// File formats are JSON with a format tag; matrices are stored as
/// {rows, cols, data} with data a row-major list of interleaved re/im
/// pairs. Number round-trips are exact, so a reloaded scenario reproduces
/// Y bit for bit.

/// "lrsd-scenario/1": resolved array config plus all scenario matrices.
void write_scenario(std::ostream& out, const ArrayScenario& scenario);
void write_scenario_file(const std::string& path, const ArrayScenario& scenario);

/// Throws ConfigError on malformed or unknown content, IoError on
/// unreadable input.
ArrayScenario read_scenario(std::istream& in);
ArrayScenario read_scenario_file(const std::string& path);

/// "lrsd-solution/1": solver outputs plus the run config echo. doas_deg and
/// detection describe the raw decomposition (subspace scan of z_hat, gap
/// detector on gamma_hat); refined holds the pipeline's final estimates.
struct SolutionRecord {
    RunConfig config;  // resolved configuration the solve ran under
    ComplexMatrix z_hat;
    ComplexVector gamma_hat;
    std::vector<double> doas_deg;
    bool doa_degenerate = false;
    DetectionReport detection;
    RefineResult refined;
    bool converged = false;
    int iterations = 0;
    double final_objective = 0.0;
};

void write_solution(std::ostream& out, const SolutionRecord& record);
void write_solution_file(const std::string& path, const SolutionRecord& record);

SolutionRecord read_solution(std::istream& in);
SolutionRecord read_solution_file(const std::string& path);

} // namespace lrsd
