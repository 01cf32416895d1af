#pragma once

#include "lrsd/array_sim.hpp"
#include "lrsd/decomposer.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lrsd {

struct BenchOptions {
    int num_trials = 1000;
    double resolution_threshold_deg = 0.5;
    int workers = 0;  // 0 = one per hardware thread
    std::uint64_t master_seed = 1;
    double music_grid_step_deg = 0.05;
    double h_factor = 10.0;

    void validate() const;  // throws ConfigError
};

/// One Monte-Carlo trial. Everything except wall_time_s is deterministic
/// given (config, params, options, trial_index); determinism comparisons
/// must ignore wall_time_s.
struct TrialOutcome {
    int trial_index = 0;
    std::vector<double> doa_abs_errors_deg;  // truth order, empty if failed
    std::vector<double> doas_deg;            // estimates, ascending
    std::vector<int> detected_indices;
    std::vector<int> true_indices;
    bool resolved = false;
    bool detection_correct = false;
    bool solver_converged = false;
    bool failed = false;  // solver rejected the instance; no estimates
    std::string error;
    double wall_time_s = 0.0;
};

struct MetricsReport {
    double sweep_value = 0.0;
    double rmse_deg = 0.0;  // NaN when no trial produced estimates
    double res_prob = 0.0;
    double det_rate = 0.0;
    int num_trials = 0;
    double convergence_rate = 0.0;
};

enum class SweepAxis { SnrDb, Snapshots };

/// Assigns each estimate to a distinct true angle minimizing the total
/// absolute error (exhaustive over permutations; sizes must match, <= 8).
/// Returns per-truth absolute errors in the order of true_deg.
std::vector<double> match_doa_errors(const std::vector<double>& estimated_deg,
                                     const std::vector<double>& true_deg);

/// Runs one trial with per-trial seed derived from (master_seed, trial_index).
/// Numerical failures are captured in the outcome, not thrown.
TrialOutcome run_trial(const ArrayConfig& config, const SolverParams& params,
                       const BenchOptions& options, int trial_index);

/// num_trials independent trials, parallel over the configured worker count.
/// Outcomes are indexed by trial, so results do not depend on scheduling.
std::vector<TrialOutcome> run_batch(const ArrayConfig& config, const SolverParams& params,
                                    const BenchOptions& options);

/// Resolution and detection ratios over all trials; RMSE over the trials
/// that produced estimates (failed trials count against the ratios only).
MetricsReport aggregate(const std::vector<TrialOutcome>& outcomes,
                        double resolution_threshold_deg);

/// One report per sweep value, applied to snr_db or snapshots. Trial seeds
/// depend only on trial_index, so sweeps are paired across values.
std::vector<MetricsReport> sweep(const ArrayConfig& base_config, const SolverParams& params,
                                 SweepAxis axis, const std::vector<double>& values,
                                 const BenchOptions& options);

/// Columns: sweep_value,rmse_deg,res_prob,det_rate,q,convergence_rate
void write_sweep_csv(std::ostream& out, const std::vector<MetricsReport>& reports);

} // namespace lrsd
