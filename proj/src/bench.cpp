#include "lrsd/bench.hpp"

#include "lrsd/doa.hpp"
#include "lrsd/io_util.hpp"
#include "lrsd/refine.hpp"
#include "lrsd/rng.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

namespace lrsd {

void BenchOptions::validate() const {
    if (num_trials < 1) {
        throw ConfigError("bench: num_trials must be at least 1");
    }
    if (!(resolution_threshold_deg > 0.0) || !std::isfinite(resolution_threshold_deg)) {
        throw ConfigError("bench: resolution_threshold_deg must be positive and finite");
    }
    if (workers < 0) {
        throw ConfigError("bench: workers must be >= 0");
    }
    if (!(music_grid_step_deg > 0.0) || !std::isfinite(music_grid_step_deg)) {
        throw ConfigError("bench: music_grid_step_deg must be positive and finite");
    }
    if (!(h_factor > 1.0) || !std::isfinite(h_factor)) {
        throw ConfigError("bench: h_factor must be finite and > 1");
    }
}

std::vector<double> match_doa_errors(const std::vector<double>& estimated_deg,
                                     const std::vector<double>& true_deg) {
    if (estimated_deg.size() != true_deg.size()) {
        throw DimensionError("match_doa_errors: size mismatch");
    }
    const std::size_t k = true_deg.size();
    if (k == 0) {
        return {};
    }
    if (k > 8) {
        throw DomainError("match_doa_errors: exhaustive matching limited to 8 sources");
    }

    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::size_t> best = perm;
    double best_total = -1.0;
    do {
        double total = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            total += std::abs(estimated_deg[perm[i]] - true_deg[i]);
        }
        if (best_total < 0.0 || total < best_total) {
            best_total = total;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    std::vector<double> errors(k);
    for (std::size_t i = 0; i < k; ++i) {
        errors[i] = std::abs(estimated_deg[best[i]] - true_deg[i]);
    }
    return errors;
}

TrialOutcome run_trial(const ArrayConfig& config, const SolverParams& params,
                       const BenchOptions& options, int trial_index) {
    if (trial_index < 0) {
        throw ConfigError("run_trial: trial_index must be >= 0");
    }
    TrialOutcome outcome;
    outcome.trial_index = trial_index;

    ArrayConfig trial_config = config;
    trial_config.seed = Rng::mix(options.master_seed, static_cast<std::uint64_t>(trial_index));

    const auto start = std::chrono::steady_clock::now();
    try {
        const ArrayScenario scenario = generate_scenario(trial_config);
        outcome.true_indices = scenario.distorted_indices;

        // The decomposition runs at the scale its default weights expect;
        // the refinement works in measurement units throughout.
        const double scale = measurement_scale(scenario.measurements);
        const DecompositionResult result =
            run_decomposition(scenario.measurements / scale, params);
        outcome.solver_converged = result.converged;

        const std::vector<double> angles = uniform_angle_grid(options.music_grid_step_deg);
        RefineParams refine_params;
        refine_params.h_factor = options.h_factor;
        const RefineResult refined = refine_solution(
            scenario.measurements, result.gamma_hat, result.z_hat * scale,
            trial_config.num_sources, trial_config.spacing_wavelengths,
            params.gamma_max, angles, refine_params);
        outcome.doas_deg = refined.doas_deg;

        std::vector<double> truth = trial_config.doas_deg;
        std::sort(truth.begin(), truth.end());
        outcome.doa_abs_errors_deg = match_doa_errors(refined.doas_deg, truth);
        outcome.resolved =
            *std::max_element(outcome.doa_abs_errors_deg.begin(),
                              outcome.doa_abs_errors_deg.end()) <=
            options.resolution_threshold_deg;

        outcome.detected_indices = refined.distorted_indices;
        outcome.detection_correct = refined.distorted_indices == scenario.distorted_indices;
    } catch (const std::invalid_argument& e) {
        outcome.failed = true;
        outcome.error = e.what();
    } catch (const std::domain_error& e) {
        outcome.failed = true;
        outcome.error = e.what();
    } catch (const NumericalError& e) {
        outcome.failed = true;
        outcome.error = e.what();
    }
    if (outcome.failed) {
        outcome.resolved = false;
        outcome.detection_correct = false;
        outcome.doa_abs_errors_deg.clear();
    }
    outcome.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return outcome;
}

std::vector<TrialOutcome> run_batch(const ArrayConfig& config, const SolverParams& params,
                                    const BenchOptions& options) {
    options.validate();
    config.validate();
    params.validate();

    const int q = options.num_trials;
    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(q));

    int worker_count = options.workers;
    if (worker_count == 0) {
        worker_count = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    }
    worker_count = std::min(worker_count, q);

    std::atomic<int> next{0};
    std::atomic<bool> aborted{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto work = [&]() {
        try {
            while (!aborted.load(std::memory_order_relaxed)) {
                const int i = next.fetch_add(1);
                if (i >= q) break;
                outcomes[static_cast<std::size_t>(i)] = run_trial(config, params, options, i);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            aborted.store(true, std::memory_order_relaxed);
        }
    };

    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(worker_count - 1));
    for (int w = 1; w < worker_count; ++w) {
        threads.emplace_back(work);
    }
    work();
    for (auto& t : threads) {
        t.join();
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
    return outcomes;
}

MetricsReport aggregate(const std::vector<TrialOutcome>& outcomes,
                        double resolution_threshold_deg) {
    if (outcomes.empty()) {
        throw DomainError("aggregate: empty outcome list");
    }
    if (!(resolution_threshold_deg > 0.0)) {
        throw DomainError("aggregate: threshold must be positive");
    }

    const double q = static_cast<double>(outcomes.size());
    int n_resolved = 0;
    int n_detected = 0;
    int n_converged = 0;
    double squared_sum = 0.0;
    std::size_t error_count = 0;
    for (const TrialOutcome& outcome : outcomes) {
        if (!outcome.failed && !outcome.doa_abs_errors_deg.empty()) {
            double max_error = 0.0;
            for (double e : outcome.doa_abs_errors_deg) {
                squared_sum += e * e;
                max_error = std::max(max_error, e);
            }
            error_count += outcome.doa_abs_errors_deg.size();
            if (max_error <= resolution_threshold_deg) ++n_resolved;
        }
        if (outcome.detection_correct) ++n_detected;
        if (outcome.solver_converged) ++n_converged;
    }

    MetricsReport report;
    report.num_trials = static_cast<int>(outcomes.size());
    report.rmse_deg = error_count > 0
                          ? std::sqrt(squared_sum / static_cast<double>(error_count))
                          : std::numeric_limits<double>::quiet_NaN();
    report.res_prob = static_cast<double>(n_resolved) / q;
    report.det_rate = static_cast<double>(n_detected) / q;
    report.convergence_rate = static_cast<double>(n_converged) / q;
    return report;
}

std::vector<MetricsReport> sweep(const ArrayConfig& base_config, const SolverParams& params,
                                 SweepAxis axis, const std::vector<double>& values,
                                 const BenchOptions& options) {
    if (values.empty()) {
        throw ConfigError("sweep: values must be nonempty");
    }
    std::vector<MetricsReport> reports;
    reports.reserve(values.size());
    for (double value : values) {
        ArrayConfig config = base_config;
        switch (axis) {
        case SweepAxis::SnrDb:
            config.snr_db = value;
            break;
        case SweepAxis::Snapshots: {
            const double rounded = std::floor(value);
            if (!(value > 0.0) || rounded != value || value > 1e9) {
                throw ConfigError("sweep: snapshot values must be positive integers");
            }
            config.snapshots = static_cast<int>(rounded);
            break;
        }
        }
        MetricsReport report =
            aggregate(run_batch(config, params, options), options.resolution_threshold_deg);
        report.sweep_value = value;
        reports.push_back(report);
    }
    return reports;
}

void write_sweep_csv(std::ostream& out, const std::vector<MetricsReport>& reports) {
    out << "sweep_value,rmse_deg,res_prob,det_rate,q,convergence_rate\n";
    for (const MetricsReport& r : reports) {
        out << format_double(r.sweep_value) << ',' << format_double(r.rmse_deg) << ','
            << format_double(r.res_prob) << ',' << format_double(r.det_rate) << ','
            << r.num_trials << ',' << format_double(r.convergence_rate) << '\n';
    }
}

} // namespace lrsd
