#pragma once

#include "lrsd/box_lasso.hpp"

#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

namespace lrsd {

struct IterationRecord;

struct SolverParams {
    double lambda1 = 2.0;
    double lambda2 = 0.2;
    double mu0 = 1.0;
    double alpha = 0.95;     // per-iteration smoothing decay, in (0, 1]
    double mu_min = 1e-6;
    double gamma_max = 10.0;
    double epsilon = 1e-12;  // relative-objective stopping threshold; +inf stops after one iteration
    int k_max = 100;
    BoxLassoOptions inner;
    /// Optional live trace: records are appended as they complete, so the
    /// partial history survives a mid-run NumericalError.
    std::vector<IterationRecord>* trace_sink = nullptr;

    void validate() const;   // throws ConfigError
};

struct IterationRecord {
    int iteration = 0;
    double objective = 0.0;
    double mu = 0.0;
    double stop_ratio = 0.0;
    int inner_iterations = 0;
};

struct DecompositionResult {
    ComplexMatrix z_hat;
    ComplexVector gamma_hat;
    std::vector<IterationRecord> trace;
    bool converged = false;
};

/// Composite objective
///   0.5*||Y - Z - diag(gamma)*Z||_F^2
///   + lambda1 * sum_i sqrt(sigma_i(Z)^2 + mu^2)      (M terms, zeros included)
///   + lambda2 * (||Re gamma||_1 + ||Im gamma||_1).
double objective(const ComplexMatrix& y, const ComplexMatrix& z,
                 const ComplexVector& gamma, double lambda1, double lambda2,
                 double mu);

/// Closed-form low-rank update: with D = I + diag(gamma) and
/// P = (Z_prev*Z_prev^H + mu^2 I)^(-1/2), solves
/// (D^H D + lambda1 P) Z = D^H Y and verifies the stationarity residual.
ComplexMatrix update_z(const ComplexMatrix& y, const ComplexVector& gamma,
                       const ComplexMatrix& z_prev, double lambda1, double mu);

/// Alternates update_z and the box lasso with geometric mu annealing until
/// the relative objective change drops below params.epsilon or k_max is hit.
DecompositionResult run_decomposition(
    const ComplexMatrix& y, const SolverParams& params,
    const std::optional<std::pair<ComplexMatrix, ComplexVector>>& init =
        std::nullopt);

/// Normalizing divisor sqrt(rows * cols) that puts measurements in the scale
/// the default weights are calibrated for: unit-average-power data divided by
/// it has dominant singular values of order 1, so the rank penalty no longer
/// dwarfs the data and sparsity terms. Solving y / s with
/// (lambda1, lambda2, mu0) equals solving y with
/// (s * lambda1, s^2 * lambda2, s * mu0) up to z_hat scaling by s; the gain
/// vector is unaffected by the change of units.
double measurement_scale(const ComplexMatrix& y);

/// Columns: iteration,objective,mu,stop_ratio,inner_iters
void write_trace_csv(std::ostream& out, const std::vector<IterationRecord>& trace);

} // namespace lrsd
