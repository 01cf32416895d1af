#include "lrsd/decomposer.hpp"

#include "lrsd/io_util.hpp"

#include <cmath>
#include <ostream>

namespace lrsd {

void SolverParams::validate() const {
    if (!(lambda1 > 0.0)) {
        throw ConfigError("lambda1 must be positive");
    }
    if (!(lambda2 > 0.0)) {
        throw ConfigError("lambda2 must be positive");
    }
    if (!(mu0 > 0.0)) {
        throw ConfigError("mu0 must be positive");
    }
    if (!(alpha > 0.0) || alpha > 1.0) {
        throw ConfigError("alpha must lie in (0, 1]");
    }
    if (!(mu_min > 0.0)) {
        throw ConfigError("mu_min must be positive");
    }
    if (!(gamma_max > 0.0)) {
        throw ConfigError("gamma_max must be positive");
    }
    if (!(epsilon > 0.0)) {
        throw ConfigError("epsilon must be positive");
    }
    if (k_max < 1) {
        throw ConfigError("k_max must be at least 1");
    }
    if (!(inner.tol > 0.0) || inner.max_iter < 1) {
        throw ConfigError("inner solver options invalid");
    }
}

double objective(const ComplexMatrix& y, const ComplexMatrix& z,
                 const ComplexVector& gamma, double lambda1, double lambda2,
                 double mu) {
    if (y.rows() != z.rows() || y.cols() != z.cols() || gamma.size() != y.rows()) {
        throw DimensionError("objective: shape mismatch");
    }
    require_finite(y, "objective");
    require_finite(z, "objective");
    require_finite(gamma, "objective");

    ComplexMatrix residual = y - z;
    for (Index i = 0; i < z.rows(); ++i) {
        residual.row(i) -= gamma(i) * z.row(i);
    }
    const double data_term = 0.5 * residual.squaredNorm();

    // ||[Z, mu*I]||_* = sum over all M eigendirections of sqrt(sigma_i^2 + mu^2);
    // singular values beyond min(M,T) are zero and still contribute mu each.
    Eigen::JacobiSVD<ComplexMatrix> dec(z);
    const RealVector& sv = dec.singularValues();
    double nuclear = 0.0;
    for (Index i = 0; i < sv.size(); ++i) {
        nuclear += std::sqrt(sv(i) * sv(i) + mu * mu);
    }
    nuclear += static_cast<double>(z.rows() - sv.size()) * mu;

    const double l1_term =
        gamma.real().lpNorm<1>() + gamma.imag().lpNorm<1>();
    return data_term + lambda1 * nuclear + lambda2 * l1_term;
}

ComplexMatrix update_z(const ComplexMatrix& y, const ComplexVector& gamma,
                       const ComplexMatrix& z_prev, double lambda1, double mu) {
    if (y.rows() != z_prev.rows() || y.cols() != z_prev.cols() ||
        gamma.size() != y.rows()) {
        throw DimensionError("update_z: shape mismatch");
    }
    require_finite(y, "update_z");
    require_finite(gamma, "update_z");

    const Index m = y.rows();
    ComplexVector d = ComplexVector::Ones(m) + gamma;

    ComplexMatrix system = lambda1 * hermitian_inv_sqrt(z_prev, mu);
    for (Index i = 0; i < m; ++i) {
        system(i, i) += std::norm(d(i));  // D^H D is diagonal with |1+gamma_m|^2
    }

    ComplexMatrix rhs = d.conjugate().asDiagonal() * y;
    ComplexMatrix z = Eigen::LDLT<ComplexMatrix>(system).solve(rhs);

    const double residual = (system * z - rhs).norm();
    const double scale = rhs.norm();
    if (scale > 0.0 && !(residual <= 1e-8 * scale)) {
        throw NumericalError("update_z: stationarity residual too large");
    }
    return z;
}

DecompositionResult run_decomposition(
    const ComplexMatrix& y, const SolverParams& params,
    const std::optional<std::pair<ComplexMatrix, ComplexVector>>& init) {
    params.validate();
    require_finite(y, "run_decomposition");

    const Index m = y.rows();

    DecompositionResult result;
    result.z_hat = init ? init->first : y;
    result.gamma_hat = init ? init->second : ComplexVector::Zero(m);
    if (result.z_hat.rows() != m || result.z_hat.cols() != y.cols() ||
        result.gamma_hat.size() != m) {
        throw DimensionError("run_decomposition: init shape mismatch");
    }

    double mu = params.mu0;
    double f_prev = objective(y, result.z_hat, result.gamma_hat, params.lambda1,
                              params.lambda2, mu);

    for (int k = 1; k <= params.k_max; ++k) {
        result.z_hat = update_z(y, result.gamma_hat, result.z_hat,
                                params.lambda1, mu);

        BoxLassoProblem subproblem(y, result.z_hat, params.lambda2,
                                   params.gamma_max);
        BoxLassoSolution inner =
            solve_box_lasso(subproblem, params.inner, result.gamma_hat);
        result.gamma_hat = inner.gamma;

        const double f = objective(y, result.z_hat, result.gamma_hat,
                                   params.lambda1, params.lambda2, mu);
        const double stop_ratio =
            std::abs(f) < 1e-300 ? 0.0 : std::abs(f - f_prev) / std::abs(f);
        result.trace.push_back(
            {k, f, mu, stop_ratio, inner.iterations});
        if (params.trace_sink) {
            params.trace_sink->push_back(result.trace.back());
        }
        f_prev = f;

        if (stop_ratio <= params.epsilon) {
            result.converged = true;
            break;
        }
        mu = std::max(params.alpha * mu, params.mu_min);
    }
    return result;
}

double measurement_scale(const ComplexMatrix& y) {
    const double cells = static_cast<double>(y.rows()) * static_cast<double>(y.cols());
    return cells > 0.0 ? std::sqrt(cells) : 1.0;
}

void write_trace_csv(std::ostream& out,
                     const std::vector<IterationRecord>& trace) {
    out << "iteration,objective,mu,stop_ratio,inner_iters\n";
    for (const auto& rec : trace) {
        out << rec.iteration << ',' << format_double(rec.objective) << ','
            << format_double(rec.mu) << ',' << format_double(rec.stop_ratio)
            << ',' << rec.inner_iterations << '\n';
    }
}

} // namespace lrsd
