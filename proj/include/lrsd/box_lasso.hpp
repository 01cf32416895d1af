#pragma once

#include "lrsd/numerics.hpp"

#include <optional>
#include <vector>

namespace lrsd {

/// Real-split form of the sparse-update subproblem for a fixed Z:
///
///   min  0.5*||g_bar - Phi_bar*x||^2 + lambda2*||x||_1
///   s.t. |x_i| <= gamma_max,
///
/// where x = [Re(gamma); Im(gamma)], g = vec(Y - Z), Phi = Z^T (KR) I and
/// Phi_bar = [Re Phi, -Im Phi; Im Phi, Re Phi]. The operator is applied
/// through the structured selector; the dense form exists for oracle tests.
class BoxLassoProblem {
public:
    BoxLassoProblem(const ComplexMatrix& y, const ComplexMatrix& z,
                    double lambda2, double gamma_max);

    Index num_sensors() const { return selector_.cols(); }  // M
    Index dim() const { return 2 * selector_.cols(); }      // 2M
    double lambda2() const { return lambda2_; }
    double gamma_max() const { return gamma_max_; }
    const RealVector& g_bar() const { return g_bar_; }      // length 2MT

    RealVector apply(const RealVector& x) const;            // Phi_bar * x
    RealVector adjoint_apply(const RealVector& r) const;    // Phi_bar^T * r

    /// 0.5*||g_bar - Phi_bar*x||^2 + lambda2*||x||_1 (box not checked here).
    double objective(const RealVector& x) const;

    /// Largest-eigenvalue estimate of Phi_bar^T Phi_bar by power iteration.
    double lipschitz_estimate() const;

    /// Dense 2MT x 2M operator. Oracle tests only.
    RealMatrix dense_operator() const;

private:
    StructuredSelector selector_;
    RealVector g_bar_;
    double lambda2_;
    double gamma_max_;
};

struct BoxLassoOptions {
    double tol = 1e-8;
    int max_iter = 2000;
    /// When set, receives the accepted objective value after every iteration.
    std::vector<double>* objective_history = nullptr;
};

struct BoxLassoSolution {
    ComplexVector gamma;   // length M
    double kkt_residual = 0.0;
    int iterations = 0;
    bool converged = false;
    double objective = 0.0;
};

/// Splits a complex vector into [Re; Im] and back.
RealVector real_split(const ComplexVector& v);
ComplexVector from_real_split(const RealVector& x);

/// Max-norm violation of the first-order optimality conditions at x:
/// with r = Phi_bar^T (Phi_bar*x - g_bar), interior nonzero coordinates need
/// r_i + lambda2*sign(x_i) = 0, zeros need |r_i| <= lambda2, and coordinates
/// at +/-gamma_max need the residual sign of an active box multiplier.
double kkt_residual(const BoxLassoProblem& problem, const RealVector& x);

/// Accelerated proximal gradient with momentum restart on objective
/// increase; restart steps are plain proximal steps, monotone up to
/// rounding. The proximal map is the coordinatewise clip of the soft
/// threshold, so iterates stay feasible throughout. Hitting max_iter
/// returns the last iterate flagged as non-converged.
BoxLassoSolution solve_box_lasso(
    const BoxLassoProblem& problem, const BoxLassoOptions& options = {},
    const std::optional<ComplexVector>& warm_start = std::nullopt);

} // namespace lrsd
