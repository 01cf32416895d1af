#pragma once

#include "lrsd/types.hpp"

#include <vector>

namespace lrsd {

struct RefineParams {
    /// Gap-detector factor for the initial support taken from the
    /// decomposition's gain estimate.
    double h_factor = 10.0;
    /// A refit gain counts as distorted when it exceeds this many multiples
    /// of its own noise level (estimated from fit-row residuals).
    double detect_sigma = 4.0;
    /// Absolute floor on the refit detection threshold; absorbs rounding on
    /// noise-free data.
    double detect_floor = 1e-8;
    /// Maximum support fixed-point iterations.
    int max_passes = 4;
    /// A leave-one-out removal is accepted when the remaining rows' max
    /// misfit shrinks below this fraction of the previous max.
    double loo_collapse = 0.1;
    /// Relative misfit below which the fit set counts as exactly consistent.
    double consistent_tol = 1e-8;
    /// Rows whose calibration would divide by a gain smaller than this are
    /// left out of the final scan.
    double min_calibrated_gain = 0.1;

    void validate() const;  // throws ConfigError
};

struct RefineResult {
    std::vector<double> doas_deg;        // ascending, grid points
    std::vector<int> distorted_indices;  // ascending
    ComplexVector gamma_refit;           // length M, zero outside the detected set
    bool doa_degenerate = false;
    /// Set when too few rows were believed clean to fit a signal model; the
    /// estimates then come from the low-rank subspace and the initial support.
    bool fallback = false;
};

/// Refines a decomposition into final angle and detection estimates. The
/// initial support comes from the gap detector on gamma_hat. Each pass fits
/// an explicit steering model to the believed-clean rows, prunes rows whose
/// removal makes the remaining fit collapse to consistency (leave-one-out
/// test), refits every row's complex gain against the fitted model, and
/// re-decides the support by comparing each refit gain with its noise level;
/// passes repeat until the support stops changing. Final angles come from
/// the subspace scan over all well-conditioned rows after dividing out the
/// detected gains.
///
/// measurements and z_hat must share units; z_hat is only used for its
/// column space (fallback path). Refit gains are clamped to the same box
/// as the decomposition, [-gamma_max, gamma_max] per real component.
RefineResult refine_solution(const ComplexMatrix& measurements,
                             const ComplexVector& gamma_hat,
                             const ComplexMatrix& z_hat, int num_sources,
                             double spacing_wavelengths, double gamma_max,
                             const std::vector<double>& angles_deg,
                             const RefineParams& params = {});

} // namespace lrsd
