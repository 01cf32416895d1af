#include "lrsd/refine.hpp"

#include "lrsd/array_sim.hpp"
#include "lrsd/detector.hpp"
#include "lrsd/doa.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>

namespace lrsd {

namespace {

// Steering matrix restricted to the given sensor rows of the full array.
ComplexMatrix steering_rows(const std::vector<double>& doas_deg,
                            const std::vector<int>& rows, int num_sensors,
                            double spacing) {
    ComplexMatrix a(static_cast<Index>(rows.size()),
                    static_cast<Index>(doas_deg.size()));
    for (std::size_t k = 0; k < doas_deg.size(); ++k) {
        const ComplexVector full = steering_vector(doas_deg[k], num_sensors, spacing);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            a(static_cast<Index>(r), static_cast<Index>(k)) = full(rows[r]);
        }
    }
    return a;
}

// Subspace scan evaluated on a row subset: the signal subspace comes from
// the subset's own left singular vectors, and the steering vectors keep the
// subset's physical sensor positions.
DoaEstimate estimate_doas_rows(const ComplexMatrix& data, const std::vector<int>& rows,
                               int num_sensors, int num_sources,
                               const std::vector<double>& angles_deg, double spacing) {
    const Eigen::JacobiSVD<ComplexMatrix> svd(data, Eigen::ComputeThinU);
    const ComplexMatrix basis = svd.matrixU().leftCols(num_sources);

    SpectrumGrid grid;
    grid.angles_deg = angles_deg;
    grid.values.resize(angles_deg.size());
    for (std::size_t i = 0; i < angles_deg.size(); ++i) {
        const ComplexVector full = steering_vector(angles_deg[i], num_sensors, spacing);
        ComplexVector a(static_cast<Index>(rows.size()));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            a(static_cast<Index>(r)) = full(rows[r]);
        }
        const ComplexVector projected = a - basis * (basis.adjoint() * a);
        grid.values[i] = 1.0 / std::max(projected.squaredNorm(), 1e-300);
    }
    return estimate_doas(std::move(grid), num_sources);
}

} // namespace

void RefineParams::validate() const {
    if (!(h_factor > 1.0) || !std::isfinite(h_factor)) {
        throw ConfigError("refine: h_factor must be finite and > 1");
    }
    if (!(detect_sigma > 0.0) || !std::isfinite(detect_sigma)) {
        throw ConfigError("refine: detect_sigma must be positive and finite");
    }
    if (!(detect_floor >= 0.0) || !std::isfinite(detect_floor)) {
        throw ConfigError("refine: detect_floor must be nonnegative and finite");
    }
    if (max_passes < 1) {
        throw ConfigError("refine: max_passes must be at least 1");
    }
    if (!(loo_collapse > 0.0) || !(loo_collapse < 1.0)) {
        throw ConfigError("refine: loo_collapse must lie in (0, 1)");
    }
    if (!(consistent_tol >= 0.0) || !std::isfinite(consistent_tol)) {
        throw ConfigError("refine: consistent_tol must be nonnegative and finite");
    }
    if (!(min_calibrated_gain > 0.0) || !(min_calibrated_gain < 1.0)) {
        throw ConfigError("refine: min_calibrated_gain must lie in (0, 1)");
    }
}

RefineResult refine_solution(const ComplexMatrix& measurements,
                             const ComplexVector& gamma_hat,
                             const ComplexMatrix& z_hat, int num_sources,
                             double spacing_wavelengths, double gamma_max,
                             const std::vector<double>& angles_deg,
                             const RefineParams& params) {
    params.validate();
    require_finite(measurements, "refine_solution");
    require_finite(gamma_hat, "refine_solution");
    const int m = static_cast<int>(measurements.rows());
    const Index t_len = measurements.cols();
    if (gamma_hat.size() != m) {
        throw DimensionError("refine_solution: gamma_hat length must match rows");
    }
    if (num_sources < 1 || num_sources >= m) {
        throw DomainError("refine_solution: need 1 <= num_sources < num_sensors");
    }
    if (t_len < num_sources) {
        throw DimensionError("refine_solution: need at least num_sources snapshots");
    }
    if (!(gamma_max > 0.0) || !std::isfinite(gamma_max)) {
        throw DomainError("refine_solution: gamma_max must be positive and finite");
    }

    const DetectionReport initial = detect_distorted(gamma_hat, params.h_factor);

    auto fallback = [&]() {
        const DoaEstimate estimate = estimate_doas(
            music_spectrum(z_hat, num_sources, angles_deg, spacing_wavelengths),
            num_sources);
        RefineResult out;
        out.doas_deg = estimate.doas_deg;
        out.doa_degenerate = estimate.degenerate;
        out.distorted_indices = initial.distorted_indices;
        out.gamma_refit = ComplexVector::Zero(m);
        for (int d : initial.distorted_indices) {
            out.gamma_refit(d) = gamma_hat(d);
        }
        out.fallback = true;
        return out;
    };

    std::vector<char> excluded(static_cast<std::size_t>(m), 0);
    auto clean_rows = [&]() {
        std::vector<int> rows;
        for (int r = 0; r < m; ++r) {
            if (!excluded[static_cast<std::size_t>(r)]) rows.push_back(r);
        }
        return rows;
    };

    for (int d : initial.distorted_indices) {
        excluded[static_cast<std::size_t>(d)] = 1;
    }
    if (static_cast<int>(clean_rows().size()) <= num_sources) {
        return fallback();
    }

    std::vector<int> all_rows(static_cast<std::size_t>(m));
    for (int r = 0; r < m; ++r) all_rows[static_cast<std::size_t>(r)] = r;

    struct SubFit {
        ComplexMatrix model;  // full-array prediction, M x T
        double max_misfit = 0.0;
    };
    auto fit_rows = [&](const std::vector<int>& rows) {
        ComplexMatrix sub(static_cast<Index>(rows.size()), t_len);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            sub.row(static_cast<Index>(r)) = measurements.row(rows[r]);
        }
        const DoaEstimate doas =
            estimate_doas_rows(sub, rows, m, num_sources, angles_deg, spacing_wavelengths);
        const ComplexMatrix a_rows =
            steering_rows(doas.doas_deg, rows, m, spacing_wavelengths);
        const ComplexMatrix signals = a_rows.colPivHouseholderQr().solve(sub);
        SubFit fit;
        fit.model = steering_rows(doas.doas_deg, all_rows, m, spacing_wavelengths) * signals;
        for (int row : rows) {
            const double denom = std::max(measurements.row(row).norm(), 1e-300);
            fit.max_misfit = std::max(
                fit.max_misfit, (measurements.row(row) - fit.model.row(row)).norm() / denom);
        }
        return fit;
    };

    // Alternate between fitting the believed-clean rows and re-deciding the
    // support until it stops changing. Needs room for num_sources + 2 fit
    // rows plus at least one suspect; smaller arrays keep the raw estimates.
    const int max_support = m - num_sources - 2;
    if (max_support < 1) {
        return fallback();
    }
    std::vector<int> support = initial.distorted_indices;
    ComplexMatrix model;
    ComplexVector gamma_all = ComplexVector::Zero(m);
    for (int pass = 0; pass < params.max_passes; ++pass) {
        std::fill(excluded.begin(), excluded.end(), 0);
        for (int d : support) excluded[static_cast<std::size_t>(d)] = 1;

        // Leave-one-out pruning: a fit row is dropped only when the remaining
        // rows become mutually consistent without it (max misfit collapses),
        // which separates a contaminated row from ordinary fit error.
        for (;;) {
            const std::vector<int> clean = clean_rows();
            const SubFit fit = fit_rows(clean);
            model = fit.model;

            if (static_cast<int>(clean.size()) <= num_sources + 2) break;
            if (fit.max_misfit <= params.consistent_tol) break;

            double best_rel = 1.0;
            int best_row = -1;
            for (std::size_t cand = 0; cand < clean.size(); ++cand) {
                std::vector<int> rest;
                rest.reserve(clean.size() - 1);
                for (std::size_t r = 0; r < clean.size(); ++r) {
                    if (r != cand) rest.push_back(clean[r]);
                }
                const double rel = fit_rows(rest).max_misfit / fit.max_misfit;
                if (rel < best_rel) {
                    best_rel = rel;
                    best_row = clean[cand];
                }
            }
            if (best_row >= 0 && best_rel <= params.loo_collapse) {
                excluded[static_cast<std::size_t>(best_row)] = 1;
                continue;
            }
            break;
        }

        // Refit every row gain against the fitted model.
        for (int r = 0; r < m; ++r) {
            Complex cross(0.0, 0.0);
            double power = 0.0;
            for (Index t = 0; t < t_len; ++t) {
                cross += std::conj(model(r, t)) * measurements(r, t);
                power += std::norm(model(r, t));
            }
            const Complex gain = cross / std::max(power, 1e-300) - Complex(1.0, 0.0);
            gamma_all(r) = Complex(std::clamp(gain.real(), -gamma_max, gamma_max),
                                   std::clamp(gain.imag(), -gamma_max, gamma_max));
        }

        // Noise level from fit-row residuals; flag rows whose refit gain
        // stands above its own noise scale.
        const std::vector<int> fit_set = clean_rows();
        double rss = 0.0;
        for (int r : fit_set) {
            rss += (measurements.row(r) - model.row(r)).squaredNorm();
        }
        const double sigma = std::sqrt(
            rss / (static_cast<double>(fit_set.size()) * static_cast<double>(t_len)));

        std::vector<std::pair<double, int>> flagged;
        for (int r = 0; r < m; ++r) {
            const double level = params.detect_sigma * sigma /
                                 std::max(model.row(r).norm(), 1e-300);
            const double threshold = std::max(level, params.detect_floor);
            const double ratio = std::abs(gamma_all(r)) / threshold;
            if (ratio > 1.0) flagged.emplace_back(ratio, r);
        }
        if (static_cast<int>(flagged.size()) > max_support) {
            std::sort(flagged.begin(), flagged.end(), std::greater<>());
            flagged.resize(static_cast<std::size_t>(max_support));
        }
        std::vector<int> next;
        next.reserve(flagged.size());
        for (const auto& [ratio, r] : flagged) next.push_back(r);
        std::sort(next.begin(), next.end());

        if (next == support) break;
        support = std::move(next);
    }

    // Divide out the detected gains and scan all well-conditioned rows.
    RefineResult out;
    out.gamma_refit = ComplexVector::Zero(m);
    for (int d : support) out.gamma_refit(d) = gamma_all(d);
    std::vector<int> kept;
    for (int r = 0; r < m; ++r) {
        if (std::abs(Complex(1.0, 0.0) + out.gamma_refit(r)) >= params.min_calibrated_gain) {
            kept.push_back(r);
        }
    }
    if (static_cast<int>(kept.size()) <= num_sources) {
        return fallback();
    }
    ComplexMatrix calibrated(static_cast<Index>(kept.size()), t_len);
    for (std::size_t r = 0; r < kept.size(); ++r) {
        calibrated.row(static_cast<Index>(r)) =
            measurements.row(kept[r]) / (Complex(1.0, 0.0) + out.gamma_refit(kept[r]));
    }
    const DoaEstimate final_estimate = estimate_doas_rows(
        calibrated, kept, m, num_sources, angles_deg, spacing_wavelengths);
    out.doas_deg = final_estimate.doas_deg;
    out.doa_degenerate = final_estimate.degenerate;
    out.distorted_indices = std::move(support);
    return out;
}

} // namespace lrsd
