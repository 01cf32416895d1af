#include "lrsd/doa.hpp"

#include "lrsd/array_sim.hpp"
#include "lrsd/io_util.hpp"
#include "lrsd/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <utility>

namespace lrsd {

std::vector<double> uniform_angle_grid(double step_deg) {
    if (!(step_deg > 0.0) || !std::isfinite(step_deg)) {
        throw InvalidInputError("uniform_angle_grid: step must be positive and finite");
    }
    std::vector<double> angles;
    // Endpoints are excluded: the steering model degenerates at +/-90.
    for (int i = 0;; ++i) {
        const double theta = -90.0 + static_cast<double>(i + 1) * step_deg;
        if (theta >= 90.0) break;
        angles.push_back(theta);
    }
    return angles;
}

namespace {

void check_angles(const std::vector<double>& angles_deg) {
    if (angles_deg.empty()) {
        throw InvalidInputError("music spectrum: empty angle grid");
    }
    for (std::size_t i = 0; i < angles_deg.size(); ++i) {
        if (!std::isfinite(angles_deg[i]) || std::abs(angles_deg[i]) >= 90.0) {
            throw DomainError("music spectrum: grid angles must lie inside (-90, 90)");
        }
        if (i > 0 && !(angles_deg[i] > angles_deg[i - 1])) {
            throw InvalidInputError("music spectrum: grid must be strictly increasing");
        }
    }
}

SpectrumGrid spectrum_from_projector(const ComplexMatrix& basis,
                                     const std::vector<double>& angles_deg,
                                     double spacing_wavelengths) {
    const int m = static_cast<int>(basis.rows());
    SpectrumGrid grid;
    grid.angles_deg = angles_deg;
    grid.values.resize(angles_deg.size());
    for (std::size_t i = 0; i < angles_deg.size(); ++i) {
        const ComplexVector a = steering_vector(angles_deg[i], m, spacing_wavelengths);
        const ComplexVector projected = basis.adjoint() * a;
        // a^H (I - L L^H) a = ||a||^2 - ||L^H a||^2, real and >= 0 up to rounding.
        double denom = a.squaredNorm() - projected.squaredNorm();
        denom = std::max(denom, 1e-300);
        grid.values[i] = 1.0 / denom;
    }
    return grid;
}

} // namespace

SpectrumGrid music_spectrum_from_subspace(const ComplexMatrix& basis,
                                          const std::vector<double>& angles_deg,
                                          double spacing_wavelengths) {
    if (basis.rows() == 0 || basis.cols() == 0 || basis.cols() >= basis.rows()) {
        throw InvalidInputError("music spectrum: basis must be M x K with 0 < K < M");
    }
    require_finite(basis, "music spectrum basis");
    check_angles(angles_deg);
    return spectrum_from_projector(basis, angles_deg, spacing_wavelengths);
}

SpectrumGrid music_spectrum(const ComplexMatrix& z_hat, int num_sources,
                            const std::vector<double>& angles_deg,
                            double spacing_wavelengths) {
    if (z_hat.rows() == 0 || z_hat.cols() == 0) {
        throw InvalidInputError("music spectrum: empty matrix");
    }
    if (num_sources <= 0 || num_sources >= z_hat.rows()) {
        throw InvalidInputError("music spectrum: need 0 < num_sources < num_sensors");
    }
    require_finite(z_hat, "music spectrum input");
    check_angles(angles_deg);
    const Svd decomposition = svd(z_hat);
    const ComplexMatrix basis = decomposition.left.leftCols(num_sources);
    return spectrum_from_projector(basis, angles_deg, spacing_wavelengths);
}

DoaEstimate estimate_doas(SpectrumGrid spectrum, int num_sources) {
    const std::size_t n = spectrum.angles_deg.size();
    if (n != spectrum.values.size() || n == 0) {
        throw InvalidInputError("estimate_doas: malformed spectrum");
    }
    if (num_sources <= 0 || static_cast<std::size_t>(num_sources) > n) {
        throw InvalidInputError("estimate_doas: invalid source count");
    }

    std::vector<std::size_t> peaks;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (spectrum.values[i] > spectrum.values[i - 1] &&
            spectrum.values[i] > spectrum.values[i + 1]) {
            peaks.push_back(i);
        }
    }
    std::stable_sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) {
        return spectrum.values[a] > spectrum.values[b];
    });

    DoaEstimate estimate;
    const std::size_t k = static_cast<std::size_t>(num_sources);
    std::vector<bool> taken(n, false);
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < peaks.size() && chosen.size() < k; ++i) {
        chosen.push_back(peaks[i]);
        taken[peaks[i]] = true;
    }
    if (chosen.size() < k) {
        // Not enough strict maxima (flat or monotone spectrum); pad with the
        // largest remaining values so the estimate always has K entries.
        estimate.degenerate = true;
        std::vector<std::size_t> rest;
        for (std::size_t i = 0; i < n; ++i) {
            if (!taken[i]) rest.push_back(i);
        }
        std::stable_sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) {
            return spectrum.values[a] > spectrum.values[b];
        });
        for (std::size_t i = 0; i < rest.size() && chosen.size() < k; ++i) {
            chosen.push_back(rest[i]);
        }
    }

    estimate.doas_deg.reserve(chosen.size());
    for (std::size_t idx : chosen) {
        estimate.doas_deg.push_back(spectrum.angles_deg[idx]);
    }
    std::sort(estimate.doas_deg.begin(), estimate.doas_deg.end());
    estimate.spectrum = std::move(spectrum);
    return estimate;
}

void write_spectrum_csv(std::ostream& out, const SpectrumGrid& spectrum) {
    out << "angle_deg,value\n";
    for (std::size_t i = 0; i < spectrum.angles_deg.size(); ++i) {
        out << format_double(spectrum.angles_deg[i]) << ','
            << format_double(spectrum.values[i]) << '\n';
    }
}

} // namespace lrsd
