#pragma once

#include "lrsd/types.hpp"

#include <iosfwd>
#include <vector>

namespace lrsd {

struct SpectrumGrid {
    std::vector<double> angles_deg;  // strictly increasing, inside (-90, 90)
    std::vector<double> values;      // nonnegative, same length
};

/// Uniform grid over (-90, 90) exclusive with the given step (degrees).
std::vector<double> uniform_angle_grid(double step_deg = 0.05);

/// Pseudospectrum 1 / (a^H(theta) (I - L L^H) a(theta)) where L spans the
/// signal subspace: the num_sources leading left singular vectors of z_hat.
/// Steering convention matches array_sim. Requires num_sources < M.
SpectrumGrid music_spectrum(const ComplexMatrix& z_hat, int num_sources,
                            const std::vector<double>& angles_deg,
                            double spacing_wavelengths = 0.5);

/// Same evaluation from an explicit M x K orthonormal subspace basis.
SpectrumGrid music_spectrum_from_subspace(const ComplexMatrix& basis,
                                          const std::vector<double>& angles_deg,
                                          double spacing_wavelengths = 0.5);

struct DoaEstimate {
    std::vector<double> doas_deg;  // K angles, ascending
    SpectrumGrid spectrum;
    /// Set when fewer than K strict local maxima exist and the estimate was
    /// padded with the largest remaining grid values.
    bool degenerate = false;
};

/// The num_sources strict local maxima with largest spectrum values.
DoaEstimate estimate_doas(SpectrumGrid spectrum, int num_sources);

/// Two columns: angle_deg,value
void write_spectrum_csv(std::ostream& out, const SpectrumGrid& spectrum);

} // namespace lrsd
