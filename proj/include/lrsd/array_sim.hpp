#pragma once

#include "lrsd/types.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace lrsd {

/// Scenario knobs for a uniform linear array with sparsely distorted sensors.
/// snr_db may be +infinity, which disables noise entirely.
struct ArrayConfig {
    int num_sensors = 8;
    int num_sources = 2;
    std::vector<double> doas_deg = {-10.0, 10.0};
    double spacing_wavelengths = 0.5;
    int snapshots = 100;
    double snr_db = 10.0;
    int num_distorted = 3;
    std::array<double, 2> gain_range = {0.0, 10.0};
    std::array<double, 2> phase_range_deg = {-10.0, 10.0};
    double gamma_max = 10.0;
    std::uint64_t seed = 1;

    /// Throws ConfigError on hard violations; returns soft warnings
    /// (currently only snapshots <= num_sensors).
    std::vector<std::string> validate() const;
};

struct ArrayScenario {
    ArrayConfig config;
    ComplexMatrix steering;              // M x K
    ComplexMatrix signals;               // K x T
    ComplexVector gamma_true;            // M, zero outside distorted_indices
    std::vector<int> distorted_indices;  // sorted, 0-based
    ComplexMatrix noise;                 // M x T
    ComplexMatrix measurements;          // M x T, (I + diag(gamma)) A S + N exactly
};

/// ULA response to a unit plane wave from theta (degrees off broadside):
/// entry m = exp(-j 2*pi * spacing * m * sin(theta)). Requires |theta| < 90.
ComplexVector steering_vector(double theta_deg, int num_sensors,
                              double spacing_wavelengths);

/// Draws signals, distortions and noise for one Monte-Carlo scenario.
/// Deterministic given config.seed.
ArrayScenario generate_scenario(const ArrayConfig& config);

/// Numerical rank of the clean component A*S (singular values above
/// 1e-10 times the largest).
int rank_of_clean(const ArrayScenario& scenario);

} // namespace lrsd
