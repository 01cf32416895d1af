#include "lrsd/array_sim.hpp"

#include "lrsd/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lrsd {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double clamp_abs(double x, double bound) {
    return std::clamp(x, -bound, bound);
}

} // namespace

std::vector<std::string> ArrayConfig::validate() const {
    if (num_sensors < 2) {
        throw ConfigError("num_sensors must be at least 2");
    }
    if (num_sources < 1 || num_sources >= num_sensors) {
        throw ConfigError("num_sources must satisfy 1 <= K < num_sensors");
    }
    if (static_cast<int>(doas_deg.size()) != num_sources) {
        throw ConfigError("doas_deg must list exactly num_sources angles");
    }
    for (std::size_t i = 0; i < doas_deg.size(); ++i) {
        if (!(std::abs(doas_deg[i]) < 90.0)) {
            throw ConfigError("doas_deg entries must lie in (-90, 90)");
        }
        if (i > 0 && !(doas_deg[i] > doas_deg[i - 1])) {
            throw ConfigError("doas_deg must be strictly increasing");
        }
    }
    if (!(spacing_wavelengths > 0.0)) {
        throw ConfigError("spacing_wavelengths must be positive");
    }
    if (snapshots < 1) {
        throw ConfigError("snapshots must be at least 1");
    }
    if (std::isnan(snr_db)) {
        throw ConfigError("snr_db must be a number or +inf");
    }
    if (num_distorted < 0 || num_distorted >= num_sensors) {
        throw ConfigError("num_distorted must satisfy 0 <= num_distorted < num_sensors");
    }
    if (!(gain_range[0] <= gain_range[1]) || gain_range[0] < 0.0) {
        throw ConfigError("gain_range must satisfy 0 <= low <= high");
    }
    if (!(phase_range_deg[0] <= phase_range_deg[1])) {
        throw ConfigError("phase_range_deg must satisfy low <= high");
    }
    if (!(gamma_max > 0.0)) {
        throw ConfigError("gamma_max must be positive");
    }

    std::vector<std::string> warnings;
    if (snapshots <= num_sensors) {
        warnings.push_back("snapshots <= num_sensors: the clean component is "
                           "not overdetermined, recovery may degrade");
    }
    return warnings;
}

ComplexVector steering_vector(double theta_deg, int num_sensors,
                              double spacing_wavelengths) {
    if (!(std::abs(theta_deg) < 90.0)) {
        throw DomainError("steering_vector: |theta_deg| must be < 90");
    }
    const double sin_theta = std::sin(theta_deg * kDegToRad);
    ComplexVector a(num_sensors);
    for (int m = 0; m < num_sensors; ++m) {
        const double phase =
            -2.0 * std::numbers::pi * spacing_wavelengths * m * sin_theta;
        a(m) = Complex(std::cos(phase), std::sin(phase));
    }
    return a;
}

ArrayScenario generate_scenario(const ArrayConfig& config) {
    config.validate();

    const int m = config.num_sensors;
    const int k = config.num_sources;
    const int t = config.snapshots;

    ArrayScenario s;
    s.config = config;

    s.steering.resize(m, k);
    for (int j = 0; j < k; ++j) {
        s.steering.col(j) =
            steering_vector(config.doas_deg[j], m, config.spacing_wavelengths);
    }

    Rng rng(config.seed);

    // Draw order is part of the determinism contract: signals, then the
    // distorted index set, then gamma, then noise.
    s.signals.resize(k, t);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < t; ++j) {
            s.signals(i, j) = rng.complex_gaussian(1.0);
        }
    }

    std::vector<int> pool(m);
    for (int i = 0; i < m; ++i) {
        pool[i] = i;
    }
    for (int i = 0; i < config.num_distorted; ++i) {
        const int j = i + static_cast<int>(rng.next_u64() % (m - i));
        std::swap(pool[i], pool[j]);
    }
    s.distorted_indices.assign(pool.begin(), pool.begin() + config.num_distorted);
    std::sort(s.distorted_indices.begin(), s.distorted_indices.end());

    s.gamma_true = ComplexVector::Zero(m);
    for (int idx : s.distorted_indices) {
        const double gain = rng.uniform(config.gain_range[0], config.gain_range[1]);
        const double phase =
            rng.uniform(config.phase_range_deg[0], config.phase_range_deg[1]) * kDegToRad;
        const Complex g(gain * std::cos(phase), gain * std::sin(phase));
        s.gamma_true(idx) = Complex(clamp_abs(g.real(), config.gamma_max),
                                    clamp_abs(g.imag(), config.gamma_max));
    }

    s.noise.resize(m, t);
    if (std::isinf(config.snr_db)) {
        s.noise.setZero();
    } else {
        const double variance = std::pow(10.0, -config.snr_db / 10.0);
        for (int j = 0; j < t; ++j) {
            for (int i = 0; i < m; ++i) {
                s.noise(i, j) = rng.complex_gaussian(variance);
            }
        }
    }

    const ComplexMatrix clean = s.steering * s.signals;
    s.measurements.resize(m, t);
    for (int j = 0; j < t; ++j) {
        for (int i = 0; i < m; ++i) {
            s.measurements(i, j) =
                clean(i, j) + s.gamma_true(i) * clean(i, j) + s.noise(i, j);
        }
    }
    return s;
}

int rank_of_clean(const ArrayScenario& scenario) {
    const ComplexMatrix clean = scenario.steering * scenario.signals;
    Eigen::JacobiSVD<ComplexMatrix> dec(clean);
    const RealVector& sv = dec.singularValues();
    if (sv.size() == 0) {
        return 0;
    }
    const double cutoff = 1e-10 * sv(0);
    int rank = 0;
    for (Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff && sv(i) > 0.0) {
            ++rank;
        }
    }
    return rank;
}

} // namespace lrsd
