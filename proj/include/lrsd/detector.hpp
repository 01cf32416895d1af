#pragma once

#include "lrsd/types.hpp"

#include <vector>

namespace lrsd {

struct DetectionReport {
    int num_distorted = 0;
    std::vector<int> distorted_indices;     // 0-based sensor indices, ascending
    std::vector<double> sorted_magnitudes;  // |gamma| ascending
    double gap_threshold = 0.0;             // h used for the gap scan
};

/// Gap detector on the sorted magnitudes of gamma_hat. The baseline gap d is
/// the difference between the two smallest magnitudes; a jump of at least
/// h = max(h_factor * d, 1e-12 * max(1, largest magnitude)) at sorted
/// position i (counted from the third entry upward) marks that entry and
/// everything above it as distorted. No jump means no distorted sensors.
/// Requires at least 3 sensors and h_factor > 1.
DetectionReport detect_distorted(const ComplexVector& gamma_hat, double h_factor = 10.0);

} // namespace lrsd
