#include "lrsd/detector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lrsd {

DetectionReport detect_distorted(const ComplexVector& gamma_hat, double h_factor) {
    const int m = static_cast<int>(gamma_hat.size());
    if (m < 3) {
        throw DomainError("detect_distorted: need at least 3 sensors");
    }
    if (!(h_factor > 1.0) || !std::isfinite(h_factor)) {
        throw InvalidInputError("detect_distorted: h_factor must be finite and > 1");
    }
    require_finite(gamma_hat, "detect_distorted input");

    std::vector<double> magnitudes(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        magnitudes[static_cast<std::size_t>(i)] = std::abs(gamma_hat(i));
    }

    // Ties keep original index order so results are permutation-stable.
    std::vector<int> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return magnitudes[static_cast<std::size_t>(a)] < magnitudes[static_cast<std::size_t>(b)];
    });

    DetectionReport report;
    report.sorted_magnitudes.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        report.sorted_magnitudes[static_cast<std::size_t>(i)] =
            magnitudes[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
    }

    const auto& sorted = report.sorted_magnitudes;
    const double baseline = sorted[1] - sorted[0];
    // Absolute floor keeps a flat (all-equal) profile from triggering on
    // rounding noise while staying proportionate for large gains.
    const double floor = 1e-12 * std::max(1.0, sorted.back());
    report.gap_threshold = std::max(h_factor * baseline, floor);

    int first_jump = -1;  // sorted position of the smallest distorted entry
    for (int i = 2; i < m; ++i) {
        if (sorted[static_cast<std::size_t>(i)] - sorted[static_cast<std::size_t>(i - 1)] >=
            report.gap_threshold) {
            first_jump = i;
            break;
        }
    }
    if (first_jump < 0) {
        return report;
    }

    report.num_distorted = m - first_jump;
    report.distorted_indices.reserve(static_cast<std::size_t>(report.num_distorted));
    for (int i = first_jump; i < m; ++i) {
        report.distorted_indices.push_back(order[static_cast<std::size_t>(i)]);
    }
    std::sort(report.distorted_indices.begin(), report.distorted_indices.end());
    return report;
}

} // namespace lrsd
