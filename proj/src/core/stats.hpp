#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace prodplan {

/// Pairwise (cascade) summation. The result depends only on the order of the
/// input, never on how the values were produced.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

struct SampleMoments {
    double mean = 0.0;
    double std_error = 0.0;
};

inline SampleMoments sample_moments(std::span<const double> v) {
    SampleMoments out;
    const std::size_t n = v.size();
    if (n == 0) return out;
    out.mean = pairwise_sum(v) / static_cast<double>(n);
    if (n < 2) return out;
    double ss = 0.0;
    // Two-pass variance; the sum of squared deviations is small enough that
    // naive accumulation in index order is deterministic and accurate.
    for (double x : v) ss += (x - out.mean) * (x - out.mean);
    out.std_error = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
    return out;
}

} // namespace prodplan
