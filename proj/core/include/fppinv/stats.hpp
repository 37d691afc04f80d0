#pragma once

#include <cstdint>
#include <vector>

namespace fppinv {

inline constexpr double kZ95 = 1.959963984540054;
inline constexpr double kZ99 = 2.5758293035489004;

/// A frequency with its Wilson score interval.
struct Proportion {
    std::int64_t successes = 0;
    std::int64_t trials = 0;
    double estimate = 0.0;
    double lo = 0.0;
    double hi = 1.0;
};

Proportion wilson(std::int64_t successes, std::int64_t trials, double z = kZ95);

/// Sample mean with a normal-approximation interval; fewer than two samples give an
/// unbounded interval.
struct MeanEstimate {
    std::int64_t samples = 0;
    double mean = 0.0;
    double sd = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

MeanEstimate mean_ci(const std::vector<double>& xs, double z = kZ95);

}  // namespace fppinv
