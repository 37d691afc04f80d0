#include "fppinv/stats.hpp"

#include <cmath>
#include <limits>

#include "fppinv/lattice.hpp"

namespace fppinv {

Proportion wilson(std::int64_t successes, std::int64_t trials, double z) {
    if (trials < 1 || successes < 0 || successes > trials) throw DomainError("wilson needs 0 <= successes <= trials, trials >= 1");
    const double n = double(trials);
    const double p = double(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2 * n)) / denom;
    const double half = z / denom * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
    return {successes, trials, p, std::max(0.0, center - half), std::min(1.0, center + half)};
}

MeanEstimate mean_ci(const std::vector<double>& xs, double z) {
    MeanEstimate m;
    m.samples = std::int64_t(xs.size());
    if (xs.empty()) throw DomainError("mean of an empty sample");
    double s = 0;
    for (double x : xs) s += x;
    m.mean = s / double(xs.size());
    if (xs.size() < 2) {
        m.lo = -std::numeric_limits<double>::infinity();
        m.hi = std::numeric_limits<double>::infinity();
        return m;
    }
    double ss = 0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.sd = std::sqrt(ss / double(xs.size() - 1));
    const double half = z * m.sd / std::sqrt(double(xs.size()));
    m.lo = m.mean - half;
    m.hi = m.mean + half;
    return m;
}

}  // namespace fppinv
