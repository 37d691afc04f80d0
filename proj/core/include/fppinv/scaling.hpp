#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fppinv/stats.hpp"
#include "fppinv/weights.hpp"

namespace fppinv {

/// Seed of the sample stream used at one scale. Independent of p, so estimates at
/// different p share their uniforms (common random numbers) and inherit monotonicity.
std::uint64_t scale_seed(std::uint64_t seed, std::int64_t n, std::int64_t m = 0);

struct SigmaEstimate {
    int n = 0;
    int m = 0;
    double p = 0.0;
    std::uint64_t seed = 0;
    Proportion freq;
};

/// P(open left-right crossing of [0,n] x [0,m]) with a Wilson interval.
SigmaEstimate estimate_sigma(int n, int m, double p, std::int64_t samples, std::uint64_t seed, int jobs = 1,
                             double z = kZ95);

struct SearchOptions {
    double epsilon = 0.05;
    int max_scale = 1024;
    std::int64_t base_samples = 200;
    std::int64_t max_samples = 3200;
    double z = kZ95;
    int jobs = 1;
};

struct ScaleProbe {
    int n = 0;
    bool passed = false;
    Proportion freq;
};

struct LEstimate {
    double p = 0.0;
    bool resolved = false;
    int L = -1;           // smallest passing probe, when resolved
    int bracket_lo = 0;   // largest failing probe below L (0 when n = 1 passes)
    std::vector<ScaleProbe> probes;
};

/// Noisy predicate used by the scale searches: sigma(n,n,p) > 1 - epsilon is accepted only
/// when the lower Wilson bound clears it; undecided probes double their samples up to the cap.
ScaleProbe probe_scale(int n, double p, std::uint64_t seed, const SearchOptions& opt);

/// Doubling then bisection over n for the smallest n with sigma(n,n,p) > 1 - epsilon.
LEstimate estimate_L(double p, std::uint64_t seed, const SearchOptions& opt = {});

struct PnEstimate {
    int n = 0;
    double p_hat = 1.0;  // upper end of the final bracket
    double lo = 0.5;
    double hi = 1.0;
    bool degenerate = false;  // the predicate held at every probe
    std::vector<std::pair<double, LEstimate>> probes;
};

/// Bisection on p in (1/2, 1] of the predicate "L(p) <= n" to absolute tolerance `tol`.
PnEstimate estimate_p_n(int n, std::uint64_t seed, double tol = 0.005, const SearchOptions& opt = {});

/// q_k = p_{3^k} for k = 0..k_max.
std::vector<PnEstimate> q_sequence(int k_max, std::uint64_t seed, double tol = 0.005, const SearchOptions& opt = {});

struct Pi4Estimate {
    int n = 0;
    double p = 0.5;
    std::uint64_t seed = 0;
    Proportion freq;
};

Pi4Estimate estimate_pi4(int n, std::int64_t samples, std::uint64_t seed, int jobs = 1, double p = 0.5,
                         double z = kZ95);

/// Exact four-arm probability at n = 1 from all 2^12 open/closed patterns of B(1), p = 1/2.
double exact_pi4_n1();

struct ScalingRow {
    double p = 0.0;
    LEstimate L;
    Pi4Estimate pi4;
    double product = 0.0;
    double product_lo = 0.0;
    double product_hi = 0.0;
};

struct ScalingRelation {
    std::vector<ScalingRow> rows;
    double band = 10.0;
    double spread = 0.0;  // max product / min product
    bool within_band = false;
};

/// L(p)^2 * pi4(L(p)) * (p - 1/2) per grid point, and whether the products share a band.
ScalingRelation check_scaling_relation(const std::vector<double>& p_grid, std::uint64_t seed,
                                       std::int64_t pi4_samples, double band = 10.0,
                                       const SearchOptions& opt = {});

struct PartialSums {
    int n = 0;
    double s1 = 0.0;
    double s2 = 0.0;
    double ratio = 0.0;  // s2 / s1, zero when s1 vanishes
};

/// Floor of log_b(n) by integer division.
int floor_log(std::int64_t n, int base);

/// S1 = sum_{k=1}^{floor log2 n} F^{-1}(1/2 + 2^-k); S2 = sum_{k=1}^{floor log3 n} F^{-1}(q_k).
PartialSums partial_sums(const WeightModel& model, int n, const std::vector<double>& q);

/// CSV rows `quantity,scale,p,estimate,ci_lo,ci_hi,samples,seed`.
void write_scaling_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const std::string& quantity, double scale, double p, double estimate,
                   double lo, double hi, std::int64_t samples, std::uint64_t seed);

/// Reads `k,q` pairs (extra columns ignored, '#' comments skipped) into q_0, q_1, ...
std::vector<double> read_q_table(std::istream& is);

}  // namespace fppinv
