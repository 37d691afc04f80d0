#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fppinv/invasion.hpp"
#include "fppinv/passage.hpp"
#include "fppinv/percolation.hpp"
#include "fppinv/scaling.hpp"
#include "fppinv/stats.hpp"
#include "fppinv/weights.hpp"

namespace fppinv {

struct AlphaBeta {
    double alpha = 0.0;
    double beta = 0.0;
    double r = 0.0;  // min_k (q_k - 1/2) / (q_{k+1} - 1/2)
};

/// 1/2 + alpha (q_{k+1} - 1/2) < 1/2 + beta (q_k - 1/2) for every consecutive pair.
bool alpha_beta_valid(const std::vector<double>& q, double alpha, double beta);

/// beta = 2 / (1 + r), alpha = (1 - margin) beta r. Throws DomainError when r <= 1.
AlphaBeta choose_alpha_beta(const std::vector<double>& q, double margin = 0.05);

/// Axis-aligned box with half-integer corners, in doubled coordinates.
struct HalfBox {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;
    int y1 = 0;
    bool contains(HalfPoint p) const { return p.x2 >= x0 && p.x2 <= x1 && p.y2 >= y0 && p.y2 <= y1; }
    /// An edge lies in the box when its midpoint does.
    bool contains(const Edge& e) const { return contains(e.midpoint()); }
};

struct EkSpec {
    int k = 0;
    double alpha = 0.0;
    double beta = 0.0;
    double q_k = 0.0;
    double q_k1 = 0.0;
    int K = 3;

    static EkSpec make(int k, const std::vector<double>& q, const AlphaBeta& ab, int K = 3);

    int scale() const;  // 3^k
    /// B_1..B_4 for i = 1..4.
    HalfBox box(int i) const;
    /// Open interval for omega_{e_i}.
    std::pair<double, double> interval(int i) const;
    /// Radius of the boundary standing in for infinity: K 3^{k+3}.
    int far_radius() const { return K * 27 * scale(); }
};

struct EkWitness {
    Circuit gamma11;  // in Ann(3^k, 3^{k+1})
    Circuit gamma21;  // in Ann(3^{k+2}, 3^{k+3})
    std::array<Edge, 4> e;
    std::array<Vertex, 4> u;  // endpoint on the gamma11 side
    std::array<Vertex, 4> v;
    std::array<double, 4> omega{};
    /// gamma11->u1, v1->u2, v2->u3, v3->gamma21, gamma11->u4, v4->gamma21.
    std::array<std::vector<Vertex>, 6> open_paths;
    DualPath gamma12, gamma22, gamma13, gamma23;
    std::vector<Vertex> far_path;
};

/// First witness in canonical edge order, or none. Edges are searched in the full boxes
/// B_i; infinity is the boundary of B(K 3^{k+3}); only edges of that box are consulted.
std::optional<EkWitness> detect_E_k(const LatticeConfig& cfg, const EkSpec& spec);

struct WitnessCheck {
    bool ok = true;
    std::vector<std::string> failures;
};

/// Re-checks every condition of the event from raw omega values.
WitnessCheck verify_witness(const LatticeConfig& cfg, const EkSpec& spec, const EkWitness& w);

struct CircuitPair {
    Circuit C;  // outermost 1/2-open circuit in Ann(3^k, 3^{k+1})
    Circuit D;  // innermost 1/2-open circuit in Ann(3^{k+2}, 3^{k+3})
};

std::optional<CircuitPair> circuit_pair(const LatticeConfig& cfg, int k);

struct GainReport {
    double t_inv = 0.0;
    double t = 0.0;
    double inv_bound = 0.0;  // 3 F^{-1}(q_{k+1})
    double t_bound = 0.0;    // F^{-1}(q_k)
    bool inv_ok = false;
    bool t_ok = false;
    bool in_G = false;
    bool gain_ok = false;  // t_inv - t >= F^{-1}(q_{k+1}), meaningful when in_G
};

GainReport check_gain_on_Ek(const WeightModel& model, const LatticeConfig& cfg, const InvasionCluster& inv,
                            const EkSpec& spec, const CircuitPair& pair);

/// {k : x_k <= 2 x_{k+1}} (or < with `strict`). Throws on increasing or negative input.
std::vector<int> good_indices(const std::vector<double>& x, bool strict = false);

template <class T>
struct GoodIndexBound {
    T lhs{};
    T rhs{};
    bool holds = false;
    std::vector<int> G;
};

/// sum_{k<=n} x_k <= 3 x_0 + 3 sum_{k in G, k<=n} x_{k+1}, G = {k : x_k < 2 x_{k+1}}; a pair of
/// zeros counts as in G.
template <class T>
GoodIndexBound<T> good_index_bound(const std::vector<T>& x, int n) {
    if (n < 0 || int(x.size()) <= n + 1) throw DomainError("good_index_bound needs n >= 0 and length > n + 1");
    GoodIndexBound<T> r;
    T three(3), two(2);
    for (int k = 0; k <= n; ++k) {
        r.lhs += x[std::size_t(k)];
        const T& a = x[std::size_t(k)];
        const T& b = x[std::size_t(k + 1)];
        if (a < two * b || (a == T(0) && b == T(0))) {
            r.G.push_back(k);
            r.rhs += x[std::size_t(k + 1)];
        }
    }
    r.rhs = three * x[0] + three * r.rhs;
    r.holds = r.lhs <= r.rhs;
    return r;
}

struct EventASpec {
    double a = 1.0;
    double b = 2.0;
    int R = 20;
    int outer = -1;  // defaults to 4R

    int outer_radius() const { return outer < 0 ? 4 * R : outer; }
    /// Throws DomainError unless 0 < a < b, R a positive multiple of 10, R >= 10 b / a, outer >= 2R.
    void validate() const;
};

/// Atoms {0: 1/2, 3a/4: 1/6, a: 1/6, b: 1/6}; the event-A table uses omega-preimage midpoints.
WeightModel event_A_model(const EventASpec& spec);

/// Deterministic configuration on B(outer) realizing the event.
LatticeConfig build_event_A_config(const EventASpec& spec);

struct EventARow {
    int n = 0;
    double T = 0.0;
    double T_inv = 0.0;
    double gap = 0.0;
};

struct EventAReport {
    std::vector<EventARow> rows;  // n = R .. 2R
    std::int64_t invasion_steps = 0;
    bool gap_at_least_b = false;
    bool gap_constant = false;
};

/// Invades until the boundary of B(outer) is touched, then evaluates both passage times
/// for n = R .. 2R.
EventAReport verify_event_A(const WeightModel& model, const LatticeConfig& cfg, const EventASpec& spec);

/// The hand-painted k = 0 configuration: levels q = (0.8, 0.6), box B(81), K = 3.
struct PaintedEk {
    std::vector<double> q;
    AlphaBeta ab;
    EkSpec spec;
    LatticeConfig cfg;
};

PaintedEk painted_ek_config();

struct GapOptions {
    std::int64_t samples = 100;
    std::uint64_t seed = 1;
    int K = 3;
    int jobs = 1;
    int box_factor = 16;      // config box B(box_factor * n)
    int max_enlargements = 3;  // box doublings tried after a truncation
    int M = -1;               // stabilization radius, default 3n
    std::int64_t window = -1;  // stabilization window, default 4 |E(B(n))|
    bool detect_events = true;
};

struct GapSample {
    std::int64_t index = 0;
    std::uint64_t seed = 0;
    int box_radius = 0;
    int truncations = 0;
    double T = 0.0;
    double T_inv = 0.0;
    double diff = 0.0;
    std::int64_t invasion_steps = 0;
    std::int64_t last_reentry = -1;
    std::vector<int> event;              // per k: 1 detected, 0 not
    std::vector<int> witness_ok;         // per k: re-verification result when detected
    std::vector<double> circuit_gap;     // per k: T^inv(C,D) - T(C,D), NaN when unavailable
    std::vector<int> gain_ok;            // per k: 1/0 when the event occurred with k in G, -1 otherwise
    std::array<double, 3> decoupling{};  // per residue i
    bool decoupling_ok = true;
    bool monotone_ok = true;  // T(0, boundary of B(m)) nondecreasing for m <= n
    bool failed = false;      // truncated at every box size
};

struct GapEstimate {
    int n = 0;
    GapOptions options;
    std::vector<GapSample> samples;
    MeanEstimate T;
    MeanEstimate T_inv;
    MeanEstimate diff;
    PartialSums sums;
    std::int64_t truncations = 0;
    std::int64_t failures = 0;
    std::vector<Proportion> event_freq;  // per k
    std::int64_t invariant_violations = 0;
    std::int64_t gain_failures = 0;  // events with k in G whose gain bound failed
};

/// Monte Carlo estimate of E[T^inv(0, boundary of B(n)) - T(0, boundary of B(n))]. S_2 is NaN
/// when q does not reach floor(log3 n); events need q up to k_max + 1.
GapEstimate estimate_gap(const WeightModel& model, int n, const std::vector<double>& q, const AlphaBeta& ab,
                         const GapOptions& opt);

}  // namespace fppinv
