#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "fppinv/lattice.hpp"
#include "fppinv/percolation.hpp"
#include "fppinv/weights.hpp"

namespace fppinv {

/// The invasion reached the edge of the config box before its stop rule was satisfied.
class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& what, std::int64_t steps) : std::runtime_error(what), steps_(steps) {}
    std::int64_t steps() const { return steps_; }

private:
    std::int64_t steps_;
};

struct StopRule {
    enum class Kind { Budget, Touch, Stabilize };
    Kind kind = Kind::Budget;
    std::int64_t budget = 0;
    int M = 0;
    int n = 0;
    std::int64_t window = 0;
    bool confined = false;

    /// Stop after exactly `steps` invaded edges. With `confined`, the box is the whole graph
    /// and reaching its boundary is not a truncation.
    static StopRule steps(std::int64_t steps, bool confined = false);
    /// Stop as soon as an invaded vertex lies on the boundary of B(M).
    static StopRule touch(int M);
    /// After touching the boundary of B(M), stop once `window` consecutive steps invade no
    /// edge of B(n). Defaults: M = 3n, window = 4 |E(B(n))|.
    static StopRule stabilize(int n, int M = -1, std::int64_t window = -1);
};

enum class StopReason { Budget, Touched, Stabilized };

struct InvasionCluster {
    Box box;
    std::vector<Edge> edges;         // invasion order e_1, e_2, ...
    std::vector<double> omegas;      // omega of e_i, the boundary minimum at step i
    std::vector<std::int64_t> edge_ids;  // config-grid indices of e_i
    std::vector<std::uint8_t> invaded;   // per config-grid edge
    std::vector<std::uint8_t> reached;   // per config-grid vertex

    StopReason reason = StopReason::Budget;
    std::int64_t steps = 0;
    double max_omega = 0.0;
    std::int64_t touch_step = -1;        // first step touching the boundary of B(M)
    std::int64_t last_reentry_step = -1;  // last step invading an edge of B(n), rule (c)
    int max_radius = 0;

    bool contains(const Edge& e) const;
    bool contains(Vertex v) const;
};

/// Greedy invasion from the origin: each step invades the minimum-omega edge with an
/// endpoint in the invaded vertex set, ties broken by config-grid edge index.
InvasionCluster invade(const LatticeConfig& cfg, const StopRule& stop);

/// Invaded edges with both endpoints in `b`, in invasion order.
std::vector<Edge> invaded_subgraph(const InvasionCluster& inv, const Box& b);
/// Invaded edges as a mask over `grid` edges.
EdgeMask invaded_mask(const InvasionCluster& inv, const Grid& grid);

/// For each circuit, whether every one of its edges was invaded.
std::vector<bool> check_circuit_containment(const LatticeConfig& cfg, const InvasionCluster& inv,
                                            const std::vector<Circuit>& circuits);

/// Replay check: every recorded step invaded the boundary minimum under the tie order.
bool replay_is_greedy(const LatticeConfig& cfg, const InvasionCluster& inv);

/// One line per step: `step x1 y1 x2 y2 omega`.
void write_trace(std::ostream& os, const InvasionCluster& inv);

std::string to_string(StopReason r);

}  // namespace fppinv
