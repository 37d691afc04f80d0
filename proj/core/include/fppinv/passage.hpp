#pragma once

#include <optional>
#include <vector>

#include "fppinv/invasion.hpp"
#include "fppinv/lattice.hpp"
#include "fppinv/percolation.hpp"
#include "fppinv/weights.hpp"

namespace fppinv {

struct PassageResult {
    /// Empty means +infinity: no allowed path joins the two sets.
    std::optional<double> value;
    /// One geodesic, from a vertex of A to a vertex of B.
    std::vector<Edge> path;
    bool restricted = false;

    bool reachable() const { return value.has_value(); }
    /// The value with +infinity spelled out, for arithmetic that tolerates it.
    double value_or_infinity() const;
};

/// Multi-source Dijkstra from A to B over the edges of `grid` (only those flagged in
/// `allowed` when given). Among equal-distance predecessors the smallest edge index wins.
PassageResult passage_time(const Grid& grid, const std::vector<double>& weights, const std::vector<Vertex>& A,
                           const std::vector<Vertex>& B, const EdgeMask* allowed = nullptr);

PassageResult passage_time(const WeightModel& model, const LatticeConfig& cfg, const std::vector<Vertex>& A,
                           const std::vector<Vertex>& B, const EdgeMask* allowed = nullptr);

/// T(0, boundary of B(n)).
PassageResult passage_time_to_boundary(const WeightModel& model, const LatticeConfig& cfg, int n);

/// Passage time over invaded edges only.
PassageResult invasion_passage_time(const WeightModel& model, const LatticeConfig& cfg, const InvasionCluster& inv,
                                    const std::vector<Vertex>& A, const std::vector<Vertex>& B);

/// T(0, boundary of B(m)) for m = 0..n from a single Dijkstra run over `grid`, which must
/// contain B(n). Unreachable radii are empty.
std::vector<std::optional<double>> boundary_profile(const Grid& grid, const std::vector<double>& weights, int n,
                                                    const EdgeMask* allowed = nullptr);

/// Sum of weights along a path of config edges.
double path_weight(const WeightModel& model, const LatticeConfig& cfg, const std::vector<Edge>& path);

}  // namespace fppinv
