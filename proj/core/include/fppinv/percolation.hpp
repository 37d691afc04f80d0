#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "fppinv/lattice.hpp"
#include "fppinv/planar.hpp"
#include "fppinv/weights.hpp"

namespace fppinv {

class UnionFind {
public:
    explicit UnionFind(std::int64_t n) : parent_(std::size_t(n)), size_(std::size_t(n), 1) {
        std::iota(parent_.begin(), parent_.end(), std::int64_t{0});
    }

    std::int64_t find(std::int64_t x) {
        while (parent_[std::size_t(x)] != x) {
            parent_[std::size_t(x)] = parent_[std::size_t(parent_[std::size_t(x)])];
            x = parent_[std::size_t(x)];
        }
        return x;
    }

    bool unite(std::int64_t a, std::int64_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size_[std::size_t(a)] < size_[std::size_t(b)]) std::swap(a, b);
        parent_[std::size_t(b)] = a;
        size_[std::size_t(a)] += size_[std::size_t(b)];
        return true;
    }

    bool connected(std::int64_t a, std::int64_t b) { return find(a) == find(b); }
    std::int64_t size_of(std::int64_t x) { return size_[std::size_t(find(x))]; }

private:
    std::vector<std::int64_t> parent_;
    std::vector<std::int64_t> size_;
};

/// Per-edge flags over a grid, indexed by Grid::edge_index.
using EdgeMask = std::vector<std::uint8_t>;

/// Edges of the config box with omega <= p.
EdgeMask open_mask(const LatticeConfig& cfg, double p);

/// Open clusters of a region: `label[v]` is the representative vertex index (region grid)
/// of v's cluster.
struct Partition {
    Grid grid;
    std::vector<std::int64_t> label;

    bool same(Vertex u, Vertex v) const {
        return label[std::size_t(grid.vertex_index(u))] == label[std::size_t(grid.vertex_index(v))];
    }
    std::int64_t cluster_of(Vertex v) const { return label[std::size_t(grid.vertex_index(v))]; }
    std::int64_t count() const;
};

Partition clusters_at_level(const LatticeConfig& cfg, double p, const Box& region);

/// Open path inside `rect` from its left side to its right side.
bool has_left_right_crossing(const LatticeConfig& cfg, double p, const Box& rect);
/// Closed dual path inside the dual of `rect` from the face row below it to the face row above it.
bool has_top_bottom_dual_crossing(const LatticeConfig& cfg, double p, const Box& rect);

/// A vertex self-avoiding cycle, counterclockwise, listed without repeating the start.
struct Circuit {
    std::vector<Vertex> vertices;
    double level = 0.0;

    std::vector<Edge> edges() const;
    std::vector<HalfPoint> polygon() const;
    bool contains_edge(const Edge& e) const;
    /// Strict interior test for a half-integer point not on the circuit.
    bool surrounds(HalfPoint p) const;
};

std::optional<Circuit> outermost_circuit(const LatticeConfig& cfg, double p, const Annulus& ann);
std::optional<Circuit> innermost_circuit(const LatticeConfig& cfg, double p, const Annulus& ann);

/// Mask-driven variants: `open` is indexed by `grid` edges and the annulus must lie in
/// the grid box. Only edges that are open, inside the annulus and not incident to the
/// origin can carry the circuit.
std::optional<Circuit> outermost_circuit(const Grid& grid, const EdgeMask& open, const Annulus& ann);
std::optional<Circuit> innermost_circuit(const Grid& grid, const EdgeMask& open, const Annulus& ann);

/// Independent validity check: closed, vertex self-avoiding, every edge open at the level
/// and inside the annulus, winding number 1 around the origin.
bool verify_circuit(const LatticeConfig& cfg, const Circuit& c, const Annulus& ann);

/// True iff the edges flagged in `blocked` separate the origin from infinity, i.e. the
/// face (0,0)-(1,1) cannot reach the outside of the grid box without crossing them.
bool separates_origin(const Grid& grid, const EdgeMask& blocked);

struct DualPath {
    std::vector<HalfPoint> vertices;
    double level = 0.0;
};

/// Closed dual path between two dual vertex sets using dual edges of region edges.
bool dual_connected(const LatticeConfig& cfg, double p, const std::vector<HalfPoint>& a,
                    const std::vector<HalfPoint>& b, const Box& region);
std::optional<DualPath> dual_path(const LatticeConfig& cfg, double p, const std::vector<HalfPoint>& a,
                                  const std::vector<HalfPoint>& b, const Box& region);

/// Open path from `source` to the boundary of B(K * r), r the largest norm in `source`.
/// A monotone finite stand-in for a connection to infinity.
bool connected_to_far_boundary(const LatticeConfig& cfg, double p, const std::vector<Vertex>& source, int K);
/// Same with source = B(r).
bool box_connected_to_far_boundary(const LatticeConfig& cfg, double p, int r, int K);

/// Two vertex-disjoint (except at the origin) open paths from 0 to the boundary of B(n) at
/// `p_open`, and two vertex-disjoint closed dual paths from (1/2,1/2) to the dual boundary
/// at `p_closed`.
bool four_arm_event(const LatticeConfig& cfg, double p_open, double p_closed, int n);
bool two_open_arms(const LatticeConfig& cfg, double p, int n);
bool two_closed_dual_arms(const LatticeConfig& cfg, double p, int n);

}  // namespace fppinv
