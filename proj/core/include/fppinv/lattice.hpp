#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fppinv {

/// Thrown when an operation's precondition on its arguments is violated.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Vertex {
    int x = 0;
    int y = 0;
    auto operator<=>(const Vertex&) const = default;
};

inline int linf_norm(Vertex v) { return std::max(v.x < 0 ? -v.x : v.x, v.y < 0 ? -v.y : v.y); }

/// A point with half-integer coordinates, stored doubled so arithmetic stays exact.
/// Primal vertices have even coordinates; dual vertices x + (1/2,1/2) have odd ones.
struct HalfPoint {
    int x2 = 0;
    int y2 = 0;
    auto operator<=>(const HalfPoint&) const = default;

    static HalfPoint of(Vertex v) { return {2 * v.x, 2 * v.y}; }
};

/// Nearest-neighbour edge of Z^2 in canonical form (a < b lexicographically).
struct Edge {
    Vertex a;
    Vertex b;
    auto operator<=>(const Edge&) const = default;

    /// Canonicalizes the endpoint order; throws DomainError if u, v are not adjacent.
    static Edge between(Vertex u, Vertex v);

    bool horizontal() const { return a.y == b.y; }
    HalfPoint midpoint() const { return {a.x + b.x, a.y + b.y}; }
    bool has_endpoint(Vertex v) const { return a == v || b == v; }
    Vertex other(Vertex v) const { return a == v ? b : a; }
};

/// The dual edge e* bisecting a primal edge, as a pair of dual vertices (p < q).
struct DualEdge {
    HalfPoint p;
    HalfPoint q;
    auto operator<=>(const DualEdge&) const = default;
};

DualEdge dual_of(const Edge& e);
Edge primal_of(const DualEdge& d);

/// Dual vertex x* = x + (1/2, 1/2).
inline HalfPoint dual_vertex_of(Vertex v) { return {2 * v.x + 1, 2 * v.y + 1}; }

/// Axis-aligned box of lattice vertices [x0,x1] x [y0,y1].
struct Box {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;
    int y1 = 0;
    auto operator<=>(const Box&) const = default;

    /// B(n) = [-n,n]^2.
    static Box centered(int n);
    /// R(N) + offset = offset + [0,N]^2.
    static Box square(int side, Vertex offset = {});
    /// offset + [0,width] x [0,height].
    static Box rect(int width, int height, Vertex offset = {});

    int width() const { return x1 - x0; }
    int height() const { return y1 - y0; }
    bool contains(Vertex v) const { return v.x >= x0 && v.x <= x1 && v.y >= y0 && v.y <= y1; }
    bool contains(const Edge& e) const { return contains(e.a) && contains(e.b); }
    bool contains(const Box& o) const { return o.x0 >= x0 && o.x1 <= x1 && o.y0 >= y0 && o.y1 <= y1; }
    bool on_boundary(Vertex v) const {
        return contains(v) && (v.x == x0 || v.x == x1 || v.y == y0 || v.y == y1);
    }
    /// Largest n with B(n) inside this box, or -1 when the origin is outside.
    int centered_radius() const;
};

/// Ann(m,n) = B(n) \ B(m). An edge belongs to it when both endpoints lie in B(n)
/// and at least one endpoint lies outside the open box (-m,m)^2, so circuits in the
/// annulus may run along the inner boundary.
struct Annulus {
    int inner = 0;
    int outer = 1;

    Annulus(int m, int n);
    bool contains(const Edge& e) const;
    bool contains(Vertex v) const { return linf_norm(v) <= outer && linf_norm(v) >= inner; }
};

std::vector<Edge> edges_of_box(const Box& b);
std::vector<Vertex> boundary_vertices(int n);
std::vector<Edge> annulus_edges(const Annulus& a);

/// Box-independent 64-bit key of an edge; keys the random stream of its omega value.
std::uint64_t edge_key(const Edge& e);

/// Dense indexing of the vertices and edges of a box. Vertex and edge indices follow
/// the lexicographic order of coordinates, so index order is the canonical tie order.
class Grid {
public:
    explicit Grid(const Box& box);

    const Box& box() const { return box_; }
    int cols() const { return w_; }
    int rows() const { return h_; }
    std::int64_t num_vertices() const { return std::int64_t(w_) * h_; }
    std::int64_t num_edges() const { return std::int64_t(w_) * (h_ - 1) + std::int64_t(h_) * (w_ - 1); }

    std::int64_t vertex_index(Vertex v) const { return std::int64_t(v.x - box_.x0) * h_ + (v.y - box_.y0); }
    Vertex vertex(std::int64_t idx) const {
        return {box_.x0 + int(idx / h_), box_.y0 + int(idx % h_)};
    }

    std::int64_t edge_index(const Edge& e) const {
        const std::int64_t i = e.a.x - box_.x0;
        const std::int64_t j = e.a.y - box_.y0;
        const std::int64_t stride = 2 * std::int64_t(h_) - 1;
        if (i == w_ - 1) return (w_ - 1) * stride + j;
        const std::int64_t base = i * stride + 2 * j;
        if (e.horizontal()) return j == h_ - 1 ? base : base + 1;
        return base;
    }
    Edge edge(std::int64_t idx) const;

    /// Checked variant of edge_index.
    std::int64_t require_edge(const Edge& e) const;

    /// Calls f(neighbor_vertex_index, edge_index) for every neighbor of v inside the box.
    template <class F>
    void for_each_neighbor(std::int64_t v, F&& f) const {
        const Vertex p = vertex(v);
        if (p.x > box_.x0) f(v - h_, edge_index(Edge{{p.x - 1, p.y}, p}));
        if (p.y > box_.y0) f(v - 1, edge_index(Edge{{p.x, p.y - 1}, p}));
        if (p.y < box_.y1) f(v + 1, edge_index(Edge{p, {p.x, p.y + 1}}));
        if (p.x < box_.x1) f(v + h_, edge_index(Edge{p, {p.x + 1, p.y}}));
    }

private:
    Box box_;
    int w_;
    int h_;
};

std::string to_string(Vertex v);
std::string to_string(const Edge& e);

}  // namespace fppinv
