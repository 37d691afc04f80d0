#include "fppinv/lattice.hpp"

#include <sstream>

namespace fppinv {

Edge Edge::between(Vertex u, Vertex v) {
    const int dx = u.x > v.x ? u.x - v.x : v.x - u.x;
    const int dy = u.y > v.y ? u.y - v.y : v.y - u.y;
    if (dx + dy != 1) {
        throw DomainError("vertices " + to_string(u) + " and " + to_string(v) + " are not adjacent");
    }
    return u < v ? Edge{u, v} : Edge{v, u};
}

DualEdge dual_of(const Edge& e) {
    const int x = e.a.x;
    const int y = e.a.y;
    if (e.horizontal()) return {{2 * x + 1, 2 * y - 1}, {2 * x + 1, 2 * y + 1}};
    return {{2 * x - 1, 2 * y + 1}, {2 * x + 1, 2 * y + 1}};
}

Edge primal_of(const DualEdge& d) {
    if (d.p.x2 == d.q.x2) {
        const int x = (d.p.x2 - 1) / 2;
        const int y = (d.p.y2 + 1) / 2;
        return Edge{{x, y}, {x + 1, y}};
    }
    const int x = (d.p.x2 + 1) / 2;
    const int y = (d.p.y2 - 1) / 2;
    return Edge{{x, y}, {x, y + 1}};
}

Box Box::centered(int n) {
    if (n < 0) throw DomainError("box radius must be nonnegative");
    return {-n, -n, n, n};
}

Box Box::square(int side, Vertex offset) { return rect(side, side, offset); }

Box Box::rect(int width, int height, Vertex offset) {
    if (width < 0 || height < 0) throw DomainError("box sides must be nonnegative");
    return {offset.x, offset.y, offset.x + width, offset.y + height};
}

int Box::centered_radius() const {
    if (!contains(Vertex{0, 0})) return -1;
    return std::min(std::min(-x0, -y0), std::min(x1, y1));
}

Annulus::Annulus(int m, int n) : inner(m), outer(n) {
    if (m < 0 || m >= n) throw DomainError("annulus requires 0 <= m < n");
}

bool Annulus::contains(const Edge& e) const {
    if (linf_norm(e.a) > outer || linf_norm(e.b) > outer) return false;
    return linf_norm(e.a) >= inner || linf_norm(e.b) >= inner;
}

std::vector<Edge> edges_of_box(const Box& b) {
    const Grid g(b);
    std::vector<Edge> out;
    out.reserve(std::size_t(g.num_edges()));
    for (std::int64_t i = 0; i < g.num_edges(); ++i) out.push_back(g.edge(i));
    return out;
}

std::vector<Vertex> boundary_vertices(int n) {
    if (n < 0) throw DomainError("boundary radius must be nonnegative");
    if (n == 0) return {{0, 0}};
    std::vector<Vertex> out;
    out.reserve(std::size_t(8 * n));
    for (int x = -n; x <= n; ++x) {
        for (int y = -n; y <= n; ++y) {
            if (x == -n || x == n || y == -n || y == n) out.push_back({x, y});
        }
    }
    return out;
}

std::vector<Edge> annulus_edges(const Annulus& a) {
    std::vector<Edge> out;
    for (const Edge& e : edges_of_box(Box::centered(a.outer))) {
        if (a.contains(e)) out.push_back(e);
    }
    return out;
}

std::uint64_t edge_key(const Edge& e) {
    auto zig = [](int v) -> std::uint64_t {
        return v >= 0 ? std::uint64_t(v) << 1 : (std::uint64_t(-(std::int64_t(v) + 1)) << 1) | 1u;
    };
    return (zig(e.a.x) << 33) | (zig(e.a.y) << 1) | (e.horizontal() ? 1u : 0u);
}

Grid::Grid(const Box& box) : box_(box), w_(box.x1 - box.x0 + 1), h_(box.y1 - box.y0 + 1) {
    if (w_ <= 0 || h_ <= 0) throw DomainError("empty box");
}

Edge Grid::edge(std::int64_t idx) const {
    const std::int64_t stride = 2 * std::int64_t(h_) - 1;
    const std::int64_t full = std::int64_t(w_ - 1) * stride;
    if (idx >= full) {
        const int j = int(idx - full);
        const Vertex a{box_.x1, box_.y0 + j};
        return Edge{a, {a.x, a.y + 1}};
    }
    const int i = int(idx / stride);
    const std::int64_t r = idx % stride;
    const int j = int(r / 2);
    const Vertex a{box_.x0 + i, box_.y0 + j};
    if (j == h_ - 1 || r % 2 == 1) return Edge{a, {a.x + 1, a.y}};
    return Edge{a, {a.x, a.y + 1}};
}

std::int64_t Grid::require_edge(const Edge& e) const {
    if (!box_.contains(e)) throw DomainError("edge " + to_string(e) + " lies outside the box");
    return edge_index(e);
}

std::string to_string(Vertex v) {
    std::ostringstream os;
    os << '(' << v.x << ',' << v.y << ')';
    return os.str();
}

std::string to_string(const Edge& e) { return '{' + to_string(e.a) + ',' + to_string(e.b) + '}'; }

}  // namespace fppinv
