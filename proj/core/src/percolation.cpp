#include "fppinv/percolation.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_set>

namespace fppinv {

namespace {

Edge side_edge(const std::pair<HalfPoint, HalfPoint>& side) {
    return Edge{{side.first.x2 / 2, side.first.y2 / 2}, {side.second.x2 / 2, side.second.y2 / 2}};
}

/// Faces reachable from `seeds` without crossing an edge flagged in `wall`.
template <class Passable>
std::vector<std::uint8_t> flood_faces(const CellGrid& faces, const std::vector<std::int64_t>& seeds,
                                      Passable&& passable) {
    std::vector<std::uint8_t> seen(std::size_t(faces.size()), 0);
    std::deque<std::int64_t> queue;
    for (const std::int64_t s : seeds) {
        if (!seen[s]) {
            seen[s] = 1;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        const std::int64_t c = queue.front();
        queue.pop_front();
        faces.for_each_neighbor(c, [&](std::int64_t d) {
            if (!seen[d] && passable(c, d)) {
                seen[d] = 1;
                queue.push_back(d);
            }
        });
    }
    return seen;
}

struct Walls {
    const Grid& grid;
    const CellGrid& faces;
    const EdgeMask& wall;
    bool operator()(std::int64_t a, std::int64_t b) const {
        const Edge e = side_edge(faces.shared_side(a, b));
        return !grid.box().contains(e) || !wall[std::size_t(grid.edge_index(e))];
    }
};

std::vector<std::int64_t> border_cells(const CellGrid& g) {
    std::vector<std::int64_t> out;
    for (std::int64_t c = 0; c < g.size(); ++c) {
        if (g.on_border(c)) out.push_back(c);
    }
    return out;
}

EdgeMask circuit_walls(const Grid& grid, const EdgeMask& open, const Annulus& ann) {
    if (!grid.box().contains(Box::centered(ann.outer))) throw DomainError("annulus exceeds the grid box");
    EdgeMask wall(open.size(), 0);
    for (std::int64_t i = 0; i < grid.num_edges(); ++i) {
        if (!open[std::size_t(i)]) continue;
        const Edge e = grid.edge(i);
        wall[std::size_t(i)] = ann.contains(e) && !e.has_endpoint({0, 0});
    }
    return wall;
}

Circuit circuit_from_region(const CellGrid& faces, const std::vector<std::uint8_t>& region) {
    Circuit c;
    for (const HalfPoint& p : trace_boundary(faces, region)) c.vertices.push_back({p.x2 / 2, p.y2 / 2});
    return c;
}

constexpr HalfPoint kOriginFace{1, 1};

/// Two paths from `source` to target nodes, disjoint except at `source`, via unit vertex
/// capacities and two augmenting paths.
class ArmFlow {
public:
    explicit ArmFlow(std::int64_t nodes) : n_(nodes), head_(std::size_t(2 * nodes + 1), -1) {}

    void add_link(std::int64_t u, std::int64_t v) {
        arc(out(u), in(v));
        arc(out(v), in(u));
    }
    void add_target(std::int64_t v) { arc(out(v), sink()); }

    bool two_paths(std::int64_t source) {
        for (std::int64_t v = 0; v < n_; ++v) arc(in(v), out(v), v == source ? 2 : 1);
        int found = 0;
        while (found < 2 && augment(in(source))) ++found;
        return found == 2;
    }

private:
    std::int64_t in(std::int64_t v) const { return 2 * v; }
    std::int64_t out(std::int64_t v) const { return 2 * v + 1; }
    std::int64_t sink() const { return 2 * n_; }

    void arc(std::int64_t u, std::int64_t v, int cap = 1) {
        to_.push_back(v);
        cap_.push_back(cap);
        next_.push_back(head_[std::size_t(u)]);
        head_[std::size_t(u)] = std::int64_t(to_.size()) - 1;
        to_.push_back(u);
        cap_.push_back(0);
        next_.push_back(head_[std::size_t(v)]);
        head_[std::size_t(v)] = std::int64_t(to_.size()) - 1;
    }

    bool augment(std::int64_t s) {
        std::vector<std::int64_t> via(head_.size(), -1);
        std::vector<std::uint8_t> seen(head_.size(), 0);
        std::deque<std::int64_t> queue{s};
        seen[std::size_t(s)] = 1;
        while (!queue.empty() && !seen[std::size_t(sink())]) {
            const std::int64_t u = queue.front();
            queue.pop_front();
            for (std::int64_t a = head_[std::size_t(u)]; a >= 0; a = next_[std::size_t(a)]) {
                const std::int64_t v = to_[std::size_t(a)];
                if (cap_[std::size_t(a)] > 0 && !seen[std::size_t(v)]) {
                    seen[std::size_t(v)] = 1;
                    via[std::size_t(v)] = a;
                    queue.push_back(v);
                }
            }
        }
        if (!seen[std::size_t(sink())]) return false;
        for (std::int64_t v = sink(); v != s;) {
            const std::int64_t a = via[std::size_t(v)];
            --cap_[std::size_t(a)];
            ++cap_[std::size_t(a ^ 1)];
            v = to_[std::size_t(a ^ 1)];
        }
        return true;
    }

    std::int64_t n_;
    std::vector<std::int64_t> head_;
    std::vector<std::int64_t> to_;
    std::vector<int> cap_;
    std::vector<std::int64_t> next_;
};

void require_box(const LatticeConfig& cfg, const Box& b) {
    if (!cfg.box().contains(b)) throw DomainError("region exceeds the config box");
}

}  // namespace

EdgeMask open_mask(const LatticeConfig& cfg, double p) {
    EdgeMask m(cfg.omegas().size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = cfg.omegas()[i] <= p;
    return m;
}

std::int64_t Partition::count() const {
    std::int64_t c = 0;
    for (std::size_t i = 0; i < label.size(); ++i) c += label[i] == std::int64_t(i);
    return c;
}

Partition clusters_at_level(const LatticeConfig& cfg, double p, const Box& region) {
    require_box(cfg, region);
    Partition part{Grid(region), {}};
    UnionFind uf(part.grid.num_vertices());
    for (std::int64_t i = 0; i < part.grid.num_edges(); ++i) {
        const Edge e = part.grid.edge(i);
        if (cfg.is_p_open(e, p)) uf.unite(part.grid.vertex_index(e.a), part.grid.vertex_index(e.b));
    }
    part.label.resize(std::size_t(part.grid.num_vertices()));
    for (std::int64_t v = 0; v < part.grid.num_vertices(); ++v) part.label[std::size_t(v)] = uf.find(v);
    return part;
}

bool has_left_right_crossing(const LatticeConfig& cfg, double p, const Box& rect) {
    require_box(cfg, rect);
    const Grid g(rect);
    std::vector<std::uint8_t> seen(std::size_t(g.num_vertices()), 0);
    std::deque<std::int64_t> queue;
    for (int y = rect.y0; y <= rect.y1; ++y) {
        const std::int64_t v = g.vertex_index({rect.x0, y});
        seen[std::size_t(v)] = 1;
        queue.push_back(v);
    }
    while (!queue.empty()) {
        const std::int64_t v = queue.front();
        queue.pop_front();
        if (g.vertex(v).x == rect.x1) return true;
        g.for_each_neighbor(v, [&](std::int64_t u, std::int64_t e) {
            if (!seen[std::size_t(u)] && cfg.is_p_open(g.edge(e), p)) {
                seen[std::size_t(u)] = 1;
                queue.push_back(u);
            }
        });
    }
    return false;
}

bool has_top_bottom_dual_crossing(const LatticeConfig& cfg, double p, const Box& rect) {
    require_box(cfg, rect);
    if (rect.width() == 0) return false;
    const CellGrid faces{rect.width(), rect.height() + 2, {2 * rect.x0 + 1, 2 * rect.y0 - 1}};
    std::vector<std::int64_t> bottom;
    for (int i = 0; i < faces.w; ++i) bottom.push_back(faces.index(i, 0));
    const auto seen = flood_faces(faces, bottom, [&](std::int64_t a, std::int64_t b) {
        const Edge e = side_edge(faces.shared_side(a, b));
        return rect.contains(e) && !cfg.is_p_open(e, p);
    });
    for (int i = 0; i < faces.w; ++i) {
        if (seen[std::size_t(faces.index(i, faces.h - 1))]) return true;
    }
    return false;
}

std::vector<Edge> Circuit::edges() const {
    std::vector<Edge> out;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        out.push_back(Edge::between(vertices[i], vertices[(i + 1) % vertices.size()]));
    }
    return out;
}

std::vector<HalfPoint> Circuit::polygon() const {
    std::vector<HalfPoint> out;
    for (const Vertex& v : vertices) out.push_back(HalfPoint::of(v));
    return out;
}

bool Circuit::contains_edge(const Edge& e) const {
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const Vertex u = vertices[i];
        const Vertex v = vertices[(i + 1) % vertices.size()];
        if ((e.a == u && e.b == v) || (e.a == v && e.b == u)) return true;
    }
    return false;
}

bool Circuit::surrounds(HalfPoint p) const { return winding_number(polygon(), p) != 0; }

std::optional<Circuit> outermost_circuit(const Grid& grid, const EdgeMask& open, const Annulus& ann) {
    const EdgeMask wall = circuit_walls(grid, open, ann);
    const CellGrid faces = CellGrid::faces_around(grid.box());
    const Walls passable{grid, faces, wall};
    const auto outside = flood_faces(faces, border_cells(faces), passable);
    const std::int64_t origin = faces.cell_at(kOriginFace);
    if (outside[std::size_t(origin)]) return std::nullopt;
    std::vector<std::uint8_t> inside(outside.size());
    for (std::size_t i = 0; i < inside.size(); ++i) inside[i] = !outside[i];
    return circuit_from_region(faces, fill_holes(faces, component_of(faces, inside, origin)));
}

std::optional<Circuit> innermost_circuit(const Grid& grid, const EdgeMask& open, const Annulus& ann) {
    const EdgeMask wall = circuit_walls(grid, open, ann);
    const CellGrid faces = CellGrid::faces_around(grid.box());
    const auto reached = flood_faces(faces, {faces.cell_at(kOriginFace)}, Walls{grid, faces, wall});
    for (std::int64_t c = 0; c < faces.size(); ++c) {
        if (reached[std::size_t(c)] && faces.on_border(c)) return std::nullopt;
    }
    return circuit_from_region(faces, fill_holes(faces, reached));
}

std::optional<Circuit> outermost_circuit(const LatticeConfig& cfg, double p, const Annulus& ann) {
    auto c = outermost_circuit(cfg.grid(), open_mask(cfg, p), ann);
    if (c) c->level = p;
    return c;
}

std::optional<Circuit> innermost_circuit(const LatticeConfig& cfg, double p, const Annulus& ann) {
    auto c = innermost_circuit(cfg.grid(), open_mask(cfg, p), ann);
    if (c) c->level = p;
    return c;
}

bool verify_circuit(const LatticeConfig& cfg, const Circuit& c, const Annulus& ann) {
    const auto& vs = c.vertices;
    if (vs.size() < 4) return false;
    std::set<Vertex> distinct(vs.begin(), vs.end());
    if (distinct.size() != vs.size() || distinct.count({0, 0})) return false;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const Vertex u = vs[i];
        const Vertex v = vs[(i + 1) % vs.size()];
        if (std::abs(u.x - v.x) + std::abs(u.y - v.y) != 1) return false;
        const Edge e = Edge::between(u, v);
        if (!cfg.box().contains(e) || !ann.contains(e) || !cfg.is_p_open(e, c.level)) return false;
    }
    return winding_number(c.polygon(), HalfPoint{0, 0}) == 1;
}

bool separates_origin(const Grid& grid, const EdgeMask& blocked) {
    const CellGrid faces = CellGrid::faces_around(grid.box());
    if (!faces.contains_center(kOriginFace)) return false;
    const auto outside = flood_faces(faces, border_cells(faces), Walls{grid, faces, blocked});
    return !outside[std::size_t(faces.cell_at(kOriginFace))];
}

std::optional<DualPath> dual_path(const LatticeConfig& cfg, double p, const std::vector<HalfPoint>& a,
                                  const std::vector<HalfPoint>& b, const Box& region) {
    require_box(cfg, region);
    const CellGrid faces = CellGrid::faces_around(region);
    std::vector<std::int64_t> sources;
    std::vector<std::uint8_t> target(std::size_t(faces.size()), 0);
    for (const HalfPoint& h : a) sources.push_back(faces.cell_at(h));
    for (const HalfPoint& h : b) target[std::size_t(faces.cell_at(h))] = 1;

    std::vector<std::int64_t> parent(std::size_t(faces.size()), -2);
    std::deque<std::int64_t> queue;
    for (const std::int64_t s : sources) {
        if (parent[std::size_t(s)] == -2) {
            parent[std::size_t(s)] = -1;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        const std::int64_t c = queue.front();
        queue.pop_front();
        if (target[std::size_t(c)]) {
            DualPath path{{}, p};
            for (std::int64_t x = c; x >= 0; x = parent[std::size_t(x)]) path.vertices.push_back(faces.center(x));
            std::reverse(path.vertices.begin(), path.vertices.end());
            return path;
        }
        faces.for_each_neighbor(c, [&](std::int64_t d) {
            if (parent[std::size_t(d)] != -2) return;
            const Edge e = side_edge(faces.shared_side(c, d));
            if (region.contains(e) && !cfg.is_p_open(e, p)) {
                parent[std::size_t(d)] = c;
                queue.push_back(d);
            }
        });
    }
    return std::nullopt;
}

bool dual_connected(const LatticeConfig& cfg, double p, const std::vector<HalfPoint>& a,
                    const std::vector<HalfPoint>& b, const Box& region) {
    return dual_path(cfg, p, a, b, region).has_value();
}

bool connected_to_far_boundary(const LatticeConfig& cfg, double p, const std::vector<Vertex>& source, int K) {
    if (source.empty()) throw DomainError("empty source set");
    if (K < 1) throw DomainError("K must be at least 1");
    int r = 0;
    for (const Vertex& v : source) r = std::max(r, linf_norm(v));
    if (r < 1) throw DomainError("source must reach radius at least 1");
    const int R = K * r;
    if (!cfg.box().contains(Box::centered(R))) {
        throw DomainError("config box too small for K * radius = " + std::to_string(R) + "; use a larger config");
    }
    const Grid& g = cfg.grid();
    std::vector<std::uint8_t> seen(std::size_t(g.num_vertices()), 0);
    std::deque<std::int64_t> queue;
    for (const Vertex& v : source) {
        const std::int64_t i = g.vertex_index(v);
        if (!seen[std::size_t(i)]) {
            seen[std::size_t(i)] = 1;
            queue.push_back(i);
        }
    }
    while (!queue.empty()) {
        const std::int64_t v = queue.front();
        queue.pop_front();
        if (linf_norm(g.vertex(v)) == R) return true;
        g.for_each_neighbor(v, [&](std::int64_t u, std::int64_t e) {
            if (!seen[std::size_t(u)] && linf_norm(g.vertex(u)) <= R && cfg.open_at(e, p)) {
                seen[std::size_t(u)] = 1;
                queue.push_back(u);
            }
        });
    }
    return false;
}

bool box_connected_to_far_boundary(const LatticeConfig& cfg, double p, int r, int K) {
    return connected_to_far_boundary(cfg, p, boundary_vertices(r), K);
}

bool two_open_arms(const LatticeConfig& cfg, double p, int n) {
    if (n < 1) throw DomainError("arm radius must be at least 1");
    const Box b = Box::centered(n);
    require_box(cfg, b);
    const Grid g(b);
    ArmFlow flow(g.num_vertices());
    for (std::int64_t i = 0; i < g.num_edges(); ++i) {
        const Edge e = g.edge(i);
        if (cfg.is_p_open(e, p)) flow.add_link(g.vertex_index(e.a), g.vertex_index(e.b));
    }
    for (const Vertex& v : boundary_vertices(n)) flow.add_target(g.vertex_index(v));
    return flow.two_paths(g.vertex_index({0, 0}));
}

bool two_closed_dual_arms(const LatticeConfig& cfg, double p, int n) {
    if (n < 1) throw DomainError("arm radius must be at least 1");
    const Box b = Box::centered(n);
    require_box(cfg, b);
    const CellGrid faces = CellGrid::faces_around(b);
    ArmFlow flow(faces.size());
    for (std::int64_t c = 0; c < faces.size(); ++c) {
        if (faces.on_border(c)) flow.add_target(c);
        const int i = faces.col(c), j = faces.row(c);
        for (const auto& [di, dj] : {std::pair{1, 0}, std::pair{0, 1}}) {
            if (i + di >= faces.w || j + dj >= faces.h) continue;
            const std::int64_t d = faces.index(i + di, j + dj);
            const Edge e = side_edge(faces.shared_side(c, d));
            if (b.contains(e) && !cfg.is_p_open(e, p)) flow.add_link(c, d);
        }
    }
    return flow.two_paths(faces.cell_at(kOriginFace));
}

bool four_arm_event(const LatticeConfig& cfg, double p_open, double p_closed, int n) {
    return two_open_arms(cfg, p_open, n) && two_closed_dual_arms(cfg, p_closed, n);
}

}  // namespace fppinv
