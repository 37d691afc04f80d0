#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "fppinv/theorem.hpp"

namespace fppinv {

namespace {

std::vector<std::int64_t> cluster_labels(const LatticeConfig& cfg, double p) {
    const Grid& g = cfg.grid();
    UnionFind uf(g.num_vertices());
    for (std::int64_t e = 0; e < g.num_edges(); ++e) {
        if (cfg.open_at(e, p)) {
            const Edge ed = g.edge(e);
            uf.unite(g.vertex_index(ed.a), g.vertex_index(ed.b));
        }
    }
    std::vector<std::int64_t> label(std::size_t(g.num_vertices()));
    for (std::int64_t v = 0; v < g.num_vertices(); ++v) label[std::size_t(v)] = uf.find(v);
    return label;
}

/// A component of open annulus edges whose edges alone separate the origin from infinity.
struct RingCandidate {
    std::int64_t label = 0;  // 1/2-open cluster in the search box
    Vertex anchor;
    EdgeMask mask;  // over the annulus box grid
};

bool hits_all_half_axes(const std::vector<Vertex>& vs) {
    bool px = false, nx = false, py = false, ny = false;
    for (const Vertex& v : vs) {
        px = px || (v.y == 0 && v.x > 0);
        nx = nx || (v.y == 0 && v.x < 0);
        py = py || (v.x == 0 && v.y > 0);
        ny = ny || (v.x == 0 && v.y < 0);
    }
    return px && nx && py && ny;
}

/// Open circuits around the origin with all vertices at norms in [m, n], grouped by the
/// cluster (of `search`) that carries them.
std::vector<RingCandidate> ring_candidates(const LatticeConfig& search, const std::vector<std::int64_t>& label,
                                           double p, int m, int n) {
    const LatticeConfig ring = search.restricted(Box::centered(n));
    const Grid& g = ring.grid();
    UnionFind uf(g.num_vertices());
    std::vector<std::int64_t> edges;
    for (std::int64_t e = 0; e < g.num_edges(); ++e) {
        const Edge ed = g.edge(e);
        if (ring.open_at(e, p) && linf_norm(ed.a) >= m && linf_norm(ed.b) >= m) {
            edges.push_back(e);
            uf.unite(g.vertex_index(ed.a), g.vertex_index(ed.b));
        }
    }
    std::map<std::int64_t, std::vector<std::int64_t>> groups;
    std::vector<std::int64_t> order;
    for (const std::int64_t e : edges) {
        const std::int64_t r = uf.find(g.vertex_index(g.edge(e).a));
        if (!groups.count(r)) order.push_back(r);
        groups[r].push_back(e);
    }
    std::vector<RingCandidate> out;
    std::set<std::int64_t> seen_labels;
    for (const std::int64_t r : order) {
        const auto& es = groups[r];
        if (es.size() < 8 * std::size_t(m)) continue;
        std::vector<Vertex> vs;
        for (const std::int64_t e : es) {
            vs.push_back(g.edge(e).a);
            vs.push_back(g.edge(e).b);
        }
        if (!hits_all_half_axes(vs)) continue;
        EdgeMask mask(std::size_t(g.num_edges()), 0);
        for (const std::int64_t e : es) mask[std::size_t(e)] = 1;
        if (!separates_origin(g, mask)) continue;
        const Vertex anchor = vs.front();
        const std::int64_t lab = label[std::size_t(search.grid().vertex_index(anchor))];
        if (!seen_labels.insert(lab).second) continue;
        out.push_back({lab, anchor, std::move(mask)});
    }
    return out;
}

/// Vertex-set cluster grown through edges that are not walls, confined to norms below
/// `bound`. Empty when the bound is reached.
struct BoundedCluster {
    bool bounded = false;
    std::vector<std::uint8_t> cells;  // over CellGrid::vertices_around(B(bound))
};

template <class Wall>
BoundedCluster grow_bounded(const LatticeConfig& cfg, const CellGrid& cells, int bound, const std::vector<Vertex>& seeds,
                            Wall&& wall) {
    const Grid& g = cfg.grid();
    BoundedCluster c;
    c.cells.assign(std::size_t(cells.size()), 0);
    std::deque<Vertex> queue;
    for (const Vertex& s : seeds) {
        if (linf_norm(s) >= bound) return c;
        auto& cell = c.cells[std::size_t(cells.cell_at(HalfPoint::of(s)))];
        if (!cell) {
            cell = 1;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        const Vertex v = queue.front();
        queue.pop_front();
        bool escaped = false;
        g.for_each_neighbor(g.vertex_index(v), [&](std::int64_t ui, std::int64_t e) {
            if (escaped || wall(e)) return;
            const Vertex u = g.vertex(ui);
            if (linf_norm(u) >= bound) {
                escaped = true;
                return;
            }
            auto& cell = c.cells[std::size_t(cells.cell_at(HalfPoint::of(u)))];
            if (!cell) {
                cell = 1;
                queue.push_back(u);
            }
        });
        if (escaped) return c;
    }
    c.bounded = true;
    return c;
}

bool in_cells(const CellGrid& cells, const std::vector<std::uint8_t>& region, Vertex v) {
    const HalfPoint h = HalfPoint::of(v);
    return cells.contains_center(h) && region[std::size_t(cells.cell_at(h))];
}

std::size_t side_index(const std::vector<HalfPoint>& poly, const DualEdge& d) {
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const HalfPoint a = poly[i];
        const HalfPoint b = poly[(i + 1) % poly.size()];
        if ((a == d.p && b == d.q) || (a == d.q && b == d.p)) return i;
    }
    throw std::logic_error("dual edge is not a side of the traced circuit");
}

/// Corners poly[from], poly[from+1], ..., poly[to] cyclically.
std::vector<HalfPoint> arc(const std::vector<HalfPoint>& poly, std::size_t from, std::size_t to) {
    std::vector<HalfPoint> out;
    for (std::size_t i = from % poly.size();; i = (i + 1) % poly.size()) {
        out.push_back(poly[i]);
        if (i == to % poly.size()) break;
    }
    return out;
}

/// The two arcs of the traced boundary between sides `first` and `second`: from the far end
/// of `first` to the near end of `second`, then from the far end of `second` back to `first`.
std::pair<DualPath, DualPath> split_circuit(const std::vector<HalfPoint>& poly, const DualEdge& first,
                                            const DualEdge& second, double level) {
    const std::size_t i = side_index(poly, first);
    const std::size_t j = side_index(poly, second);
    return {DualPath{arc(poly, i + 1, j), level}, DualPath{arc(poly, j + 1, i), level}};
}

std::vector<Vertex> bfs_path(const LatticeConfig& cfg, double p, const std::vector<Vertex>& sources,
                             const std::function<bool(Vertex)>& is_target) {
    const Grid& g = cfg.grid();
    std::vector<std::int64_t> parent(std::size_t(g.num_vertices()), -2);
    std::deque<std::int64_t> queue;
    for (const Vertex& s : sources) {
        const std::int64_t i = g.vertex_index(s);
        if (parent[std::size_t(i)] == -2) {
            parent[std::size_t(i)] = -1;
            queue.push_back(i);
        }
    }
    while (!queue.empty()) {
        const std::int64_t v = queue.front();
        queue.pop_front();
        if (is_target(g.vertex(v))) {
            std::vector<Vertex> path;
            for (std::int64_t x = v; x >= 0; x = parent[std::size_t(x)]) path.push_back(g.vertex(x));
            std::reverse(path.begin(), path.end());
            return path;
        }
        g.for_each_neighbor(v, [&](std::int64_t u, std::int64_t e) {
            if (parent[std::size_t(u)] == -2 && cfg.open_at(e, p)) {
                parent[std::size_t(u)] = v;
                queue.push_back(u);
            }
        });
    }
    return {};
}

Circuit ring_circuit(const LatticeConfig& search, const RingCandidate& c, int m, int n) {
    const Grid g(Box::centered(n));
    auto circuit = outermost_circuit(g, c.mask, Annulus(m, n));
    if (!circuit) throw std::logic_error("candidate ring lost its circuit");
    circuit->level = 0.5;
    (void)search;
    return *circuit;
}

}  // namespace

std::optional<EkWitness> detect_E_k(const LatticeConfig& cfg, const EkSpec& spec) {
    const int s = spec.scale();
    const int far = spec.far_radius();
    if (!cfg.box().contains(Box::centered(far))) {
        throw DomainError("E_k detection at k = " + std::to_string(spec.k) + " needs the config box to contain B(" +
                          std::to_string(far) + ")");
    }
    const LatticeConfig search = cfg.restricted(Box::centered(far));
    const Grid& g = search.grid();
    const auto label = cluster_labels(search, 0.5);

    const auto inner = ring_candidates(search, label, 0.5, s, 3 * s);
    if (inner.empty()) return std::nullopt;
    auto outer = ring_candidates(search, label, 0.5, 9 * s, 27 * s);
    if (outer.empty()) return std::nullopt;

    const auto qlabel = cluster_labels(search, spec.q_k1);
    std::unordered_set<std::int64_t> far_roots;
    for (const Vertex& v : boundary_vertices(far)) far_roots.insert(qlabel[std::size_t(g.vertex_index(v))]);
    std::erase_if(outer, [&](const RingCandidate& c) {
        return !far_roots.count(qlabel[std::size_t(g.vertex_index(c.anchor))]);
    });
    if (outer.empty()) return std::nullopt;

    std::map<std::int64_t, const RingCandidate*> inner_by_label, outer_by_label;
    for (const auto& c : inner) inner_by_label[c.label] = &c;
    for (const auto& c : outer) outer_by_label[c.label] = &c;

    std::array<std::vector<std::int64_t>, 4> cand;
    for (std::int64_t e = 0; e < g.num_edges(); ++e) {
        const Edge ed = g.edge(e);
        const double w = search.omega_at(e);
        for (int i = 0; i < 4; ++i) {
            const auto [lo, hi] = spec.interval(i + 1);
            if (spec.box(i + 1).contains(ed) && w > lo && w < hi) cand[std::size_t(i)].push_back(e);
        }
    }
    for (const auto& c : cand) {
        if (c.empty()) return std::nullopt;
    }

    auto lab = [&](Vertex v) { return label[std::size_t(g.vertex_index(v))]; };
    auto orientations = [&](std::int64_t e) {
        const Edge ed = g.edge(e);
        return std::array<std::pair<Vertex, Vertex>, 2>{{{ed.a, ed.b}, {ed.b, ed.a}}};
    };

    const int bound = 27 * s;
    const CellGrid cells = CellGrid::vertices_around(Box::centered(bound));
    const LatticeConfig mid = search.restricted(Box::centered(bound));
    const Grid& mg = mid.grid();

    for (const std::int64_t e1 : cand[0]) {
        for (const auto& [u1, v1] : orientations(e1)) {
            const auto in_it = inner_by_label.find(lab(u1));
            if (in_it == inner_by_label.end()) continue;
            for (const std::int64_t e2 : cand[1]) {
                if (e2 == e1) continue;
                for (const auto& [u2, v2] : orientations(e2)) {
                    if (lab(u2) != lab(v1)) continue;
                    for (const std::int64_t e3 : cand[2]) {
                        if (e3 == e2) continue;
                        for (const auto& [u3, v3] : orientations(e3)) {
                            if (lab(u3) != lab(v2)) continue;
                            const auto out_it = outer_by_label.find(lab(v3));
                            if (out_it == outer_by_label.end()) continue;
                            for (const std::int64_t e4 : cand[3]) {
                                for (const auto& [u4, v4] : orientations(e4)) {
                                    if (lab(u4) != lab(u1) || lab(v4) != lab(v3)) continue;
                                    const Edge E1 = g.edge(e1), E2 = g.edge(e2), E3 = g.edge(e3), E4 = g.edge(e4);
                                    const std::int64_t m1 = mg.edge_index(E1), m2 = mg.edge_index(E2);
                                    const std::int64_t m3 = mg.edge_index(E3), m4 = mg.edge_index(E4);

                                    // dual circuit around zero through e4* and e2*
                                    const auto Q = grow_bounded(mid, cells, bound, {in_it->second->anchor},
                                                                [&](std::int64_t e) {
                                                                    return e == m2 || e == m4 ||
                                                                           !mid.open_at(e, spec.q_k);
                                                                });
                                    if (!Q.bounded) continue;
                                    const auto fillQ = fill_holes(cells, Q.cells);
                                    if (!in_cells(cells, Q.cells, u2) || !in_cells(cells, Q.cells, u4) ||
                                        in_cells(cells, fillQ, v2) || in_cells(cells, fillQ, v4)) {
                                        continue;
                                    }
                                    // dual circuit around e2* through e1* and e3*
                                    const auto Q2 = grow_bounded(mid, cells, bound, {u2, v2}, [&](std::int64_t e) {
                                        return e == m1 || e == m3 || !mid.open_at(e, spec.q_k);
                                    });
                                    if (!Q2.bounded) continue;
                                    const auto fillQ2 = fill_holes(cells, Q2.cells);
                                    if (!in_cells(cells, Q2.cells, v1) || !in_cells(cells, Q2.cells, u3) ||
                                        in_cells(cells, fillQ2, u1) || in_cells(cells, fillQ2, v3)) {
                                        continue;
                                    }

                                    EkWitness w;
                                    w.gamma11 = ring_circuit(search, *in_it->second, s, 3 * s);
                                    w.gamma21 = ring_circuit(search, *out_it->second, 9 * s, 27 * s);
                                    w.e = {E1, E2, E3, E4};
                                    w.u = {u1, u2, u3, u4};
                                    w.v = {v1, v2, v3, v4};
                                    for (int i = 0; i < 4; ++i) w.omega[std::size_t(i)] = search.omega(w.e[std::size_t(i)]);
                                    const auto& c1 = w.gamma11.vertices;
                                    const auto& c2 = w.gamma21.vertices;
                                    auto on = [](const std::vector<Vertex>& set) {
                                        return [&set](Vertex x) { return std::find(set.begin(), set.end(), x) != set.end(); };
                                    };
                                    auto at = [](Vertex t) { return [t](Vertex x) { return x == t; }; };
                                    w.open_paths[0] = bfs_path(search, 0.5, c1, at(u1));
                                    w.open_paths[1] = bfs_path(search, 0.5, {v1}, at(u2));
                                    w.open_paths[2] = bfs_path(search, 0.5, {v2}, at(u3));
                                    w.open_paths[3] = bfs_path(search, 0.5, {v3}, on(c2));
                                    w.open_paths[4] = bfs_path(search, 0.5, c1, at(u4));
                                    w.open_paths[5] = bfs_path(search, 0.5, {v4}, on(c2));
                                    w.far_path = bfs_path(search, spec.q_k1, c2,
                                                          [far](Vertex x) { return linf_norm(x) == far; });

                                    const auto zero_poly = trace_boundary(cells, fillQ);
                                    std::tie(w.gamma13, w.gamma23) =
                                        split_circuit(zero_poly, dual_of(E4), dual_of(E2), spec.q_k);
                                    const auto e2_poly = trace_boundary(cells, fillQ2);
                                    std::tie(w.gamma12, w.gamma22) =
                                        split_circuit(e2_poly, dual_of(E1), dual_of(E3), spec.q_k);
                                    return w;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    return std::nullopt;
}

namespace {

class Checker {
public:
    Checker(const LatticeConfig& cfg, WitnessCheck& out) : cfg_(cfg), out_(out) {}

    void require(bool cond, const std::string& what) {
        if (!cond) {
            out_.ok = false;
            out_.failures.push_back(what);
        }
    }

    bool has(const Edge& e) const { return cfg_.box().contains(e); }

    /// Consecutive vertices adjacent, every edge omega <= p.
    bool open_path(const std::vector<Vertex>& path, double p) const {
        if (path.empty()) return false;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            const Vertex a = path[i], b = path[i + 1];
            if (std::abs(a.x - b.x) + std::abs(a.y - b.y) != 1) return false;
            const Edge e = Edge::between(a, b);
            if (!has(e) || !(cfg_.omega(e) <= p)) return false;
        }
        return true;
    }

    /// Consecutive dual vertices adjacent, every crossed primal edge omega > p.
    bool closed_dual_path(const std::vector<HalfPoint>& path, double p) const {
        if (path.empty()) return false;
        for (const HalfPoint& h : path) {
            if ((h.x2 & 1) == 0 || (h.y2 & 1) == 0) return false;
        }
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            const HalfPoint a = path[i], b = path[i + 1];
            const int dx = std::abs(a.x2 - b.x2), dy = std::abs(a.y2 - b.y2);
            if (dx + dy != 2 || (dx != 0 && dy != 0)) return false;
            const Edge e = primal_of(a < b ? DualEdge{a, b} : DualEdge{b, a});
            if (!has(e) || !(cfg_.omega(e) > p)) return false;
        }
        return true;
    }

    bool ring(const Circuit& c, double p, int m, int n) const {
        const auto& vs = c.vertices;
        if (vs.size() < 4) return false;
        if (std::set<Vertex>(vs.begin(), vs.end()).size() != vs.size()) return false;
        for (const Vertex& v : vs) {
            if (linf_norm(v) < m || linf_norm(v) > n) return false;
        }
        std::vector<Vertex> closed = vs;
        closed.push_back(vs.front());
        if (!open_path(closed, p)) return false;
        return winding_number(c.polygon(), {0, 0}) == 1;
    }

    /// arc1 runs from an end of `first` to an end of `second`, arc2 from the other end of
    /// `second` to the other end of `first`; together with both edges a simple closed curve
    /// winding around `centre`.
    bool dual_circuit(const DualEdge& first, const std::vector<HalfPoint>& arc1, const DualEdge& second,
                      const std::vector<HalfPoint>& arc2, HalfPoint centre) const {
        if (arc1.empty() || arc2.empty()) return false;
        auto other = [](const DualEdge& d, HalfPoint h) { return h == d.p ? d.q : d.p; };
        auto is_end = [](const DualEdge& d, HalfPoint h) { return h == d.p || h == d.q; };
        if (!is_end(first, arc1.front()) || !is_end(second, arc1.back())) return false;
        if (arc2.front() != other(second, arc1.back()) || arc2.back() != other(first, arc1.front())) return false;
        std::vector<HalfPoint> poly = arc1;
        poly.insert(poly.end(), arc2.begin(), arc2.end());
        if (std::set<HalfPoint>(poly.begin(), poly.end()).size() != poly.size()) return false;
        return winding_number(poly, centre) != 0;
    }

private:
    const LatticeConfig& cfg_;
    WitnessCheck& out_;
};

bool contains_vertex(const std::vector<Vertex>& vs, Vertex v) { return std::find(vs.begin(), vs.end(), v) != vs.end(); }

}  // namespace

WitnessCheck verify_witness(const LatticeConfig& cfg, const EkSpec& spec, const EkWitness& w) {
    WitnessCheck out;
    Checker c(cfg, out);
    const int s = spec.scale();
    const double pc = 0.5;

    c.require(c.ring(w.gamma11, pc, s, 3 * s), "gamma11 is not an open circuit around B(3^k) in Ann(3^k,3^{k+1})");
    c.require(c.ring(w.gamma21, pc, 9 * s, 27 * s),
              "gamma21 is not an open circuit around B(3^{k+2}) in Ann(3^{k+2},3^{k+3})");

    for (int i = 0; i < 4; ++i) {
        const Edge& e = w.e[std::size_t(i)];
        const std::string name = "e" + std::to_string(i + 1);
        c.require(c.has(e), name + " outside the config box");
        if (!c.has(e)) continue;
        c.require(spec.box(i + 1).contains(e), name + " not in its box");
        const auto [lo, hi] = spec.interval(i + 1);
        const double om = cfg.omega(e);
        c.require(om > lo && om < hi, name + " omega outside its interval");
        c.require(e.has_endpoint(w.u[std::size_t(i)]) && e.has_endpoint(w.v[std::size_t(i)]) &&
                      w.u[std::size_t(i)] != w.v[std::size_t(i)],
                  name + " endpoints mislabelled");
    }
    c.require(w.e[0] != w.e[1] && w.e[1] != w.e[2] && w.e[0] != w.e[2] && w.e[3] != w.e[1],
              "edges e1..e4 are not distinct");

    const auto& g1 = w.gamma11.vertices;
    const auto& g2 = w.gamma21.vertices;
    struct Leg {
        int idx;
        std::function<bool(Vertex)> from, to;
        const char* what;
    };
    const std::vector<Leg> legs = {
        {0, [&](Vertex x) { return contains_vertex(g1, x); }, [&](Vertex x) { return x == w.u[0]; },
         "open path gamma11 -> e1"},
        {1, [&](Vertex x) { return x == w.v[0]; }, [&](Vertex x) { return x == w.u[1]; }, "open path e1 -> e2"},
        {2, [&](Vertex x) { return x == w.v[1]; }, [&](Vertex x) { return x == w.u[2]; }, "open path e2 -> e3"},
        {3, [&](Vertex x) { return x == w.v[2]; }, [&](Vertex x) { return contains_vertex(g2, x); },
         "open path e3 -> gamma21"},
        {4, [&](Vertex x) { return contains_vertex(g1, x); }, [&](Vertex x) { return x == w.u[3]; },
         "open path gamma11 -> e4"},
        {5, [&](Vertex x) { return x == w.v[3]; }, [&](Vertex x) { return contains_vertex(g2, x); },
         "open path e4 -> gamma21"},
    };
    for (const Leg& leg : legs) {
        const auto& path = w.open_paths[std::size_t(leg.idx)];
        c.require(c.open_path(path, pc) && leg.from(path.front()) && leg.to(path.back()), leg.what);
    }

    c.require(c.closed_dual_path(w.gamma12.vertices, spec.q_k), "gamma12 is not a closed dual path");
    c.require(c.closed_dual_path(w.gamma22.vertices, spec.q_k), "gamma22 is not a closed dual path");
    c.require(c.closed_dual_path(w.gamma13.vertices, spec.q_k), "gamma13 is not a closed dual path");
    c.require(c.closed_dual_path(w.gamma23.vertices, spec.q_k), "gamma23 is not a closed dual path");
    c.require(c.dual_circuit(dual_of(w.e[3]), w.gamma13.vertices, dual_of(w.e[1]), w.gamma23.vertices, {0, 0}),
              "e4*, gamma13, e2*, gamma23 do not form a dual circuit around zero");
    c.require(c.dual_circuit(dual_of(w.e[0]), w.gamma12.vertices, dual_of(w.e[2]), w.gamma22.vertices,
                             w.e[1].midpoint()),
              "e1*, gamma12, e3*, gamma22 do not form a dual circuit around e2*");

    const int far = spec.far_radius();
    c.require(!w.far_path.empty() && c.open_path(w.far_path, spec.q_k1) && contains_vertex(g2, w.far_path.front()) &&
                  linf_norm(w.far_path.back()) == far,
              "no q_{k+1}-open path from gamma21 to the far boundary");
    return out;
}

}  // namespace fppinv
