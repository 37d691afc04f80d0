#include "fppinv/invasion.hpp"

#include <functional>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>

namespace fppinv {

StopRule StopRule::steps(std::int64_t steps, bool confined) {
    if (steps < 0) throw DomainError("step budget must be nonnegative");
    StopRule r;
    r.kind = Kind::Budget;
    r.budget = steps;
    r.confined = confined;
    return r;
}

StopRule StopRule::touch(int M) {
    if (M < 1) throw DomainError("target radius must be at least 1");
    StopRule r;
    r.kind = Kind::Touch;
    r.M = M;
    return r;
}

StopRule StopRule::stabilize(int n, int M, std::int64_t window) {
    if (n < 1) throw DomainError("stabilization radius must be at least 1");
    StopRule r;
    r.kind = Kind::Stabilize;
    r.n = n;
    r.M = M < 0 ? 3 * n : M;
    if (r.M < n) throw DomainError("stabilization requires M >= n");
    r.window = window < 0 ? 4 * Grid(Box::centered(n)).num_edges() : window;
    return r;
}

bool InvasionCluster::contains(const Edge& e) const {
    const Grid g(box);
    return box.contains(e) && invaded[std::size_t(g.edge_index(e))];
}

bool InvasionCluster::contains(Vertex v) const {
    const Grid g(box);
    return box.contains(v) && reached[std::size_t(g.vertex_index(v))];
}

InvasionCluster invade(const LatticeConfig& cfg, const StopRule& stop) {
    const Grid& g = cfg.grid();
    const Box& box = cfg.box();
    if (!box.contains(Vertex{0, 0})) throw DomainError("config box must contain the origin");
    if (stop.kind != StopRule::Kind::Budget && !box.contains(Box::centered(stop.M))) {
        throw DomainError("config box smaller than B(" + std::to_string(stop.M) + ")");
    }

    InvasionCluster inv;
    inv.box = box;
    inv.invaded.assign(std::size_t(g.num_edges()), 0);
    inv.reached.assign(std::size_t(g.num_vertices()), 0);

    using Entry = std::pair<double, std::int64_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;
    auto add_vertex = [&](std::int64_t v) {
        inv.reached[std::size_t(v)] = 1;
        g.for_each_neighbor(v, [&](std::int64_t, std::int64_t e) {
            if (!inv.invaded[std::size_t(e)]) frontier.push({cfg.omega_at(e), e});
        });
    };
    add_vertex(g.vertex_index({0, 0}));

    const Box inner = stop.kind == StopRule::Kind::Stabilize ? Box::centered(stop.n) : Box{};
    std::int64_t quiet = 0;
    auto done = [&]() {
        switch (stop.kind) {
            case StopRule::Kind::Budget:
                return inv.steps >= stop.budget;
            case StopRule::Kind::Touch:
                return inv.touch_step >= 0;
            case StopRule::Kind::Stabilize:
                return inv.touch_step >= 0 && quiet >= stop.window;
        }
        return false;
    };

    while (!done()) {
        if (frontier.empty()) {
            if (stop.confined) break;
            throw TruncationError("invasion frontier exhausted", inv.steps);
        }
        const auto [w, e] = frontier.top();
        frontier.pop();
        if (inv.invaded[std::size_t(e)]) continue;
        inv.invaded[std::size_t(e)] = 1;
        const Edge edge = g.edge(e);
        inv.edges.push_back(edge);
        inv.omegas.push_back(w);
        inv.edge_ids.push_back(e);
        inv.max_omega = std::max(inv.max_omega, w);
        ++inv.steps;

        bool truncated = false;
        for (const Vertex v : {edge.a, edge.b}) {
            const std::int64_t vi = g.vertex_index(v);
            if (inv.reached[std::size_t(vi)]) continue;
            add_vertex(vi);
            inv.max_radius = std::max(inv.max_radius, linf_norm(v));
            if (stop.kind != StopRule::Kind::Budget && inv.touch_step < 0 && linf_norm(v) >= stop.M) {
                inv.touch_step = inv.steps;
            }
            truncated = truncated || (!stop.confined && box.on_boundary(v));
        }
        if (stop.kind == StopRule::Kind::Stabilize) {
            if (inner.contains(edge)) {
                inv.last_reentry_step = inv.steps;
                quiet = 0;
            } else if (inv.touch_step >= 0) {
                ++quiet;
            }
        }
        if (truncated && !done()) {
            std::ostringstream os;
            os << "invasion reached the config box boundary after " << inv.steps
               << " steps (max radius " << inv.max_radius << ", touch step " << inv.touch_step
               << ", last re-entry " << inv.last_reentry_step << "); enlarge the config box";
            throw TruncationError(os.str(), inv.steps);
        }
    }
    switch (stop.kind) {
        case StopRule::Kind::Budget: inv.reason = StopReason::Budget; break;
        case StopRule::Kind::Touch: inv.reason = StopReason::Touched; break;
        case StopRule::Kind::Stabilize: inv.reason = StopReason::Stabilized; break;
    }
    return inv;
}

std::vector<Edge> invaded_subgraph(const InvasionCluster& inv, const Box& b) {
    std::vector<Edge> out;
    for (const Edge& e : inv.edges) {
        if (b.contains(e)) out.push_back(e);
    }
    return out;
}

EdgeMask invaded_mask(const InvasionCluster& inv, const Grid& grid) {
    EdgeMask m(std::size_t(grid.num_edges()), 0);
    for (const Edge& e : inv.edges) {
        if (grid.box().contains(e)) m[std::size_t(grid.edge_index(e))] = 1;
    }
    return m;
}

std::vector<bool> check_circuit_containment(const LatticeConfig& cfg, const InvasionCluster& inv,
                                            const std::vector<Circuit>& circuits) {
    std::vector<bool> out;
    for (const Circuit& c : circuits) {
        bool all = true;
        for (const Edge& e : c.edges()) {
            if (!cfg.box().contains(e) || !inv.contains(e)) {
                all = false;
                break;
            }
        }
        out.push_back(all);
    }
    return out;
}

bool replay_is_greedy(const LatticeConfig& cfg, const InvasionCluster& inv) {
    const Grid& g = cfg.grid();
    std::vector<std::uint8_t> in_v(std::size_t(g.num_vertices()), 0);
    std::vector<std::uint8_t> in_e(std::size_t(g.num_edges()), 0);
    std::set<std::pair<double, std::int64_t>> boundary;
    auto grow = [&](Vertex v) {
        const std::int64_t vi = g.vertex_index(v);
        if (in_v[std::size_t(vi)]) return;
        in_v[std::size_t(vi)] = 1;
        g.for_each_neighbor(vi, [&](std::int64_t, std::int64_t e) {
            if (!in_e[std::size_t(e)]) boundary.insert({cfg.omega_at(e), e});
        });
    };
    grow({0, 0});
    for (std::size_t i = 0; i < inv.edges.size(); ++i) {
        if (boundary.empty()) return false;
        const auto [w, e] = *boundary.begin();
        if (g.edge(e) != inv.edges[i] || w != inv.omegas[i]) return false;
        boundary.erase(boundary.begin());
        in_e[std::size_t(e)] = 1;
        grow(inv.edges[i].a);
        grow(inv.edges[i].b);
    }
    return true;
}

void write_trace(std::ostream& os, const InvasionCluster& inv) {
    os.precision(17);
    for (std::size_t i = 0; i < inv.edges.size(); ++i) {
        const Edge& e = inv.edges[i];
        os << i + 1 << ' ' << e.a.x << ' ' << e.a.y << ' ' << e.b.x << ' ' << e.b.y << ' ' << inv.omegas[i] << '\n';
    }
}

std::string to_string(StopReason r) {
    switch (r) {
        case StopReason::Budget: return "budget";
        case StopReason::Touched: return "touched";
        case StopReason::Stabilized: return "stabilized";
    }
    return "unknown";
}

}  // namespace fppinv
