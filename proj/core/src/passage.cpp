#include "fppinv/passage.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>

namespace fppinv {

double PassageResult::value_or_infinity() const {
    return value ? *value : std::numeric_limits<double>::infinity();
}

PassageResult passage_time(const Grid& grid, const std::vector<double>& weights, const std::vector<Vertex>& A,
                           const std::vector<Vertex>& B, const EdgeMask* allowed) {
    if (A.empty() || B.empty()) throw DomainError("passage time needs nonempty vertex sets");
    for (const auto* set : {&A, &B}) {
        for (const Vertex& v : *set) {
            if (!grid.box().contains(v)) throw DomainError("vertex " + to_string(v) + " lies outside the box");
        }
    }
    PassageResult res;
    res.restricted = allowed != nullptr;

    const std::size_t nv = std::size_t(grid.num_vertices());
    std::vector<std::uint8_t> target(nv, 0);
    for (const Vertex& v : B) target[std::size_t(grid.vertex_index(v))] = 1;

    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(nv, inf);
    std::vector<std::int64_t> pred(nv, -1);
    std::vector<std::uint8_t> settled(nv, 0);
    using Entry = std::pair<double, std::int64_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    for (const Vertex& v : A) {
        const std::int64_t i = grid.vertex_index(v);
        if (dist[std::size_t(i)] != 0.0) {
            dist[std::size_t(i)] = 0.0;
            heap.push({0.0, i});
        }
    }
    while (!heap.empty()) {
        const auto [d, v] = heap.top();
        heap.pop();
        if (settled[std::size_t(v)]) continue;
        settled[std::size_t(v)] = 1;
        if (target[std::size_t(v)]) {
            res.value = d;
            for (std::int64_t x = v; pred[std::size_t(x)] >= 0;) {
                const Edge e = grid.edge(pred[std::size_t(x)]);
                res.path.push_back(e);
                x = grid.vertex_index(grid.vertex(x) == e.a ? e.b : e.a);
            }
            std::reverse(res.path.begin(), res.path.end());
            return res;
        }
        grid.for_each_neighbor(v, [&](std::int64_t u, std::int64_t e) {
            if (settled[std::size_t(u)] || (allowed && !(*allowed)[std::size_t(e)])) return;
            const double nd = d + weights[std::size_t(e)];
            if (nd < dist[std::size_t(u)]) {
                dist[std::size_t(u)] = nd;
                pred[std::size_t(u)] = e;
                heap.push({nd, u});
            } else if (nd == dist[std::size_t(u)] && e < pred[std::size_t(u)]) {
                pred[std::size_t(u)] = e;
            }
        });
    }
    return res;
}

PassageResult passage_time(const WeightModel& model, const LatticeConfig& cfg, const std::vector<Vertex>& A,
                           const std::vector<Vertex>& B, const EdgeMask* allowed) {
    return passage_time(cfg.grid(), weight_field(model, cfg), A, B, allowed);
}

PassageResult passage_time_to_boundary(const WeightModel& model, const LatticeConfig& cfg, int n) {
    if (!cfg.box().contains(Box::centered(n))) throw DomainError("B(n) exceeds the config box");
    return passage_time(model, cfg, {{0, 0}}, boundary_vertices(n));
}

PassageResult invasion_passage_time(const WeightModel& model, const LatticeConfig& cfg, const InvasionCluster& inv,
                                    const std::vector<Vertex>& A, const std::vector<Vertex>& B) {
    if (inv.box != cfg.box()) throw DomainError("invasion was run on a different config box");
    return passage_time(model, cfg, A, B, &inv.invaded);
}

std::vector<std::optional<double>> boundary_profile(const Grid& grid, const std::vector<double>& weights, int n,
                                                    const EdgeMask* allowed) {
    if (!grid.box().contains(Box::centered(n))) throw DomainError("B(n) exceeds the grid box");
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(std::size_t(grid.num_vertices()), inf);
    std::vector<std::uint8_t> settled(dist.size(), 0);
    std::vector<std::optional<double>> best(std::size_t(n) + 1);
    using Entry = std::pair<double, std::int64_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    const std::int64_t origin = grid.vertex_index({0, 0});
    dist[std::size_t(origin)] = 0.0;
    heap.push({0.0, origin});
    while (!heap.empty()) {
        const auto [d, v] = heap.top();
        heap.pop();
        if (settled[std::size_t(v)]) continue;
        settled[std::size_t(v)] = 1;
        const int r = linf_norm(grid.vertex(v));
        if (r > n) continue;
        if (!best[std::size_t(r)]) best[std::size_t(r)] = d;
        grid.for_each_neighbor(v, [&](std::int64_t u, std::int64_t e) {
            if (settled[std::size_t(u)] || (allowed && !(*allowed)[std::size_t(e)])) return;
            const double nd = d + weights[std::size_t(e)];
            if (nd < dist[std::size_t(u)]) {
                dist[std::size_t(u)] = nd;
                heap.push({nd, u});
            }
        });
    }
    return best;
}

double path_weight(const WeightModel& model, const LatticeConfig& cfg, const std::vector<Edge>& path) {
    double s = 0;
    for (const Edge& e : path) s += weight_of(model, cfg, e);
    return s;
}

}  // namespace fppinv
