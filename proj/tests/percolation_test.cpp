#include <gtest/gtest.h>

#include <deque>
#include <random>
#include <set>

#include "fppinv/percolation.hpp"
#include "fppinv/scaling.hpp"
#include "oracles.hpp"

using namespace fppinv;

namespace {

// Self-avoiding paths from `start` that stop at their first target vertex.
template <class Node, class Next>
std::vector<std::vector<Node>> arm_paths(Node start, Next&& next, const std::function<bool(Node)>& target) {
    std::vector<std::vector<Node>> out;
    std::vector<Node> path{start};
    std::set<Node> on{start};
    std::function<void(Node)> dfs = [&](Node v) {
        for (Node u : next(v)) {
            if (on.count(u)) continue;
            path.push_back(u);
            if (target(u)) {
                out.push_back(path);
            } else {
                on.insert(u);
                dfs(u);
                on.erase(u);
            }
            path.pop_back();
        }
    };
    dfs(start);
    return out;
}

template <class Node>
bool two_disjoint(const std::vector<std::vector<Node>>& paths) {
    for (std::size_t i = 0; i < paths.size(); ++i) {
        std::set<Node> a(paths[i].begin() + 1, paths[i].end());
        for (std::size_t j = i + 1; j < paths.size(); ++j) {
            bool ok = true;
            for (std::size_t t = 1; t < paths[j].size() && ok; ++t) ok = !a.count(paths[j][t]);
            if (ok) return true;
        }
    }
    return false;
}

bool oracle_open_arms(const LatticeConfig& cfg, double p, int n) {
    const Box b = Box::centered(n);
    auto next = [&](Vertex v) {
        std::vector<Vertex> out;
        for (Vertex u : oracle::neighbours(b, v))
            if (cfg.omega(Edge::between(u, v)) <= p) out.push_back(u);
        return out;
    };
    return two_disjoint(arm_paths<Vertex>({0, 0}, next, [n](Vertex v) { return linf_norm(v) == n; }));
}

bool oracle_closed_arms(const LatticeConfig& cfg, double p, int n) {
    const Box b = Box::centered(n);
    const int lim = 2 * n + 1;
    auto next = [&](HalfPoint h) {
        std::vector<HalfPoint> out;
        for (HalfPoint u : {HalfPoint{h.x2 + 2, h.y2}, HalfPoint{h.x2 - 2, h.y2}, HalfPoint{h.x2, h.y2 + 2},
                            HalfPoint{h.x2, h.y2 - 2}}) {
            if (std::abs(u.x2) > lim || std::abs(u.y2) > lim) continue;
            const Edge e = primal_of(h < u ? DualEdge{h, u} : DualEdge{u, h});
            if (b.contains(e) && cfg.omega(e) > p) out.push_back(u);
        }
        return out;
    };
    auto target = [lim](HalfPoint h) { return std::abs(h.x2) == lim || std::abs(h.y2) == lim; };
    return two_disjoint(arm_paths<HalfPoint>({1, 1}, next, target));
}

bool oracle_dual_connected(const LatticeConfig& cfg, double p, const std::vector<HalfPoint>& a,
                           const std::vector<HalfPoint>& b, const Box& region) {
    std::set<HalfPoint> seen(a.begin(), a.end());
    std::deque<HalfPoint> q(a.begin(), a.end());
    const std::set<HalfPoint> goal(b.begin(), b.end());
    while (!q.empty()) {
        const HalfPoint h = q.front();
        q.pop_front();
        if (goal.count(h)) return true;
        for (const Edge& e : edges_of_box(region)) {
            if (cfg.omega(e) <= p) continue;
            const DualEdge d = dual_of(e);
            HalfPoint u;
            if (d.p == h) u = d.q;
            else if (d.q == h) u = d.p;
            else continue;
            if (seen.insert(u).second) q.push_back(u);
        }
    }
    return false;
}

}  // namespace

TEST(Clusters, MatchBreadthFirstSearch) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto cfg = LatticeConfig::sample(Box::centered(6), seed);
        const Box region = Box::rect(7, 5, {-4, -2});
        for (double p : {0.3, 0.5, 0.62}) {
            const auto part = clusters_at_level(cfg, p, region);
            const auto comp = oracle::bfs_components(cfg, p, region);
            std::set<int> ids;
            for (const auto& [v, c] : comp) ids.insert(c);
            EXPECT_EQ(part.count(), std::int64_t(ids.size()));
            const auto vs = oracle::vertices_of(region);
            for (std::size_t i = 0; i < vs.size(); i += 3)
                for (std::size_t j = 0; j < vs.size(); j += 5)
                    EXPECT_EQ(part.same(vs[i], vs[j]), comp.at(vs[i]) == comp.at(vs[j]));
        }
    }
}

TEST(Clusters, ExtremeLevels) {
    const auto cfg = LatticeConfig::sample(Box::centered(4), 1);
    EXPECT_EQ(clusters_at_level(cfg, 0.0, cfg.box()).count(), 81);
    EXPECT_EQ(clusters_at_level(cfg, 1.0, cfg.box()).count(), 1);
}

TEST(Clusters, CoarsenAsPGrows) {
    const auto cfg = LatticeConfig::sample(Box::centered(8), 2);
    const auto lo = clusters_at_level(cfg, 0.45, cfg.box());
    const auto hi = clusters_at_level(cfg, 0.55, cfg.box());
    const auto vs = oracle::vertices_of(cfg.box());
    for (std::size_t i = 0; i < vs.size(); i += 7)
        for (std::size_t j = 0; j < vs.size(); j += 11)
            if (lo.same(vs[i], vs[j])) EXPECT_TRUE(hi.same(vs[i], vs[j]));
}

// Exactly one of an open left-right crossing and a closed top-bottom dual crossing, over
// every open/closed pattern of the rectangle.
TEST(Duality, ExhaustiveSmallRectangles) {
    for (const Box& rect : {Box::rect(2, 3), Box::rect(3, 2), Box::rect(1, 1, {-1, 4})}) {
        auto cfg = LatticeConfig::sample(rect, 0);
        const auto edges = edges_of_box(rect);
        const std::int64_t patterns = std::int64_t(1) << edges.size();
        for (std::int64_t mask = 0; mask < patterns; ++mask) {
            for (std::size_t i = 0; i < edges.size(); ++i) cfg.set_omega(edges[i], (mask >> i) & 1 ? 0.25 : 0.75);
            const bool open = has_left_right_crossing(cfg, 0.5, rect);
            const bool closed = has_top_bottom_dual_crossing(cfg, 0.5, rect);
            ASSERT_NE(open, closed) << "pattern " << mask;
        }
    }
}

TEST(Crossing, OracleAgreement) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const Box rect = Box::rect(4, 3, {-1, 0});
        const auto cfg = LatticeConfig::sample(Box::centered(6), seed);
        const auto comp = oracle::bfs_components(cfg, 0.5, rect);
        std::set<int> left, right;
        for (int y = rect.y0; y <= rect.y1; ++y) {
            left.insert(comp.at({rect.x0, y}));
            right.insert(comp.at({rect.x1, y}));
        }
        bool want = false;
        for (int c : left) want = want || right.count(c);
        EXPECT_EQ(has_left_right_crossing(cfg, 0.5, rect), want);
    }
}

TEST(Circuits, OutermostAndInnermostAgainstEnumeration) {
    const Annulus ann(1, 3);
    int found = 0;
    for (std::uint64_t seed = 0; seed < 80; ++seed) {
        const auto cfg = LatticeConfig::sample(Box::centered(3), seed);
        const double p = 0.7;
        const auto cycles = oracle::open_cycles(cfg, p, [&](const Edge& e) {
            return ann.contains(e) && !e.has_endpoint({0, 0});
        });
        std::vector<std::set<Vertex>> closed_regions;
        for (const auto& c : cycles) {
            if (!oracle::encloses(c, 0, 0)) continue;
            std::set<Vertex> r(c.begin(), c.end());
            for (Vertex v : oracle::vertices_of(cfg.box()))
                if (!r.count(v) && oracle::encloses(c, v.x, v.y)) r.insert(v);
            closed_regions.push_back(r);
        }
        const auto outer = outermost_circuit(cfg, p, ann);
        const auto inner = innermost_circuit(cfg, p, ann);
        ASSERT_EQ(outer.has_value(), !closed_regions.empty()) << seed;
        ASSERT_EQ(inner.has_value(), !closed_regions.empty()) << seed;
        if (!outer) continue;
        ++found;
        EXPECT_TRUE(verify_circuit(cfg, *outer, ann));
        EXPECT_TRUE(verify_circuit(cfg, *inner, ann));
        auto region_of = [&](const Circuit& c) {
            std::set<Vertex> r(c.vertices.begin(), c.vertices.end());
            for (Vertex v : oracle::vertices_of(cfg.box()))
                if (!r.count(v) && oracle::encloses(c.vertices, v.x, v.y)) r.insert(v);
            return r;
        };
        const auto ro = region_of(*outer), ri = region_of(*inner);
        for (const auto& r : closed_regions) {
            EXPECT_TRUE(std::includes(ro.begin(), ro.end(), r.begin(), r.end())) << seed;
            EXPECT_TRUE(std::includes(r.begin(), r.end(), ri.begin(), ri.end())) << seed;
        }
    }
    EXPECT_GT(found, 20);
}

TEST(Circuits, VerificationRejectsBrokenCircuits) {
    auto cfg = LatticeConfig::from_table(Box::centered(3), {}, 0.9);
    for (const Edge& e : edges_of_box(Box::centered(2)))
        if (linf_norm(e.a) == 2 && linf_norm(e.b) == 2) cfg.set_omega(e, 0.1);
    const Annulus ann(1, 3);
    auto c = outermost_circuit(cfg, 0.5, ann);
    ASSERT_TRUE(c);
    EXPECT_EQ(c->vertices.size(), 16u);
    EXPECT_TRUE(verify_circuit(cfg, *c, ann));
    auto reversed = *c;
    std::reverse(reversed.vertices.begin(), reversed.vertices.end());
    EXPECT_FALSE(verify_circuit(cfg, reversed, ann));
    EXPECT_FALSE(verify_circuit(cfg, *c, Annulus(3, 4)));
    cfg.set_omega(Edge::between({2, 0}, {2, 1}), 0.7);
    EXPECT_FALSE(verify_circuit(cfg, *c, ann));
    EXPECT_FALSE(outermost_circuit(cfg, 0.5, ann));
    EXPECT_TRUE(outermost_circuit(cfg, 0.7, ann));
}

TEST(Circuits, SeparatesOrigin) {
    const Grid g(Box::centered(4));
    EdgeMask ring(std::size_t(g.num_edges()), 0);
    for (const Edge& e : edges_of_box(Box::centered(2)))
        if (linf_norm(e.a) == 2 && linf_norm(e.b) == 2) ring[std::size_t(g.edge_index(e))] = 1;
    EXPECT_TRUE(separates_origin(g, ring));
    ring[std::size_t(g.edge_index(Edge::between({-2, 1}, {-2, 2})))] = 0;
    EXPECT_FALSE(separates_origin(g, ring));
}

TEST(DualPaths, MatchBreadthFirstSearch) {
    std::mt19937 rng(3);
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto cfg = LatticeConfig::sample(Box::centered(4), seed);
        const Box region = Box::centered(3);
        auto pick = [&]() {
            std::uniform_int_distribution<int> d(-3, 2);
            return dual_vertex_of({d(rng), d(rng)});
        };
        const std::vector<HalfPoint> a{pick()}, b{pick(), pick()};
        const bool want = oracle_dual_connected(cfg, 0.5, a, b, region);
        EXPECT_EQ(dual_connected(cfg, 0.5, a, b, region), want);
        const auto path = dual_path(cfg, 0.5, a, b, region);
        ASSERT_EQ(path.has_value(), want);
        if (!path) continue;
        EXPECT_EQ(path->vertices.front(), a[0]);
        for (std::size_t i = 0; i + 1 < path->vertices.size(); ++i) {
            const HalfPoint u = path->vertices[i], v = path->vertices[i + 1];
            const Edge e = primal_of(u < v ? DualEdge{u, v} : DualEdge{v, u});
            EXPECT_TRUE(region.contains(e));
            EXPECT_GT(cfg.omega(e), 0.5);
        }
    }
}

TEST(Arms, AgreeWithPathEnumeration) {
    for (int n : {1, 2}) {
        for (std::uint64_t seed = 0; seed < 40; ++seed) {
            const auto cfg = LatticeConfig::sample(Box::centered(n), seed * 31 + std::uint64_t(n));
            EXPECT_EQ(two_open_arms(cfg, 0.5, n), oracle_open_arms(cfg, 0.5, n)) << n << ' ' << seed;
            EXPECT_EQ(two_closed_dual_arms(cfg, 0.5, n), oracle_closed_arms(cfg, 0.5, n)) << n << ' ' << seed;
        }
    }
}

TEST(Arms, ExactFourArmProbabilityAtRadiusOne) {
    const Box box = Box::centered(1);
    const auto edges = edges_of_box(box);
    auto cfg = LatticeConfig::sample(box, 0);
    int hits = 0;
    for (int mask = 0; mask < (1 << 12); ++mask) {
        for (std::size_t i = 0; i < edges.size(); ++i) cfg.set_omega(edges[i], (mask >> i) & 1 ? 0.25 : 0.75);
        hits += oracle_open_arms(cfg, 0.5, 1) && oracle_closed_arms(cfg, 0.5, 1);
    }
    EXPECT_DOUBLE_EQ(exact_pi4_n1(), double(hits) / 4096.0);
}

TEST(FarBoundary, MonotoneAndValidated) {
    const auto cfg = LatticeConfig::sample(Box::centered(12), 8);
    bool prev = false;
    for (double p = 0.3; p <= 0.9; p += 0.05) {
        const bool now = box_connected_to_far_boundary(cfg, p, 2, 3);
        if (prev) EXPECT_TRUE(now);
        prev = now;
    }
    EXPECT_TRUE(box_connected_to_far_boundary(cfg, 1.0, 2, 3));
    EXPECT_THROW(box_connected_to_far_boundary(cfg, 0.5, 5, 3), DomainError);
}
