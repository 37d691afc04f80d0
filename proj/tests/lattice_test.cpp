#include <gtest/gtest.h>

#include <set>

#include "fppinv/lattice.hpp"
#include "fppinv/planar.hpp"
#include "oracles.hpp"

using namespace fppinv;

TEST(Lattice, EdgeCanonicalForm) {
    EXPECT_EQ(Edge::between({1, 0}, {0, 0}), Edge::between({0, 0}, {1, 0}));
    EXPECT_THROW(Edge::between({0, 0}, {1, 1}), DomainError);
    EXPECT_THROW(Edge::between({0, 0}, {0, 0}), DomainError);
}

TEST(Lattice, BoxCounts) {
    for (int n = 0; n <= 6; ++n) {
        const Grid g(Box::centered(n));
        const std::int64_t side = 2 * n + 1;
        EXPECT_EQ(g.num_vertices(), side * side);
        EXPECT_EQ(g.num_edges(), 2 * side * (side - 1));
        EXPECT_EQ(std::int64_t(edges_of_box(Box::centered(n)).size()), g.num_edges());
        EXPECT_EQ(boundary_vertices(n).size(), n == 0 ? 1u : std::size_t(8 * n));
    }
    EXPECT_THROW(Box::centered(-1), DomainError);
}

TEST(Lattice, IndexOrderIsLexicographic) {
    for (const Box& b : {Box::centered(3), Box::rect(4, 2, {-1, 5}), Box::rect(0, 3)}) {
        const Grid g(b);
        auto edges = edges_of_box(b);
        auto sorted = edges;
        std::sort(sorted.begin(), sorted.end());
        std::set<std::int64_t> seen;
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            EXPECT_EQ(g.edge_index(sorted[i]), std::int64_t(i));
            EXPECT_EQ(g.edge(std::int64_t(i)), sorted[i]);
        }
        for (std::int64_t v = 0; v < g.num_vertices(); ++v) EXPECT_EQ(g.vertex_index(g.vertex(v)), v);
    }
}

TEST(Lattice, NeighbourEnumerationMatchesEdges) {
    const Box b = Box::rect(3, 2, {2, -1});
    const Grid g(b);
    for (Vertex v : oracle::vertices_of(b)) {
        std::set<Vertex> got;
        g.for_each_neighbor(g.vertex_index(v), [&](std::int64_t u, std::int64_t e) {
            got.insert(g.vertex(u));
            EXPECT_TRUE(g.edge(e).has_endpoint(v));
            EXPECT_TRUE(g.edge(e).has_endpoint(g.vertex(u)));
        });
        auto want = oracle::neighbours(b, v);
        EXPECT_EQ(got, std::set<Vertex>(want.begin(), want.end()));
    }
}

TEST(Lattice, DualBijection) {
    std::set<DualEdge> duals;
    for (const Edge& e : edges_of_box(Box::centered(4))) {
        const DualEdge d = dual_of(e);
        EXPECT_EQ(primal_of(d), e);
        EXPECT_EQ(d.p.x2 + d.q.x2, 2 * e.midpoint().x2);
        EXPECT_EQ(d.p.y2 + d.q.y2, 2 * e.midpoint().y2);
        duals.insert(d);
    }
    EXPECT_EQ(duals.size(), edges_of_box(Box::centered(4)).size());
    EXPECT_EQ(dual_of(Edge::between({0, 0}, {1, 0})), (DualEdge{{1, -1}, {1, 1}}));
}

TEST(Lattice, AnnulusConvention) {
    const Annulus a(2, 4);
    for (const Edge& e : edges_of_box(Box::centered(5))) {
        const bool want = linf_norm(e.a) <= 4 && linf_norm(e.b) <= 4 && std::max(linf_norm(e.a), linf_norm(e.b)) >= 2;
        EXPECT_EQ(a.contains(e), want);
    }
    EXPECT_THROW(Annulus(3, 3), DomainError);
}

TEST(Lattice, EdgeKeysAreDistinct) {
    std::set<std::uint64_t> keys;
    const auto edges = edges_of_box(Box::centered(20));
    for (const Edge& e : edges) keys.insert(edge_key(e));
    EXPECT_EQ(keys.size(), edges.size());
}

TEST(Planar, TraceSquareRegion) {
    const CellGrid cells = CellGrid::vertices_around(Box::centered(3));
    std::vector<std::uint8_t> in(std::size_t(cells.size()), 0);
    for (int x = -1; x <= 1; ++x)
        for (int y = -1; y <= 1; ++y) in[std::size_t(cells.cell_at(HalfPoint::of({x, y})))] = 1;
    const auto poly = trace_boundary(cells, in);
    EXPECT_EQ(poly.size(), 12u);
    EXPECT_EQ(signed_area2(poly), 2 * 4 * 9);
    EXPECT_EQ(winding_number(poly, {0, 0}), 1);
    EXPECT_EQ(winding_number(poly, {4, 4}), 0);
}

TEST(Planar, FillHolesClosesRing) {
    const CellGrid cells = CellGrid::vertices_around(Box::centered(4));
    std::vector<std::uint8_t> in(std::size_t(cells.size()), 0);
    for (Vertex v : boundary_vertices(2)) in[std::size_t(cells.cell_at(HalfPoint::of(v)))] = 1;
    const auto filled = fill_holes(cells, in);
    for (Vertex v : oracle::vertices_of(Box::centered(4))) {
        EXPECT_EQ(bool(filled[std::size_t(cells.cell_at(HalfPoint::of(v)))]), linf_norm(v) <= 2) << to_string(v);
    }
}
