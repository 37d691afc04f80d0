#include "fppinv/planar.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <unordered_map>

namespace fppinv {

namespace {

std::uint64_t pack(HalfPoint p) {
    return (std::uint64_t(std::uint32_t(p.x2)) << 32) | std::uint32_t(p.y2);
}

}  // namespace

bool CellGrid::contains_center(HalfPoint p) const {
    const int dx = p.x2 - first_center.x2;
    const int dy = p.y2 - first_center.y2;
    if (dx < 0 || dy < 0 || dx % 2 != 0 || dy % 2 != 0) return false;
    return dx / 2 < w && dy / 2 < h;
}

std::int64_t CellGrid::cell_at(HalfPoint center) const {
    if (!contains_center(center)) throw DomainError("cell center outside the grid");
    return index((center.x2 - first_center.x2) / 2, (center.y2 - first_center.y2) / 2);
}

CellGrid CellGrid::faces_around(const Box& b) {
    return {b.x1 - b.x0 + 2, b.y1 - b.y0 + 2, {2 * b.x0 - 1, 2 * b.y0 - 1}};
}

CellGrid CellGrid::vertices_around(const Box& b) {
    return {b.x1 - b.x0 + 3, b.y1 - b.y0 + 3, {2 * b.x0 - 2, 2 * b.y0 - 2}};
}

std::pair<HalfPoint, HalfPoint> CellGrid::shared_side(std::int64_t a, std::int64_t b) const {
    const HalfPoint ca = center(a);
    const HalfPoint cb = center(b);
    if (ca.y2 == cb.y2) {
        const int mx = (ca.x2 + cb.x2) / 2;
        return {{mx, ca.y2 - 1}, {mx, ca.y2 + 1}};
    }
    const int my = (ca.y2 + cb.y2) / 2;
    return {{ca.x2 - 1, my}, {ca.x2 + 1, my}};
}

std::vector<std::uint8_t> fill_holes(const CellGrid& g, const std::vector<std::uint8_t>& in) {
    std::vector<std::uint8_t> outside(std::size_t(g.size()), 0);
    std::deque<std::int64_t> queue;
    for (std::int64_t c = 0; c < g.size(); ++c) {
        if (g.on_border(c) && !in[c]) {
            outside[c] = 1;
            queue.push_back(c);
        }
    }
    while (!queue.empty()) {
        const std::int64_t c = queue.front();
        queue.pop_front();
        g.for_each_neighbor(c, [&](std::int64_t d) {
            if (!in[d] && !outside[d]) {
                outside[d] = 1;
                queue.push_back(d);
            }
        });
    }
    for (auto& v : outside) v = !v;
    return outside;
}

std::vector<std::uint8_t> component_of(const CellGrid& g, const std::vector<std::uint8_t>& in,
                                       std::int64_t seed) {
    std::vector<std::uint8_t> comp(std::size_t(g.size()), 0);
    if (!in[seed]) return comp;
    std::deque<std::int64_t> queue{seed};
    comp[seed] = 1;
    while (!queue.empty()) {
        const std::int64_t c = queue.front();
        queue.pop_front();
        g.for_each_neighbor(c, [&](std::int64_t d) {
            if (in[d] && !comp[d]) {
                comp[d] = 1;
                queue.push_back(d);
            }
        });
    }
    return comp;
}

std::vector<HalfPoint> trace_boundary(const CellGrid& g, const std::vector<std::uint8_t>& in) {
    // corner -> the (at most two) other ends of boundary sides meeting there
    std::unordered_map<std::uint64_t, std::vector<HalfPoint>> adj;
    HalfPoint start{};
    bool any = false;
    for (std::int64_t c = 0; c < g.size(); ++c) {
        if (!in[c]) continue;
        if (g.on_border(c)) throw std::logic_error("trace_boundary: region touches the grid border");
        g.for_each_neighbor(c, [&](std::int64_t d) {
            if (in[d]) return;
            const auto [p, q] = g.shared_side(c, d);
            adj[pack(p)].push_back(q);
            adj[pack(q)].push_back(p);
            if (!any || p < start) start = p;
            any = true;
        });
    }
    if (!any) return {};
    std::vector<HalfPoint> poly{start};
    HalfPoint prev = start;
    HalfPoint cur = adj.at(pack(start)).at(0);
    while (cur != start) {
        const auto& nb = adj.at(pack(cur));
        if (nb.size() != 2) throw std::logic_error("trace_boundary: boundary is not a simple curve");
        poly.push_back(cur);
        const HalfPoint next = nb[0] == prev ? nb[1] : nb[0];
        prev = cur;
        cur = next;
    }
    if (poly.size() != adj.size()) {
        throw std::logic_error("trace_boundary: boundary has more than one component");
    }
    if (signed_area2(poly) < 0) std::reverse(poly.begin() + 1, poly.end());
    return poly;
}

std::int64_t signed_area2(const std::vector<HalfPoint>& polygon) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        const HalfPoint& a = polygon[i];
        const HalfPoint& b = polygon[(i + 1) % polygon.size()];
        s += std::int64_t(a.x2) * b.y2 - std::int64_t(b.x2) * a.y2;
    }
    return s;
}

int winding_number(const std::vector<HalfPoint>& polygon, HalfPoint p) {
    int wn = 0;
    for (std::size_t i = 0; i < polygon.size(); ++i) {
        const HalfPoint& a = polygon[i];
        const HalfPoint& b = polygon[(i + 1) % polygon.size()];
        const std::int64_t left = std::int64_t(b.x2 - a.x2) * (p.y2 - a.y2) -
                                  std::int64_t(p.x2 - a.x2) * (b.y2 - a.y2);
        if (a.y2 <= p.y2) {
            if (b.y2 > p.y2 && left > 0) ++wn;
        } else if (b.y2 <= p.y2 && left < 0) {
            --wn;
        }
    }
    return wn;
}

}  // namespace fppinv
