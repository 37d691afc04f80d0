#pragma once

#include <cstdint>
#include <vector>

#include "fppinv/lattice.hpp"

namespace fppinv {

/// A rectangular array of unit cells addressed by their doubled centers. Cells centered
/// on dual vertices are the faces of Z^2 (their corners are primal vertices); cells
/// centered on primal vertices have dual vertices as corners.
struct CellGrid {
    int w = 0;
    int h = 0;
    HalfPoint first_center;  // center of cell (0,0)

    std::int64_t size() const { return std::int64_t(w) * h; }
    std::int64_t index(int i, int j) const { return std::int64_t(i) * h + j; }
    int col(std::int64_t c) const { return int(c / h); }
    int row(std::int64_t c) const { return int(c % h); }
    HalfPoint center(std::int64_t c) const {
        return {first_center.x2 + 2 * col(c), first_center.y2 + 2 * row(c)};
    }
    bool contains_center(HalfPoint p) const;
    std::int64_t cell_at(HalfPoint center) const;
    bool on_border(std::int64_t c) const {
        const int i = col(c), j = row(c);
        return i == 0 || j == 0 || i == w - 1 || j == h - 1;
    }

    /// Faces of Z^2 whose closures meet the box: lower-left corners x0-1..x1, y0-1..y1.
    static CellGrid faces_around(const Box& b);
    /// One cell per vertex of the box, plus a one-cell margin.
    static CellGrid vertices_around(const Box& b);

    template <class F>
    void for_each_neighbor(std::int64_t c, F&& f) const {
        const int i = col(c), j = row(c);
        if (i > 0) f(c - h);
        if (j > 0) f(c - 1);
        if (j < h - 1) f(c + 1);
        if (i < w - 1) f(c + h);
    }

    /// The side shared by two 4-adjacent cells, as a segment between two corners.
    std::pair<HalfPoint, HalfPoint> shared_side(std::int64_t a, std::int64_t b) const;
};

/// Everything not reachable from the grid border through cells outside `in`
/// (4-adjacency) is added to the region.
std::vector<std::uint8_t> fill_holes(const CellGrid& g, const std::vector<std::uint8_t>& in);

/// The 4-connected component of `in` containing `seed`.
std::vector<std::uint8_t> component_of(const CellGrid& g, const std::vector<std::uint8_t>& in,
                                       std::int64_t seed);

/// Outer boundary of a 4-connected, hole-free cell region that avoids the grid border,
/// as a counterclockwise closed polygon of corners (first corner not repeated).
std::vector<HalfPoint> trace_boundary(const CellGrid& g, const std::vector<std::uint8_t>& in);

/// Winding number of a closed lattice polygon around a point not on the polygon.
int winding_number(const std::vector<HalfPoint>& polygon, HalfPoint point);

/// Twice the signed area in doubled units (positive for counterclockwise).
std::int64_t signed_area2(const std::vector<HalfPoint>& polygon);

}  // namespace fppinv
