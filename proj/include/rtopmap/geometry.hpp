#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <vector>

namespace rtopmap {

struct Vec2 {
    double x = 0;
    double y = 0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
    friend Vec2 operator*(double s, Vec2 a) { return {a.x * s, a.y * s}; }
    Vec2& operator+=(Vec2 o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    Vec2& operator-=(Vec2 o) {
        x -= o.x;
        y -= o.y;
        return *this;
    }
    bool operator==(const Vec2&) const = default;

    double norm2() const { return x * x + y * y; }
    double norm() const { return std::sqrt(norm2()); }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

struct Size2 {
    double width = 0;
    double height = 0;

    bool operator==(const Size2&) const = default;
};

struct Rect {
    double min_x = 0;
    double min_y = 0;
    double max_x = 0;
    double max_y = 0;

    static Rect around(Vec2 center, Size2 size) {
        return {center.x - size.width / 2, center.y - size.height / 2, center.x + size.width / 2,
                center.y + size.height / 2};
    }
    double width() const { return max_x - min_x; }
    double height() const { return max_y - min_y; }
    double area() const { return width() * height(); }
    Vec2 center() const { return {(min_x + max_x) / 2, (min_y + max_y) / 2}; }
    double diagonal() const { return std::hypot(width(), height()); }
    void expand(const Rect& o);
    Rect inflated(double margin) const {
        return {min_x - margin, min_y - margin, max_x + margin, max_y + margin};
    }
    bool operator==(const Rect&) const = default;
};

// Positive-area intersection of two center/size boxes; touching edges do not count.
inline bool boxes_overlap(Vec2 a, Size2 sa, Vec2 b, Size2 sb) {
    return std::abs(a.x - b.x) < (sa.width + sb.width) / 2 &&
           std::abs(a.y - b.y) < (sa.height + sb.height) / 2;
}

// Smaller of the two axis penetrations, or 0 when the boxes do not overlap.
double overlap_depth(Vec2 a, Size2 sa, Vec2 b, Size2 sb);

// All overlapping pairs (i < j), by sweep over x.
std::vector<std::pair<std::size_t, std::size_t>> overlapping_pairs(std::span<const Vec2> centers,
                                                                   std::span<const Size2> sizes);

using Ring = std::vector<Vec2>;

// Positive for counterclockwise rings.
double signed_area(const Ring& ring);

// Ray-casting test against one ring.
bool point_in_ring(Vec2 p, const Ring& ring);

// Even-odd test against a set of rings (outer rings and holes).
bool point_in_rings(Vec2 p, const std::vector<Ring>& rings);

// A bounded Voronoi cell: counterclockwise ring; neighbor[k] is the site whose
// bisector produced edge ring[k] -> ring[k+1], or -1 for the clip boundary and
// for extra sites.
struct VoronoiCell {
    Ring ring;
    std::vector<long> neighbor;
};

// Voronoi cells of `sites` clipped to `clip`. `extra_sites` take part in the
// diagram but get no cell of their own. Sites must be pairwise distinct.
std::vector<VoronoiCell> voronoi_cells(std::span<const Vec2> sites, const Rect& clip,
                                       std::span<const Vec2> extra_sites = {});

// Delaunay edges (i < j) recovered from the Voronoi neighbor relation.
std::vector<std::pair<std::size_t, std::size_t>> delaunay_edges(std::span<const Vec2> sites);

}  // namespace rtopmap
