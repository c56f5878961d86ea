#include "rtopmap/geometry.hpp"

#include <algorithm>
#include <numeric>

namespace rtopmap {

void Rect::expand(const Rect& o) {
    min_x = std::min(min_x, o.min_x);
    min_y = std::min(min_y, o.min_y);
    max_x = std::max(max_x, o.max_x);
    max_y = std::max(max_y, o.max_y);
}

double overlap_depth(Vec2 a, Size2 sa, Vec2 b, Size2 sb) {
    double px = (sa.width + sb.width) / 2 - std::abs(a.x - b.x);
    double py = (sa.height + sb.height) / 2 - std::abs(a.y - b.y);
    if (px <= 0 || py <= 0) return 0.0;
    return std::min(px, py);
}

std::vector<std::pair<std::size_t, std::size_t>> overlapping_pairs(std::span<const Vec2> centers,
                                                                   std::span<const Size2> sizes) {
    const std::size_t n = centers.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    auto left = [&](std::size_t i) { return centers[i].x - sizes[i].width / 2; };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return left(a) < left(b) || (left(a) == left(b) && a < b);
    });
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t oi = 0; oi < n; ++oi) {
        std::size_t i = order[oi];
        double right = centers[i].x + sizes[i].width / 2;
        for (std::size_t oj = oi + 1; oj < n; ++oj) {
            std::size_t j = order[oj];
            if (left(j) >= right) break;
            if (boxes_overlap(centers[i], sizes[i], centers[j], sizes[j]))
                out.emplace_back(std::min(i, j), std::max(i, j));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

double signed_area(const Ring& ring) {
    double a = 0;
    for (std::size_t i = 0, n = ring.size(); i < n; ++i) a += cross(ring[i], ring[(i + 1) % n]);
    return a / 2;
}

bool point_in_ring(Vec2 p, const Ring& ring) {
    bool inside = false;
    for (std::size_t i = 0, n = ring.size(), j = n - 1; i < n; j = i++) {
        const Vec2 a = ring[i];
        const Vec2 b = ring[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x) inside = !inside;
        }
    }
    return inside;
}

bool point_in_rings(Vec2 p, const std::vector<Ring>& rings) {
    bool inside = false;
    for (const auto& r : rings)
        if (point_in_ring(p, r)) inside = !inside;
    return inside;
}

namespace {

// Keeps the part of `cell` on the site's side of the bisector with `other`.
void clip_cell(VoronoiCell& cell, Vec2 site, Vec2 other, long label, VoronoiCell& scratch) {
    const Vec2 d = other - site;
    const Vec2 m = (site + other) * 0.5;
    const std::size_t n = cell.ring.size();
    bool any_out = false;
    for (const auto& p : cell.ring) {
        if (dot(p - m, d) > 0) {
            any_out = true;
            break;
        }
    }
    if (!any_out) return;

    scratch.ring.clear();
    scratch.neighbor.clear();
    for (std::size_t k = 0; k < n; ++k) {
        const Vec2 a = cell.ring[k];
        const Vec2 b = cell.ring[(k + 1) % n];
        const double sa = dot(a - m, d);
        const double sb = dot(b - m, d);
        const bool ina = sa <= 0;
        const bool inb = sb <= 0;
        if (ina) {
            scratch.ring.push_back(a);
            scratch.neighbor.push_back(cell.neighbor[k]);
        }
        if (ina != inb) {
            const double t = sa / (sa - sb);
            const Vec2 x = a + (b - a) * t;
            scratch.ring.push_back(x);
            scratch.neighbor.push_back(ina ? label : cell.neighbor[k]);
        }
    }
    std::swap(cell.ring, scratch.ring);
    std::swap(cell.neighbor, scratch.neighbor);
}

double max_radius2(const VoronoiCell& cell, Vec2 site) {
    double r = 0;
    for (const auto& p : cell.ring) r = std::max(r, (p - site).norm2());
    return r;
}

}  // namespace

std::vector<VoronoiCell> voronoi_cells(std::span<const Vec2> sites, const Rect& clip,
                                       std::span<const Vec2> extra_sites) {
    const std::size_t n = sites.size();
    std::vector<VoronoiCell> cells(n);
    if (n == 0) return cells;

    Rect bounds{sites[0].x, sites[0].y, sites[0].x, sites[0].y};
    for (const auto& s : sites) bounds.expand({s.x, s.y, s.x, s.y});
    double extent = std::max({bounds.width(), bounds.height(), 1e-9});
    double cs = std::max(std::sqrt(bounds.width() * bounds.height() / static_cast<double>(n)), extent / 1024);
    const long gx = std::max<long>(1, static_cast<long>(bounds.width() / cs) + 1);
    const long gy = std::max<long>(1, static_cast<long>(bounds.height() / cs) + 1);
    std::vector<std::vector<std::size_t>> grid(static_cast<std::size_t>(gx * gy));
    auto cell_of = [&](Vec2 p) {
        long cx = std::clamp<long>(static_cast<long>((p.x - bounds.min_x) / cs), 0, gx - 1);
        long cy = std::clamp<long>(static_cast<long>((p.y - bounds.min_y) / cs), 0, gy - 1);
        return std::pair{cx, cy};
    };
    for (std::size_t i = 0; i < n; ++i) {
        auto [cx, cy] = cell_of(sites[i]);
        grid[static_cast<std::size_t>(cy * gx + cx)].push_back(i);
    }

    VoronoiCell scratch;
    for (std::size_t i = 0; i < n; ++i) {
        auto& cell = cells[i];
        cell.ring = {{clip.min_x, clip.min_y}, {clip.max_x, clip.min_y}, {clip.max_x, clip.max_y}, {clip.min_x, clip.max_y}};
        cell.neighbor = {-1, -1, -1, -1};
        const Vec2 s = sites[i];
        for (const auto& e : extra_sites) clip_cell(cell, s, e, -1, scratch);

        auto [cx, cy] = cell_of(s);
        const long max_ring = std::max({cx, gx - 1 - cx, cy, gy - 1 - cy});
        for (long r = 0; r <= max_ring; ++r) {
            for (long y = cy - r; y <= cy + r; ++y) {
                if (y < 0 || y >= gy) continue;
                const bool edge_row = y == cy - r || y == cy + r;
                for (long x = cx - r; x <= cx + r; x += (edge_row ? 1 : 2 * r)) {
                    if (x >= 0 && x < gx) {
                        for (auto j : grid[static_cast<std::size_t>(y * gx + x)]) {
                            if (j == i || sites[j] == s) continue;
                            clip_cell(cell, s, sites[j], static_cast<long>(j), scratch);
                        }
                    }
                    if (r == 0) break;
                }
            }
            // Unvisited sites are at least r * cs away; their bisectors lie beyond r*cs/2.
            const double reach = static_cast<double>(r) * cs / 2;
            if (reach * reach >= max_radius2(cell, s)) break;
        }

        // Drop degenerate edges.
        const double eps2 = 1e-24 * std::max(1.0, clip.diagonal() * clip.diagonal());
        for (std::size_t k = 0; k < cell.ring.size() && cell.ring.size() > 3;) {
            std::size_t next = (k + 1) % cell.ring.size();
            if ((cell.ring[next] - cell.ring[k]).norm2() <= eps2) {
                cell.ring.erase(cell.ring.begin() + static_cast<long>(k));
                cell.neighbor.erase(cell.neighbor.begin() + static_cast<long>(k));
            } else {
                ++k;
            }
        }
    }
    return cells;
}

std::vector<std::pair<std::size_t, std::size_t>> delaunay_edges(std::span<const Vec2> sites) {
    if (sites.size() < 2) return {};
    Rect bounds{sites[0].x, sites[0].y, sites[0].x, sites[0].y};
    for (const auto& s : sites) bounds.expand({s.x, s.y, s.x, s.y});
    const double margin = std::max(bounds.width(), bounds.height()) * 0.5 + 1e-9;
    auto cells = voronoi_cells(sites, bounds.inflated(margin));
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        for (long j : cells[i].neighbor) {
            if (j >= 0) edges.emplace_back(std::min<std::size_t>(i, static_cast<std::size_t>(j)),
                                           std::max<std::size_t>(i, static_cast<std::size_t>(j)));
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

}  // namespace rtopmap
