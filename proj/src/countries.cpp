#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <set>

#include <Eigen/Dense>
#include <spdlog/spdlog.h>

#include "rtopmap/layout.hpp"

namespace rtopmap {

std::string Rgb::hex() const {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

double color_distance(Rgb a, Rgb b) {
    const double dr = a.r - b.r, dg = a.g - b.g, db = a.b - b.b;
    return std::sqrt(dr * dr + dg * dg + db * db);
}

const std::vector<Rgb>& country_palette() {
    static const std::vector<Rgb> palette = [] {
        constexpr std::uint8_t levels[] = {95, 175, 255};
        std::vector<Rgb> lattice;
        for (auto r : levels)
            for (auto g : levels)
                for (auto b : levels)
                    if (!(r == 255 && g == 255 && b == 255)) lattice.push_back({r, g, b});
        std::vector<Rgb> ordered{lattice.front()};
        std::vector<bool> used(lattice.size(), false);
        used[0] = true;
        while (ordered.size() < lattice.size()) {
            std::size_t pick = 0;
            double best = -1;
            for (std::size_t i = 0; i < lattice.size(); ++i) {
                if (used[i]) continue;
                double d = std::numeric_limits<double>::infinity();
                for (const auto& c : ordered) d = std::min(d, color_distance(c, lattice[i]));
                if (d > best) {
                    best = d;
                    pick = i;
                }
            }
            used[pick] = true;
            ordered.push_back(lattice[pick]);
        }
        return ordered;
    }();
    return palette;
}

namespace {

struct Segment {
    Vec2 a, b;
};

// Chains directed boundary segments into closed rings. At a vertex with
// several continuations, the sharpest left turn keeps rings simple.
std::vector<Ring> chain_rings(std::vector<Segment> segs, double eps) {
    std::vector<Ring> rings;
    const std::size_t m = segs.size();
    std::vector<std::size_t> by_x(m);
    for (std::size_t i = 0; i < m; ++i) by_x[i] = i;
    std::sort(by_x.begin(), by_x.end(), [&](auto p, auto q) { return segs[p].a.x < segs[q].a.x || (segs[p].a.x == segs[q].a.x && p < q); });
    std::vector<double> xs(m);
    for (std::size_t k = 0; k < m; ++k) xs[k] = segs[by_x[k]].a.x;
    std::vector<bool> used(m, false);

    auto next_from = [&](Vec2 p, Vec2 dir) -> std::size_t {
        std::size_t best = m;
        double best_turn = -10;
        auto lo = std::lower_bound(xs.begin(), xs.end(), p.x - eps) - xs.begin();
        for (auto k = static_cast<std::size_t>(lo); k < m && xs[k] <= p.x + eps; ++k) {
            auto s = by_x[k];
            if (used[s] || (segs[s].a - p).norm2() > eps * eps) continue;
            Vec2 d = segs[s].b - segs[s].a;
            double turn = std::atan2(cross(dir, d), dot(dir, d));
            if (turn > best_turn) {
                best_turn = turn;
                best = s;
            }
        }
        if (best != m) return best;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < m; ++s) {
            if (used[s]) continue;
            double d = (segs[s].a - p).norm2();
            if (d < best_d) {
                best_d = d;
                best = s;
            }
        }
        return best;
    };

    for (std::size_t start = 0; start < m; ++start) {
        if (used[start]) continue;
        Ring ring;
        used[start] = true;
        ring.push_back(segs[start].a);
        Vec2 origin = segs[start].a;
        Vec2 end = segs[start].b;
        Vec2 dir = segs[start].b - segs[start].a;
        for (std::size_t guard = 0; guard < m; ++guard) {
            if ((end - origin).norm2() <= eps * eps) break;
            auto s = next_from(end, dir);
            if (s == m) break;
            used[s] = true;
            ring.push_back(segs[s].a);
            dir = segs[s].b - segs[s].a;
            end = segs[s].b;
        }
        // Drop collinear vertices.
        for (bool changed = true; changed && ring.size() > 3;) {
            changed = false;
            for (std::size_t k = 0; k < ring.size() && ring.size() > 3; ++k) {
                const Vec2 p = ring[(k + ring.size() - 1) % ring.size()];
                const Vec2 q = ring[k];
                const Vec2 r = ring[(k + 1) % ring.size()];
                const Vec2 u = q - p, v = r - q;
                if (std::abs(cross(u, v)) <= 1e-12 * u.norm() * v.norm() && dot(u, v) > 0) {
                    ring.erase(ring.begin() + static_cast<long>(k));
                    changed = true;
                }
            }
        }
        if (ring.size() >= 3 && std::abs(signed_area(ring)) > eps * eps) rings.push_back(std::move(ring));
    }
    std::sort(rings.begin(), rings.end(), [](const Ring& a, const Ring& b) {
        return signed_area(a) > signed_area(b);
    });
    return rings;
}

}  // namespace

CountryMap build_countries(const Embedding& e, const ClusterAssignment& clusters, double padding) {
    const std::size_t n = e.size();
    if (n == 0) throw InvalidArgument("cannot build countries without nodes");
    if (clusters.cluster_of.size() != n) throw InvalidArgument("cluster assignment does not match embedding");

    CountryMap map;
    map.cluster_of = clusters.cluster_of;
    Rect box = Rect::around(e.positions[0], e.boxes[0]);
    for (std::size_t i = 1; i < n; ++i) box.expand(Rect::around(e.positions[i], e.boxes[i]));
    map.bounds = box.inflated(padding * std::max(box.width(), box.height()));

    const Vec2 c = map.bounds.center();
    const double radius = 2 * map.bounds.diagonal();
    std::vector<Vec2> extra;
    for (std::size_t k = 0; k < kBoundarySites; ++k) {
        const double a = 2 * std::numbers::pi * static_cast<double>(k) / kBoundarySites;
        extra.push_back(c + Vec2{std::cos(a), std::sin(a)} * radius);
    }
    auto cells = voronoi_cells(e.positions, map.bounds, extra);

    const std::size_t k = clusters.cluster_count();
    const double eps = 1e-9 * map.bounds.diagonal();
    std::vector<std::vector<Segment>> boundary(k);
    std::set<std::pair<std::uint32_t, std::uint32_t>> adjacent;
    for (std::size_t i = 0; i < n; ++i) {
        const auto own = map.cluster_of[i];
        const auto& cell = cells[i];
        for (std::size_t s = 0; s < cell.ring.size(); ++s) {
            const long nb = cell.neighbor[s];
            if (nb >= 0 && map.cluster_of[static_cast<std::size_t>(nb)] == own) continue;
            const Vec2 a = cell.ring[s];
            const Vec2 b = cell.ring[(s + 1) % cell.ring.size()];
            boundary[own].push_back({a, b});
            if (nb >= 0 && (b - a).norm() > eps) {
                auto other = map.cluster_of[static_cast<std::size_t>(nb)];
                adjacent.insert({std::min(own, other), std::max(own, other)});
            }
        }
    }
    map.polygons.resize(k);
    for (std::size_t cl = 0; cl < k; ++cl) map.polygons[cl] = chain_rings(std::move(boundary[cl]), eps * 10);
    map.adjacency.assign(adjacent.begin(), adjacent.end());
    map.colors = color_countries(map);
    return map;
}

std::vector<Rgb> color_countries(const CountryMap& countries, const ColorOptions& opts) {
    const std::size_t k = countries.polygons.size();
    const auto& palette = country_palette();
    std::vector<Rgb> colors(k);
    if (k == 0) return colors;

    std::vector<double> fiedler(k, 0.0);
    if (k > 1) {
        Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(static_cast<long>(k), static_cast<long>(k));
        for (auto [a, b] : countries.adjacency) {
            lap(a, b) -= 1;
            lap(b, a) -= 1;
            lap(a, a) += 1;
            lap(b, b) += 1;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
        Eigen::VectorXd v = solver.eigenvectors().col(1);
        for (long i = 0; i < v.size(); ++i) {
            if (std::abs(v[i]) > 1e-9) {
                if (v[i] < 0) v = -v;
                break;
            }
        }
        for (std::size_t i = 0; i < k; ++i) fiedler[i] = std::round(v[static_cast<long>(i)] * 1e9) / 1e9;
    }
    std::vector<std::size_t> order(k);
    for (std::size_t i = 0; i < k; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return fiedler[a] < fiedler[b]; });
    for (std::size_t r = 0; r < k; ++r) colors[order[r]] = palette[r % palette.size()];

    std::vector<std::vector<std::size_t>> adj(k);
    for (auto [a, b] : countries.adjacency) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    auto conflict = [&](std::size_t c) {
        for (auto o : adj[c])
            if (color_distance(colors[c], colors[o]) < opts.min_distance) return true;
        return false;
    };
    bool unresolved = false;
    for (std::size_t r = 0; r < k; ++r) {
        const auto c = order[r];
        if (!conflict(c)) continue;
        const Rgb* pick = nullptr;
        double pick_margin = -1;
        for (const auto& candidate : palette) {
            double margin = std::numeric_limits<double>::infinity();
            for (auto o : adj[c]) margin = std::min(margin, color_distance(candidate, colors[o]));
            if (margin >= opts.min_distance) {
                pick = &candidate;
                break;
            }
            if (margin > pick_margin) {
                pick_margin = margin;
                pick = &candidate;
            }
        }
        colors[c] = *pick;
        if (conflict(c)) unresolved = true;
    }
    if (unresolved) spdlog::warn("palette too small: some adjacent countries have similar colors");
    return colors;
}

nlohmann::json geometry_to_json(const Embedding& e, const CountryMap& countries) {
    nlohmann::json positions = nlohmann::json::object();
    nlohmann::json boxes = nlohmann::json::object();
    nlohmann::json clusters = nlohmann::json::object();
    for (std::size_t i = 0; i < e.size(); ++i) {
        const auto key = e.ids[i].str();
        positions[key] = {e.positions[i].x, e.positions[i].y};
        boxes[key] = {e.boxes[i].width, e.boxes[i].height};
        if (i < countries.cluster_of.size()) clusters[key] = countries.cluster_of[i];
    }
    nlohmann::json list = nlohmann::json::array();
    for (std::size_t c = 0; c < countries.polygons.size(); ++c) {
        nlohmann::json rings = nlohmann::json::array();
        for (const auto& ring : countries.polygons[c]) {
            nlohmann::json pts = nlohmann::json::array();
            for (const auto& p : ring) pts.push_back({p.x, p.y});
            rings.push_back(std::move(pts));
        }
        list.push_back({{"cluster", c},
                        {"color", c < countries.colors.size() ? countries.colors[c].hex() : "#808080"},
                        {"rings", std::move(rings)}});
    }
    nlohmann::json adjacency = nlohmann::json::array();
    for (auto [a, b] : countries.adjacency) adjacency.push_back({a, b});
    const auto& b = countries.bounds;
    return {{"positions", std::move(positions)},
            {"boxes", std::move(boxes)},
            {"clusters", std::move(clusters)},
            {"countries", std::move(list)},
            {"adjacency", std::move(adjacency)},
            {"bounds", {b.min_x, b.min_y, b.max_x, b.max_y}}};
}

}  // namespace rtopmap
