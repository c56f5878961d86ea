#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>

#include "rtopmap/layout.hpp"

namespace rtopmap {

std::optional<std::size_t> Embedding::index_of(TopicId id) const {
    auto it = std::lower_bound(ids.begin(), ids.end(), id);
    if (it != ids.end() && *it == id) return static_cast<std::size_t>(it - ids.begin());
    // ids are normally sorted; fall back to a scan otherwise.
    for (std::size_t i = 0; i < ids.size(); ++i)
        if (ids[i] == id) return i;
    return std::nullopt;
}

namespace {

using Adjacency = std::vector<std::vector<std::pair<std::uint32_t, double>>>;

// Barnes-Hut quadtree over a fixed point set.
class QuadTree {
public:
    QuadTree(std::span<const Vec2> points, std::size_t leaf_size = 4) : points_(points), leaf_size_(leaf_size) {
        order_.resize(points.size());
        std::iota(order_.begin(), order_.end(), 0u);
        if (points.empty()) return;
        Rect b{points[0].x, points[0].y, points[0].x, points[0].y};
        for (auto p : points) b.expand({p.x, p.y, p.x, p.y});
        double half = std::max(b.width(), b.height()) / 2 + 1e-9;
        nodes_.reserve(points.size() * 2);
        build(0, order_.size(), b.center(), half, 0);
    }

    // Repulsive force on point `self` (an index into points) or on an arbitrary location.
    Vec2 repulsion(std::size_t self, double strength, double theta) const {
        Vec2 p = points_[self];
        Vec2 f{};
        if (nodes_.empty()) return f;
        std::vector<std::uint32_t> stack{0};
        const double theta2 = theta * theta;
        while (!stack.empty()) {
            const Node& n = nodes_[stack.back()];
            stack.pop_back();
            if (n.leaf) {
                for (std::size_t k = n.begin; k < n.end; ++k) {
                    auto j = order_[k];
                    if (j == self) continue;
                    Vec2 d = p - points_[j];
                    double d2 = d.norm2();
                    if (d2 > 1e-300) f += d * (strength / d2);
                }
                continue;
            }
            Vec2 d = p - n.com;
            double d2 = d.norm2();
            double width = 2 * n.half;
            if (width * width < theta2 * d2) {
                f += d * (strength * n.mass / d2);
            } else {
                for (auto c : n.child)
                    if (c != 0) stack.push_back(c);
            }
        }
        return f;
    }

private:
    struct Node {
        Vec2 com;
        double half = 0;
        double mass = 0;
        std::size_t begin = 0, end = 0;
        std::uint32_t child[4] = {0, 0, 0, 0};
        bool leaf = true;
    };

    std::uint32_t build(std::size_t begin, std::size_t end, Vec2 center, double half, int depth) {
        auto id = static_cast<std::uint32_t>(nodes_.size());
        nodes_.emplace_back();
        Node node;
        node.half = half;
        node.begin = begin;
        node.end = end;
        node.mass = static_cast<double>(end - begin);
        for (std::size_t k = begin; k < end; ++k) node.com += points_[order_[k]];
        node.com = node.com * (1.0 / node.mass);
        if (end - begin > leaf_size_ && depth < 40) {
            node.leaf = false;
            auto first = order_.begin() + static_cast<long>(begin);
            auto last = order_.begin() + static_cast<long>(end);
            auto mid_y = std::partition(first, last, [&](auto i) { return points_[i].y < center.y; });
            auto q0 = std::partition(first, mid_y, [&](auto i) { return points_[i].x < center.x; });
            auto q2 = std::partition(mid_y, last, [&](auto i) { return points_[i].x < center.x; });
            const std::size_t bounds[5] = {begin, static_cast<std::size_t>(q0 - order_.begin()),
                                           static_cast<std::size_t>(mid_y - order_.begin()),
                                           static_cast<std::size_t>(q2 - order_.begin()), end};
            const double h = half / 2;
            const Vec2 centers[4] = {{center.x - h, center.y - h}, {center.x + h, center.y - h},
                                     {center.x - h, center.y + h}, {center.x + h, center.y + h}};
            for (int q = 0; q < 4; ++q) {
                if (bounds[q + 1] > bounds[q])
                    node.child[q] = build(bounds[q], bounds[q + 1], centers[q], h, depth + 1);
            }
        }
        nodes_[id] = node;
        return id;
    }

    std::span<const Vec2> points_;
    std::size_t leaf_size_;
    std::vector<std::uint32_t> order_;
    std::vector<Node> nodes_;
};

struct ForceParams {
    double k = 1;
    double c = 0.2;
    double theta = 1.0;
    std::size_t max_iterations = 100;
    double initial_step = 1;
};

// Spring-electrical iteration with adaptive step length.
void force_layout(const Adjacency& adj, std::vector<Vec2>& pos, const ForceParams& p) {
    const std::size_t n = pos.size();
    if (n < 2) return;
    const double strength = p.c * p.k * p.k;
    double step = p.initial_step;
    double energy = std::numeric_limits<double>::infinity();
    int progress = 0;
    const double t = 0.9;
    std::vector<Vec2> force(n);
    for (std::size_t iter = 0; iter < p.max_iterations; ++iter) {
        if (n > 64) {
            QuadTree tree(pos);
            for (std::size_t i = 0; i < n; ++i) force[i] = tree.repulsion(i, strength, p.theta);
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                Vec2 f{};
                for (std::size_t j = 0; j < n; ++j) {
                    if (j == i) continue;
                    Vec2 d = pos[i] - pos[j];
                    double d2 = d.norm2();
                    if (d2 > 1e-300) f += d * (strength / d2);
                }
                force[i] = f;
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (auto [j, w] : adj[i]) {
                Vec2 d = pos[j] - pos[i];
                force[i] += d * (d.norm() / p.k);
            }
        }
        const double previous = energy;
        energy = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double len = force[i].norm();
            energy += len * len;
            if (len > 0) pos[i] += force[i] * (step / len);
        }
        if (energy < previous) {
            if (++progress >= 5) {
                progress = 0;
                step /= t;
            }
        } else {
            progress = 0;
            step *= t;
        }
        if (step < 0.005 * p.k) break;
    }
}

struct Coarsening {
    Adjacency adj;
    std::vector<std::uint32_t> parent;  // fine index -> coarse index
};

Coarsening coarsen(const Adjacency& fine, Rng& rng) {
    const std::size_t n = fine.size();
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

    constexpr std::uint32_t kNone = UINT32_MAX;
    std::vector<std::uint32_t> match(n, kNone);
    for (auto v : order) {
        if (match[v] != kNone) continue;
        std::uint32_t best = kNone;
        double best_w = -1;
        for (auto [u, w] : fine[v]) {
            if (u == v || match[u] != kNone) continue;
            if (w > best_w || (w == best_w && u < best)) {
                best = u;
                best_w = w;
            }
        }
        match[v] = best == kNone ? v : best;
        if (best != kNone) match[best] = v;
    }

    Coarsening c;
    c.parent.assign(n, kNone);
    std::uint32_t next = 0;
    for (std::uint32_t v = 0; v < n; ++v) {
        if (c.parent[v] != kNone) continue;
        c.parent[v] = next;
        c.parent[match[v]] = next;
        ++next;
    }
    c.adj.resize(next);
    for (std::uint32_t v = 0; v < n; ++v) {
        for (auto [u, w] : fine[v]) {
            auto a = c.parent[v], b = c.parent[u];
            if (a != b) c.adj[a].emplace_back(b, w);
        }
    }
    for (auto& list : c.adj) {
        std::sort(list.begin(), list.end());
        std::vector<std::pair<std::uint32_t, double>> merged;
        for (auto& e : list) {
            if (!merged.empty() && merged.back().first == e.first) merged.back().second += e.second;
            else merged.push_back(e);
        }
        list = std::move(merged);
    }
    return c;
}

std::vector<Vec2> layout_component(const Adjacency& adj, const EmbedOptions& opts, double k, Rng& rng) {
    const std::size_t n = adj.size();
    if (n == 1) return {Vec2{0, 0}};

    std::vector<Adjacency> levels{adj};
    std::vector<std::vector<std::uint32_t>> parents;
    while (levels.back().size() > opts.coarsest_size) {
        auto c = coarsen(levels.back(), rng);
        if (c.adj.size() * 20 > levels.back().size() * 19) break;  // stalled
        parents.push_back(std::move(c.parent));
        levels.push_back(std::move(c.adj));
    }

    const auto& coarsest = levels.back();
    std::vector<Vec2> pos(coarsest.size());
    const double side = k * std::sqrt(static_cast<double>(coarsest.size()));
    for (auto& p : pos) p = {rng.uniform(0, side), rng.uniform(0, side)};
    ForceParams fp{k, opts.repulsion, opts.barnes_hut_theta, opts.coarsest_iterations, k};
    force_layout(coarsest, pos, fp);

    for (std::size_t lvl = levels.size() - 1; lvl > 0; --lvl) {
        const auto& parent = parents[lvl - 1];
        std::vector<Vec2> fine(levels[lvl - 1].size());
        for (std::size_t v = 0; v < fine.size(); ++v)
            fine[v] = pos[parent[v]] + Vec2{rng.uniform(-0.05, 0.05) * k, rng.uniform(-0.05, 0.05) * k};
        pos = std::move(fine);
        ForceParams rp{k, opts.repulsion, opts.barnes_hut_theta, opts.refine_iterations, 0.3 * k};
        force_layout(levels[lvl - 1], pos, rp);
    }
    return pos;
}

}  // namespace

double spring_length(const EmbedOptions& opts, const std::vector<Size2>& boxes) {
    if (opts.spring_length > 0) return opts.spring_length;
    if (boxes.empty()) return 1.0;
    double sum = 0;
    for (const auto& b : boxes) sum += std::hypot(b.width, b.height);
    return std::max(sum / static_cast<double>(boxes.size()), 1e-6);
}

Embedding embed(const TopicGraph& g, const EmbedOptions& opts) {
    if (g.empty()) throw InvalidArgument("cannot embed an empty graph");
    const std::size_t n = g.node_count();
    Embedding e;
    e.ids.reserve(n);
    e.boxes.reserve(n);
    for (const auto& node : g.nodes()) {
        e.ids.push_back(node.id);
        e.boxes.push_back(label_size(node.label, font_size(static_cast<double>(node.weight)), kLevelCount, opts.metrics));
    }
    const double k = spring_length(opts, e.boxes);
    e.positions.assign(n, Vec2{});

    // Connected components, largest first.
    const auto& adj = g.adjacency();
    std::vector<std::uint32_t> comp(n, UINT32_MAX);
    std::vector<std::vector<std::uint32_t>> components;
    for (std::uint32_t s = 0; s < n; ++s) {
        if (comp[s] != UINT32_MAX) continue;
        std::vector<std::uint32_t> members{s};
        comp[s] = static_cast<std::uint32_t>(components.size());
        for (std::size_t h = 0; h < members.size(); ++h) {
            for (auto [u, _] : adj[members[h]]) {
                if (comp[u] == UINT32_MAX) {
                    comp[u] = comp[s];
                    members.push_back(static_cast<std::uint32_t>(u));
                }
            }
        }
        std::sort(members.begin(), members.end());
        components.push_back(std::move(members));
    }
    std::stable_sort(components.begin(), components.end(),
                     [](const auto& a, const auto& b) { return a.size() > b.size(); });

    Rng rng(opts.seed);
    struct Placed {
        std::vector<std::uint32_t> members;
        std::vector<Vec2> pos;
        Rect bounds;
    };
    std::vector<Placed> placed;
    double total_area = 0;
    double widest = 0;
    std::vector<std::uint32_t> local(n);
    for (auto& members : components) {
        for (std::uint32_t i = 0; i < members.size(); ++i) local[members[i]] = i;
        Adjacency cadj(members.size());
        for (std::uint32_t i = 0; i < members.size(); ++i)
            for (auto [u, w] : adj[members[i]]) cadj[i].emplace_back(local[u], static_cast<double>(w));
        auto pos = layout_component(cadj, opts, k, rng);
        Rect b = Rect::around(pos[0], e.boxes[members[0]]);
        for (std::size_t i = 0; i < members.size(); ++i) b.expand(Rect::around(pos[i], e.boxes[members[i]]));
        total_area += (b.width() + k) * (b.height() + k);
        widest = std::max(widest, b.width());
        placed.push_back({members, std::move(pos), b});
    }

    // Shelf packing, left to right, rows top-down.
    const double row_width = std::max(widest, std::sqrt(total_area) * 1.2);
    double x = 0, y = 0, row_height = 0;
    for (auto& pc : placed) {
        if (x > 0 && x + pc.bounds.width() > row_width) {
            x = 0;
            y -= row_height + k;
            row_height = 0;
        }
        const Vec2 offset{x - pc.bounds.min_x, y - pc.bounds.max_y};
        for (std::size_t i = 0; i < pc.members.size(); ++i) e.positions[pc.members[i]] = pc.pos[i] + offset;
        x += pc.bounds.width() + k;
        row_height = std::max(row_height, pc.bounds.height());
    }
    if (n == 1) e.positions[0] = {0, 0};
    return e;
}

}  // namespace rtopmap
