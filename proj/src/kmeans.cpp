#include <algorithm>
#include <limits>

#include "rtopmap/layout.hpp"

namespace rtopmap {

namespace {

std::uint32_t nearest(Vec2 p, const std::vector<Vec2>& centers) {
    std::uint32_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::uint32_t c = 0; c < centers.size(); ++c) {
        double d = (p - centers[c]).norm2();
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

void recompute_centroids(std::span<const Vec2> points, ClusterAssignment& a, std::vector<std::size_t>& sizes) {
    const std::size_t k = a.centroids.size();
    std::vector<Vec2> sum(k);
    sizes.assign(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        sum[a.cluster_of[i]] += points[i];
        ++sizes[a.cluster_of[i]];
    }
    for (std::size_t c = 0; c < k; ++c)
        if (sizes[c] > 0) a.centroids[c] = sum[c] * (1.0 / static_cast<double>(sizes[c]));
}

}  // namespace

ClusterAssignment cluster_nodes(std::span<const Vec2> points, std::size_t k, std::uint64_t seed,
                                std::size_t max_iterations) {
    const std::size_t n = points.size();
    if (k == 0 || k > n) throw InvalidArgument("cluster count must be in [1, node count]");

    Rng rng(seed);
    ClusterAssignment a;
    std::vector<bool> chosen(n, false);
    std::size_t first = rng.below(n);
    chosen[first] = true;
    a.centroids.push_back(points[first]);
    std::vector<double> dist(n);
    for (std::size_t i = 0; i < n; ++i) dist[i] = (points[i] - points[first]).norm2();
    while (a.centroids.size() < k) {
        std::size_t pick = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (chosen[i]) continue;
            if (pick == n || dist[i] > dist[pick]) pick = i;
        }
        chosen[pick] = true;
        a.centroids.push_back(points[pick]);
        for (std::size_t i = 0; i < n; ++i) dist[i] = std::min(dist[i], (points[i] - points[pick]).norm2());
    }

    a.cluster_of.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) a.cluster_of[i] = nearest(points[i], a.centroids);
    std::vector<std::size_t> sizes;
    for (a.iterations = 1; a.iterations <= max_iterations; ++a.iterations) {
        recompute_centroids(points, a, sizes);
        // Reseed empty clusters with the point farthest from its centroid.
        for (std::uint32_t c = 0; c < k; ++c) {
            if (sizes[c] > 0) continue;
            std::size_t far = n;
            double far_d = -1;
            for (std::size_t i = 0; i < n; ++i) {
                if (sizes[a.cluster_of[i]] < 2) continue;
                double d = (points[i] - a.centroids[a.cluster_of[i]]).norm2();
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            if (far == n) continue;
            --sizes[a.cluster_of[far]];
            a.cluster_of[far] = c;
            sizes[c] = 1;
            a.centroids[c] = points[far];
        }
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            auto c = nearest(points[i], a.centroids);
            if (c != a.cluster_of[i] && sizes[a.cluster_of[i]] > 1) {
                --sizes[a.cluster_of[i]];
                ++sizes[c];
                a.cluster_of[i] = c;
                changed = true;
            }
        }
        if (!changed) break;
    }
    a.iterations = std::min(a.iterations, max_iterations);
    recompute_centroids(points, a, sizes);

    // Single-point moves that lower the objective once centroids are updated.
    for (std::size_t pass = 0; pass < 1000; ++pass) {
        bool moved = false;
        for (std::size_t i = 0; i < n; ++i) {
            const auto from = a.cluster_of[i];
            if (sizes[from] < 2) continue;
            const double nf = static_cast<double>(sizes[from]);
            const double removal = nf / (nf - 1) * (points[i] - a.centroids[from]).norm2();
            std::uint32_t best = from;
            double best_cost = removal;
            for (std::uint32_t c = 0; c < k; ++c) {
                if (c == from) continue;
                const double nc = static_cast<double>(sizes[c]);
                const double add = nc / (nc + 1) * (points[i] - a.centroids[c]).norm2();
                if (add < best_cost * (1 - 1e-12)) {
                    best_cost = add;
                    best = c;
                }
            }
            if (best == from) continue;
            const double nt = static_cast<double>(sizes[best]);
            a.centroids[from] = (a.centroids[from] * nf - points[i]) * (1.0 / (nf - 1));
            a.centroids[best] = (a.centroids[best] * nt + points[i]) * (1.0 / (nt + 1));
            --sizes[from];
            ++sizes[best];
            a.cluster_of[i] = best;
            moved = true;
        }
        if (!moved) break;
    }
    recompute_centroids(points, a, sizes);
    return a;
}

ClusterAssignment cluster_nodes(const Embedding& e, std::size_t k, std::uint64_t seed) {
    return cluster_nodes(e.positions, k, seed);
}

double kmeans_objective(std::span<const Vec2> points, const ClusterAssignment& a) {
    double total = 0;
    for (std::size_t i = 0; i < points.size(); ++i) total += (points[i] - a.centroids[a.cluster_of[i]]).norm2();
    return total;
}

}  // namespace rtopmap
