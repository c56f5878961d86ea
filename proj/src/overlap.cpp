#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Sparse>
#include <spdlog/spdlog.h>

#include "rtopmap/layout.hpp"

namespace rtopmap {

namespace {

std::string overlap_message(double worst, std::size_t pairs) {
    std::ostringstream os;
    os << "overlap removal did not converge: " << pairs << " overlapping pairs remain, worst depth " << worst;
    return os.str();
}

struct Edge {
    std::size_t i, j;
    double target;
};

// Ideal length for an overlapping pair: stretch the current vector until the
// boxes just touch along the cheaper axis.
double expansion_factor(Vec2 a, Size2 sa, Vec2 b, Size2 sb) {
    const double dx = std::abs(a.x - b.x);
    const double dy = std::abs(a.y - b.y);
    const double fx = dx > 0 ? (sa.width + sb.width) / (2 * dx) : std::numeric_limits<double>::infinity();
    const double fy = dy > 0 ? (sa.height + sb.height) / (2 * dy) : std::numeric_limits<double>::infinity();
    return std::max(1.0, std::min(fx, fy));
}

// Weighted stress majorization (w = 1/d^2). The Laplacian is factored once
// per call; a weak anchor to the current layout removes the translation
// null space.
void stress_solve(std::vector<Vec2>& pos, const std::vector<Edge>& edges, std::size_t steps) {
    const auto n = static_cast<long>(pos.size());
    std::vector<Eigen::Triplet<double>> trip;
    std::vector<double> diag(pos.size(), 0.0);
    for (const auto& e : edges) {
        const double w = 1.0 / (e.target * e.target);
        trip.emplace_back(static_cast<long>(e.i), static_cast<long>(e.j), -w);
        trip.emplace_back(static_cast<long>(e.j), static_cast<long>(e.i), -w);
        diag[e.i] += w;
        diag[e.j] += w;
    }
    double mean = 0;
    for (double d : diag) mean += d;
    const double anchor = 1e-6 * mean / static_cast<double>(n);
    for (long i = 0; i < n; ++i) trip.emplace_back(i, i, diag[static_cast<std::size_t>(i)] + anchor);
    Eigen::SparseMatrix<double> lap(n, n);
    lap.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(lap);
    if (solver.info() != Eigen::Success) return;

    Eigen::VectorXd bx(n), by(n);
    for (std::size_t s = 0; s < steps; ++s) {
        for (long i = 0; i < n; ++i) {
            bx[i] = anchor * pos[static_cast<std::size_t>(i)].x;
            by[i] = anchor * pos[static_cast<std::size_t>(i)].y;
        }
        for (const auto& e : edges) {
            const double w = 1.0 / (e.target * e.target);
            Vec2 diff = pos[e.i] - pos[e.j];
            const double len = diff.norm();
            if (len <= 0) continue;
            const Vec2 f = diff * (w * e.target / len);
            bx[static_cast<long>(e.i)] += f.x;
            by[static_cast<long>(e.i)] += f.y;
            bx[static_cast<long>(e.j)] -= f.x;
            by[static_cast<long>(e.j)] -= f.y;
        }
        Eigen::VectorXd x = solver.solve(bx);
        Eigen::VectorXd y = solver.solve(by);
        for (long i = 0; i < n; ++i) pos[static_cast<std::size_t>(i)] = {x[i], y[i]};
    }
}

void separate_coincident(std::vector<Vec2>& pos, const std::vector<Size2>& sizes) {
    std::vector<std::size_t> order(pos.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) {
        return pos[a].x < pos[b].x || (pos[a].x == pos[b].x && (pos[a].y < pos[b].y || (pos[a].y == pos[b].y && a < b)));
    });
    double scale = 0;
    for (const auto& s : sizes) scale += s.width + s.height;
    scale = std::max(scale / static_cast<double>(2 * sizes.size()), 1e-9) * 1e-3;
    const std::vector<Vec2> original = pos;
    std::size_t run = 0;
    for (std::size_t k = 1; k < order.size(); ++k) {
        if (original[order[k]] == original[order[k - 1]]) {
            ++run;
            const double angle = 2.399963229728653 * static_cast<double>(run);
            pos[order[k]] += Vec2{std::cos(angle), std::sin(angle)} * (scale * static_cast<double>(run));
        } else {
            run = 0;
        }
    }
}

std::pair<double, std::size_t> worst_overlap(const std::vector<Vec2>& pos, const std::vector<Size2>& sizes) {
    auto pairs = overlapping_pairs(pos, sizes);
    double worst = 0;
    for (auto [i, j] : pairs) worst = std::max(worst, overlap_depth(pos[i], sizes[i], pos[j], sizes[j]));
    return {worst, pairs.size()};
}

}  // namespace

OverlapRemovalError::OverlapRemovalError(double worst_overlap, std::size_t overlapping_pairs)
    : Error(overlap_message(worst_overlap, overlapping_pairs)), worst_(worst_overlap), pairs_(overlapping_pairs) {}

Embedding remove_overlaps(const Embedding& e, const OverlapOptions& opts) {
    const std::size_t n = e.size();
    if (n < 2 || overlapping_pairs(e.positions, e.boxes).empty()) return e;

    Embedding out = e;
    auto& pos = out.positions;
    std::vector<Size2> padded(n);
    for (std::size_t i = 0; i < n; ++i)
        padded[i] = {e.boxes[i].width * (1 + opts.gap), e.boxes[i].height * (1 + opts.gap)};
    separate_coincident(pos, padded);

    // Proximity graph: Delaunay edges plus every pair whose padded boxes
    // currently overlap.
    std::size_t iter = 0;
    for (; iter < opts.max_iterations; ++iter) {
        if (overlapping_pairs(pos, e.boxes).empty()) break;
        std::vector<Edge> edges;
        auto add = [&](std::size_t i, std::size_t j) {
            const double len = (pos[i] - pos[j]).norm();
            const double t = expansion_factor(pos[i], padded[i], pos[j], padded[j]);
            edges.push_back({i, j, std::min(t, opts.max_expansion) * len});
        };
        auto tri = delaunay_edges(pos);
        for (auto [i, j] : tri) add(i, j);
        for (auto p : overlapping_pairs(pos, padded))
            if (!std::binary_search(tri.begin(), tri.end(), p)) add(p.first, p.second);
        stress_solve(pos, edges, opts.stress_steps);
    }
    spdlog::debug("overlap removal: {} proximity iterations", iter);

    // Fallback: damped push along the axis of least penetration.
    for (std::size_t round = 0; round < opts.push_rounds; ++round) {
        if (overlapping_pairs(pos, e.boxes).empty()) break;
        for (auto [i, j] : overlapping_pairs(pos, padded)) {
            const double px = (padded[i].width + padded[j].width) / 2 - std::abs(pos[i].x - pos[j].x);
            const double py = (padded[i].height + padded[j].height) / 2 - std::abs(pos[i].y - pos[j].y);
            if (px <= 0 || py <= 0) continue;
            if (px < py) {
                const double s = pos[i].x < pos[j].x || (pos[i].x == pos[j].x && i < j) ? -1.0 : 1.0;
                pos[i].x += s * px * 0.51;
                pos[j].x -= s * px * 0.51;
            } else {
                const double s = pos[i].y < pos[j].y || (pos[i].y == pos[j].y && i < j) ? -1.0 : 1.0;
                pos[i].y += s * py * 0.51;
                pos[j].y -= s * py * 0.51;
            }
        }
    }

    auto [worst, count] = worst_overlap(pos, out.boxes);
    if (count > 0) throw OverlapRemovalError(worst, count);
    return out;
}

}  // namespace rtopmap
