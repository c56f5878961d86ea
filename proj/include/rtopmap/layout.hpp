#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rtopmap/common.hpp"
#include "rtopmap/geometry.hpp"
#include "rtopmap/graph.hpp"
#include "rtopmap/labels.hpp"

namespace rtopmap {

// Node positions and label boxes, index-aligned with ids.
struct Embedding {
    std::vector<TopicId> ids;
    std::vector<Vec2> positions;
    std::vector<Size2> boxes;

    std::size_t size() const { return ids.size(); }
    std::optional<std::size_t> index_of(TopicId id) const;
    bool operator==(const Embedding&) const = default;
};

struct EmbedOptions {
    std::uint64_t seed = 1;
    // Natural spring length; 0 derives it from the mean label box diagonal.
    double spring_length = 0;
    double repulsion = 0.2;
    std::size_t coarsest_size = 50;
    std::size_t coarsest_iterations = 600;
    std::size_t refine_iterations = 120;
    double barnes_hut_theta = 1.0;
    LabelMetrics metrics{};
};

// Multilevel spring-electrical layout. Components are laid out separately
// and shelf-packed. Boxes are the labels' extents at the deepest level.
Embedding embed(const TopicGraph& g, const EmbedOptions& opts = {});

// Natural spring length that embed() uses for the given options and boxes.
double spring_length(const EmbedOptions& opts, const std::vector<Size2>& boxes);

class OverlapRemovalError : public Error {
public:
    OverlapRemovalError(double worst_overlap, std::size_t overlapping_pairs);
    double worst_overlap() const { return worst_; }
    std::size_t pair_count() const { return pairs_; }

private:
    double worst_;
    std::size_t pairs_;
};

struct OverlapOptions {
    // Extra separation targeted during removal, as a fraction of box size.
    double gap = 0.02;
    // Largest per-iteration expansion of a proximity edge.
    double max_expansion = 1.5;
    std::size_t max_iterations = 400;
    std::size_t stress_steps = 4;
    std::size_t push_rounds = 2000;
};

// Proximity-graph stress expansion until no two boxes overlap.
// Overlap-free input is returned unchanged.
Embedding remove_overlaps(const Embedding& e, const OverlapOptions& opts = {});

struct ClusterAssignment {
    std::vector<std::uint32_t> cluster_of;
    std::vector<Vec2> centroids;
    std::size_t iterations = 0;

    std::size_t cluster_count() const { return centroids.size(); }
};

// k-means with farthest-point seeding, Lloyd iterations and a final
// single-point-move refinement.
ClusterAssignment cluster_nodes(std::span<const Vec2> points, std::size_t k, std::uint64_t seed,
                                std::size_t max_iterations = 100);
ClusterAssignment cluster_nodes(const Embedding& e, std::size_t k, std::uint64_t seed);

// Within-cluster sum of squared distances to the centroids.
double kmeans_objective(std::span<const Vec2> points, const ClusterAssignment& a);

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;

    bool operator==(const Rgb&) const = default;
    std::string hex() const;
};

double color_distance(Rgb a, Rgb b);

struct CountryMap {
    std::vector<std::uint32_t> cluster_of;
    // Per cluster: outer rings counterclockwise, holes clockwise.
    std::vector<std::vector<Ring>> polygons;
    std::vector<Rgb> colors;
    // Clusters sharing a boundary segment, (a < b), sorted.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> adjacency;
    Rect bounds;
};

inline constexpr std::size_t kBoundarySites = 16;

// Voronoi cells of the node centers inside the padded bounding box, merged
// per cluster.
CountryMap build_countries(const Embedding& e, const ClusterAssignment& clusters, double padding = 0.1);

struct ColorOptions {
    double min_distance = 80.0;
};

// Spectral ordering of the country adjacency graph mapped onto a spread
// palette, then greedy repair of any adjacent pair closer than min_distance.
std::vector<Rgb> color_countries(const CountryMap& countries, const ColorOptions& opts = {});

// The fixed palette: 26 RGB lattice colors, pairwise at least 80 apart,
// in farthest-first order.
const std::vector<Rgb>& country_palette();

nlohmann::json geometry_to_json(const Embedding& e, const CountryMap& countries);

}  // namespace rtopmap
