#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rtopmap/common.hpp"
#include "rtopmap/ingest.hpp"
#include "rtopmap/normalize.hpp"

namespace rtopmap {

struct TopicNode {
    TopicId id;
    std::string label;
    // Number of profiles listing the topic.
    std::uint64_t weight = 0;

    bool operator==(const TopicNode&) const = default;
};

// Undirected, u < v.
struct TopicEdge {
    TopicId u;
    TopicId v;
    // Number of profiles listing both topics.
    std::uint64_t weight = 0;

    bool operator==(const TopicEdge&) const = default;
};

// Nodes sorted by id, edges sorted by (u, v).
class TopicGraph {
public:
    TopicGraph() = default;
    TopicGraph(std::vector<TopicNode> nodes, std::vector<TopicEdge> edges);

    const std::vector<TopicNode>& nodes() const { return nodes_; }
    const std::vector<TopicEdge>& edges() const { return edges_; }
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    bool empty() const { return nodes_.empty(); }

    // Position of a topic in nodes(), if present.
    std::optional<std::size_t> index_of(TopicId id) const;
    const TopicNode* find(TopicId id) const;

    // Neighbor lists over node indices, each paired with the edge weight,
    // sorted by neighbor index.
    const std::vector<std::vector<std::pair<std::size_t, std::uint64_t>>>& adjacency() const {
        return adjacency_;
    }

    bool operator==(const TopicGraph& o) const { return nodes_ == o.nodes_ && edges_ == o.edges_; }

private:
    std::vector<TopicNode> nodes_;
    std::vector<TopicEdge> edges_;
    std::map<TopicId, std::size_t> index_;
    std::vector<std::vector<std::pair<std::size_t, std::uint64_t>>> adjacency_;
};

// Co-occurrence graph over the profiles' canonical topics.
TopicGraph build_graph(const std::vector<ResearcherProfile>& profiles, const TopicLexicon& lexicon);
TopicGraph build_graph(const Corpus& corpus, const TopicLexicon& lexicon);

// Drops light nodes (with their edges), then light edges. Isolated nodes stay.
TopicGraph filter_graph(const TopicGraph& g, std::uint64_t min_node_weight,
                        std::uint64_t min_edge_weight);

struct RankedTopic {
    TopicId id;
    std::string label;
    double value = 0;
};

struct GraphStats {
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    std::size_t component_count = 0;
    std::size_t giant_nodes = 0;
    std::size_t giant_edges = 0;
    std::map<std::size_t, std::size_t> degree_distribution;
    double clustering_coefficient = 0;
    std::optional<double> average_path;
    bool average_path_sampled = false;
    std::vector<RankedTopic> top_by_degree;
    std::vector<RankedTopic> top_by_weight;
    std::vector<RankedTopic> top_by_citations_per_person;
};

struct StatsOptions {
    std::size_t exact_path_limit = 2000;
    std::size_t min_sampled_pairs = 10000;
    std::size_t top_n = 10;
    std::uint64_t seed = 1;
};

GraphStats compute_stats(const TopicGraph& g, const Corpus& corpus, const StatsOptions& opts = {});

// Closed triples over connected triples.
double clustering_coefficient(const TopicGraph& g);

nlohmann::json graph_to_json(const TopicGraph& g);
TopicGraph graph_from_json(const nlohmann::json& j);
nlohmann::json stats_to_json(const GraphStats& s);

}  // namespace rtopmap
