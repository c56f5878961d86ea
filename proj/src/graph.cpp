#include "rtopmap/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace rtopmap {

using nlohmann::json;

TopicGraph::TopicGraph(std::vector<TopicNode> nodes, std::vector<TopicEdge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
    std::sort(nodes_.begin(), nodes_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    for (auto& e : edges_) {
        if (e.v < e.u) std::swap(e.u, e.v);
    }
    std::sort(edges_.begin(), edges_.end(), [](const auto& a, const auto& b) {
        return std::tie(a.u, a.v) < std::tie(b.u, b.v);
    });
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!index_.emplace(nodes_[i].id, i).second)
            throw InvalidArgument("duplicate node " + nodes_[i].id.str());
    }
    adjacency_.resize(nodes_.size());
    for (std::size_t k = 0; k < edges_.size(); ++k) {
        const auto& e = edges_[k];
        if (e.u == e.v) throw InvalidArgument("self-loop on " + e.u.str());
        if (k > 0 && edges_[k - 1].u == e.u && edges_[k - 1].v == e.v)
            throw InvalidArgument("parallel edge " + e.u.str() + "-" + e.v.str());
        auto iu = index_of(e.u);
        auto iv = index_of(e.v);
        if (!iu || !iv) throw InvalidArgument("edge references missing node");
        adjacency_[*iu].emplace_back(*iv, e.weight);
        adjacency_[*iv].emplace_back(*iu, e.weight);
    }
    for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
}

std::optional<std::size_t> TopicGraph::index_of(TopicId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

const TopicNode* TopicGraph::find(TopicId id) const {
    auto i = index_of(id);
    return i ? &nodes_[*i] : nullptr;
}

TopicGraph build_graph(const std::vector<ResearcherProfile>& profiles, const TopicLexicon& lexicon) {
    std::vector<std::uint64_t> weight(lexicon.size(), 0);
    std::vector<std::uint64_t> pairs;
    for (const auto& p : profiles) {
        std::vector<std::uint32_t> ts;
        for (auto t : p.topics) {
            if (!lexicon.contains(t)) throw InvalidArgument("profile " + p.id + " lists unknown topic " + t.str());
            ts.push_back(t.value);
        }
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
        for (std::size_t i = 0; i < ts.size(); ++i) {
            ++weight[ts[i]];
            for (std::size_t j = i + 1; j < ts.size(); ++j)
                pairs.push_back((static_cast<std::uint64_t>(ts[i]) << 32) | ts[j]);
        }
    }
    std::sort(pairs.begin(), pairs.end());

    std::vector<TopicNode> nodes;
    for (std::uint32_t t = 0; t < weight.size(); ++t) {
        if (weight[t] > 0) nodes.push_back({TopicId{t}, lexicon.topics()[t].name, weight[t]});
    }
    std::vector<TopicEdge> edges;
    for (std::size_t i = 0; i < pairs.size();) {
        std::size_t j = i;
        while (j < pairs.size() && pairs[j] == pairs[i]) ++j;
        edges.push_back({TopicId{static_cast<std::uint32_t>(pairs[i] >> 32)},
                         TopicId{static_cast<std::uint32_t>(pairs[i] & 0xffffffffu)}, j - i});
        i = j;
    }
    return TopicGraph(std::move(nodes), std::move(edges));
}

TopicGraph build_graph(const Corpus& corpus, const TopicLexicon& lexicon) {
    return build_graph(corpus.profiles, lexicon);
}

TopicGraph filter_graph(const TopicGraph& g, std::uint64_t min_node_weight,
                        std::uint64_t min_edge_weight) {
    std::vector<TopicNode> nodes;
    std::map<TopicId, bool> kept;
    for (const auto& n : g.nodes()) {
        if (n.weight >= min_node_weight) {
            nodes.push_back(n);
            kept[n.id] = true;
        }
    }
    std::vector<TopicEdge> edges;
    for (const auto& e : g.edges()) {
        if (kept.contains(e.u) && kept.contains(e.v) && e.weight >= min_edge_weight) edges.push_back(e);
    }
    return TopicGraph(std::move(nodes), std::move(edges));
}

double clustering_coefficient(const TopicGraph& g) {
    const auto& adj = g.adjacency();
    std::uint64_t triangles = 0;
    std::uint64_t connected = 0;
    std::vector<char> mark(adj.size(), 0);
    for (std::size_t v = 0; v < adj.size(); ++v) {
        std::uint64_t d = adj[v].size();
        if (d >= 2) connected += d * (d - 1) / 2;
        // Count each triangle once at its smallest vertex.
        for (auto [u, _] : adj[v]) mark[u] = 1;
        for (auto [u, _] : adj[v]) {
            if (u <= v) continue;
            for (auto [w, __] : adj[u]) {
                if (w > u && mark[w]) ++triangles;
            }
        }
        for (auto [u, _] : adj[v]) mark[u] = 0;
    }
    if (connected == 0) return 0.0;
    return static_cast<double>(3 * triangles) / static_cast<double>(connected);
}

namespace {

// Distances from `source`; -1 where unreachable.
void bfs(const TopicGraph& g, std::size_t source, std::vector<int>& dist, std::deque<std::size_t>& queue) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[source] = 0;
    queue.clear();
    queue.push_back(source);
    const auto& adj = g.adjacency();
    while (!queue.empty()) {
        auto v = queue.front();
        queue.pop_front();
        for (auto [u, _] : adj[v]) {
            if (dist[u] < 0) {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
}

std::vector<RankedTopic> top_n(std::vector<RankedTopic> items, std::size_t n) {
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        if (a.value != b.value) return a.value > b.value;
        return a.label < b.label;
    });
    if (items.size() > n) items.resize(n);
    return items;
}

}  // namespace

GraphStats compute_stats(const TopicGraph& g, const Corpus& corpus, const StatsOptions& opts) {
    GraphStats s;
    const std::size_t n = g.node_count();
    s.node_count = n;
    s.edge_count = g.edge_count();
    const auto& adj = g.adjacency();

    std::vector<std::size_t> component(n, SIZE_MAX);
    std::vector<std::size_t> comp_nodes;
    std::vector<std::size_t> comp_edges;
    for (std::size_t start = 0; start < n; ++start) {
        if (component[start] != SIZE_MAX) continue;
        std::size_t c = comp_nodes.size();
        comp_nodes.push_back(0);
        comp_edges.push_back(0);
        std::vector<std::size_t> stack{start};
        component[start] = c;
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            ++comp_nodes[c];
            for (auto [u, _] : adj[v]) {
                if (u > v) ++comp_edges[c];
                if (component[u] == SIZE_MAX) {
                    component[u] = c;
                    stack.push_back(u);
                }
            }
        }
    }
    s.component_count = comp_nodes.size();
    std::size_t giant = 0;
    for (std::size_t c = 0; c < comp_nodes.size(); ++c)
        if (comp_nodes[c] > comp_nodes[giant]) giant = c;
    if (!comp_nodes.empty()) {
        s.giant_nodes = comp_nodes[giant];
        s.giant_edges = comp_edges[giant];
    }

    for (const auto& a : adj) ++s.degree_distribution[a.size()];
    s.clustering_coefficient = clustering_coefficient(g);

    if (s.edge_count > 0) {
        std::vector<int> dist(n);
        std::deque<std::size_t> queue;
        double total = 0;
        std::uint64_t pairs = 0;
        if (n <= opts.exact_path_limit) {
            for (std::size_t v = 0; v < n; ++v) {
                bfs(g, v, dist, queue);
                for (std::size_t u = v + 1; u < n; ++u) {
                    if (dist[u] > 0) {
                        total += dist[u];
                        ++pairs;
                    }
                }
            }
        } else {
            s.average_path_sampled = true;
            std::vector<std::size_t> members;
            for (std::size_t v = 0; v < n; ++v)
                if (component[v] == giant) members.push_back(v);
            Rng rng(opts.seed);
            std::size_t sources = 0;
            while (pairs < opts.min_sampled_pairs || sources < 32) {
                auto src = members[rng.below(members.size())];
                bfs(g, src, dist, queue);
                for (auto u : members) {
                    if (u != src) {
                        total += dist[u];
                        ++pairs;
                    }
                }
                ++sources;
            }
        }
        if (pairs > 0) s.average_path = total / static_cast<double>(pairs);
    }

    std::vector<double> cites(n, 0.0);
    for (const auto& p : corpus.profiles) {
        for (auto t : p.topics) {
            if (auto i = g.index_of(t)) cites[*i] += static_cast<double>(p.total_citations);
        }
    }
    std::vector<RankedTopic> by_degree, by_weight, by_cpp;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& node = g.nodes()[i];
        by_degree.push_back({node.id, node.label, static_cast<double>(adj[i].size())});
        by_weight.push_back({node.id, node.label, static_cast<double>(node.weight)});
        by_cpp.push_back({node.id, node.label, cites[i] / static_cast<double>(node.weight)});
    }
    s.top_by_degree = top_n(std::move(by_degree), opts.top_n);
    s.top_by_weight = top_n(std::move(by_weight), opts.top_n);
    s.top_by_citations_per_person = top_n(std::move(by_cpp), opts.top_n);
    return s;
}

json graph_to_json(const TopicGraph& g) {
    json nodes = json::array();
    for (const auto& n : g.nodes())
        nodes.push_back({{"id", n.id.str()}, {"label", n.label}, {"weight", n.weight}});
    json edges = json::array();
    for (const auto& e : g.edges()) edges.push_back({e.u.str(), e.v.str(), e.weight});
    return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

TopicGraph graph_from_json(const json& j) {
    auto id = [](const json& v) {
        auto t = TopicId::parse(v.get<std::string>());
        if (!t) throw InvalidArgument("bad topic id " + v.dump());
        return *t;
    };
    std::vector<TopicNode> nodes;
    for (const auto& n : j.at("nodes"))
        nodes.push_back({id(n.at("id")), n.at("label").get<std::string>(), n.at("weight").get<std::uint64_t>()});
    std::vector<TopicEdge> edges;
    for (const auto& e : j.at("edges")) edges.push_back({id(e.at(0)), id(e.at(1)), e.at(2).get<std::uint64_t>()});
    return TopicGraph(std::move(nodes), std::move(edges));
}

json stats_to_json(const GraphStats& s) {
    auto ranked = [](const std::vector<RankedTopic>& items) {
        json out = json::array();
        for (const auto& r : items) out.push_back({{"id", r.id.str()}, {"label", r.label}, {"value", r.value}});
        return out;
    };
    json degrees = json::array();
    for (auto [d, c] : s.degree_distribution) degrees.push_back({d, c});
    return {
        {"nodes", s.node_count},
        {"edges", s.edge_count},
        {"components", s.component_count},
        {"giant_component", {{"nodes", s.giant_nodes}, {"edges", s.giant_edges}}},
        {"degree_distribution", std::move(degrees)},
        {"clustering_coefficient", s.clustering_coefficient},
        {"average_shortest_path",
         s.average_path ? json(*s.average_path) : json(nullptr)},
        {"average_shortest_path_sampled", s.average_path_sampled},
        {"top_by_degree", ranked(s.top_by_degree)},
        {"top_by_researchers", ranked(s.top_by_weight)},
        {"top_by_citations_per_person", ranked(s.top_by_citations_per_person)},
    };
}

}  // namespace rtopmap
