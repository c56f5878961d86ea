#include "rtopmap/lod.hpp"

#include <algorithm>

namespace rtopmap {

Rect label_box(const TopicNode& node, Vec2 position, int level, const LabelMetrics& metrics) {
    const double font = font_size(static_cast<double>(node.weight));
    return Rect::around(position, label_size(node.label, font, level, metrics));
}

namespace {

bool rects_overlap(const Rect& a, const Rect& b) {
    return a.min_x < b.max_x && b.min_x < a.max_x && a.min_y < b.max_y && b.min_y < a.max_y;
}

}  // namespace

std::vector<LevelView> compute_levels(const TopicGraph& g, const Embedding& e, const LabelMetrics& metrics) {
    const auto& nodes = g.nodes();
    std::vector<std::size_t> pos_of(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        auto idx = e.index_of(nodes[i].id);
        if (!idx) throw InvalidArgument("embedding lacks topic " + nodes[i].id.str());
        pos_of[i] = *idx;
    }
    std::vector<std::size_t> order(nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
        if (nodes[a].weight != nodes[b].weight) return nodes[a].weight > nodes[b].weight;
        return nodes[a].id < nodes[b].id;
    });

    std::vector<LevelView> levels;
    std::vector<bool> visible(nodes.size(), false);
    std::vector<std::size_t> accepted;
    for (int level = 1; level <= kLevelCount; ++level) {
        LevelView view;
        view.level = level;
        std::vector<Rect> boxes(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) boxes[i] = label_box(nodes[i], e.positions[pos_of[i]], level, metrics);

        // Carried-over labels only shrink, so they stay disjoint.
        std::vector<Rect> taken;
        for (auto i : accepted) taken.push_back(boxes[i]);
        for (auto i : order) {
            if (visible[i]) continue;
            const Rect& b = boxes[i];
            bool blocked = std::any_of(taken.begin(), taken.end(), [&](const Rect& t) { return rects_overlap(b, t); });
            if (blocked) continue;
            visible[i] = true;
            accepted.push_back(i);
            taken.push_back(b);
        }
        for (auto i : accepted) {
            view.visible.push_back(nodes[i].id);
            view.label_boxes[nodes[i].id] = boxes[i];
            view.font_size[nodes[i].id] = font_size(static_cast<double>(nodes[i].weight));
        }
        levels.push_back(std::move(view));
    }
    return levels;
}

std::optional<int> first_visible_level(const std::vector<LevelView>& levels, TopicId id) {
    for (const auto& v : levels)
        if (v.contains(id)) return v.level;
    return std::nullopt;
}

nlohmann::json level_to_json(const LevelView& view, const TopicGraph& g, const Embedding& e,
                             const std::vector<std::uint32_t>& cluster_of) {
    nlohmann::json visible = nlohmann::json::array();
    for (auto id : view.visible) {
        const auto* node = g.find(id);
        auto idx = e.index_of(id);
        if (!node || !idx) throw InvalidArgument("level references unknown topic " + id.str());
        const auto p = e.positions[*idx];
        nlohmann::json entry{{"id", id.str()},
                             {"x", p.x},
                             {"y", p.y},
                             {"label", node->label},
                             {"font", view.font_size.at(id)},
                             {"weight", node->weight}};
        if (*idx < cluster_of.size()) entry["cluster"] = cluster_of[*idx];
        visible.push_back(std::move(entry));
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& edge : g.edges())
        if (view.contains(edge.u) && view.contains(edge.v)) edges.push_back({edge.u.str(), edge.v.str(), edge.weight});
    return {{"level", view.level}, {"scale", level_scale(view.level)}, {"visible", std::move(visible)},
            {"edges", std::move(edges)}};
}

}  // namespace rtopmap
