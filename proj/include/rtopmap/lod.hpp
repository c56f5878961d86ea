#pragma once

#include <map>
#include <optional>
#include <vector>

#include <json.hpp>

#include "rtopmap/graph.hpp"
#include "rtopmap/labels.hpp"
#include "rtopmap/layout.hpp"

namespace rtopmap {

struct LevelView {
    int level = 1;
    // In acceptance order: carried-over labels first, then new ones by weight.
    std::vector<TopicId> visible;
    // World-space label boxes of the visible topics.
    std::map<TopicId, Rect> label_boxes;
    std::map<TopicId, double> font_size;

    bool contains(TopicId id) const { return label_boxes.count(id) != 0; }
};

// Box of a label centered on `position` at `level`.
Rect label_box(const TopicNode& node, Vec2 position, int level, const LabelMetrics& metrics = {});

// Greedy visibility per level, heaviest labels first (ties by id). Each level
// starts from the labels already visible one level up.
std::vector<LevelView> compute_levels(const TopicGraph& g, const Embedding& e, const LabelMetrics& metrics = {});

// Lowest level at which the topic is visible.
std::optional<int> first_visible_level(const std::vector<LevelView>& levels, TopicId id);

nlohmann::json level_to_json(const LevelView& view, const TopicGraph& g, const Embedding& e,
                             const std::vector<std::uint32_t>& cluster_of);

}  // namespace rtopmap
