#include <doctest.h>

#include "rtopmap/layout.hpp"
#include "rtopmap/lod.hpp"
#include "test_util.hpp"

using namespace rtopmap;

namespace {

bool intersects(const Rect& a, const Rect& b) {
    return a.min_x < b.max_x && b.min_x < a.max_x && a.min_y < b.max_y && b.min_y < a.max_y;
}

struct Fixture {
    TopicGraph graph;
    Embedding embedding;
    std::vector<LevelView> levels;
};

Fixture three_hundred() {
    Fixture f;
    f.graph = testutil::random_graph(300, 0.012, 77);
    f.embedding = remove_overlaps(embed(f.graph));
    f.levels = compute_levels(f.graph, f.embedding);
    return f;
}

}  // namespace

TEST_SUITE("lod") {

TEST_CASE("font size cases") {
    CHECK(font_size(500) == 80.0);
    CHECK(font_size(1500) == 150.0);
    CHECK(font_size(5000) == 200.0);
    CHECK(font_size(0) == 80.0);
    CHECK(font_size(800) == 80.0);
    CHECK(font_size(2000) == 200.0);
    CHECK(font_size(1234) == doctest::Approx(123.4));
    double prev = 0;
    for (int w = 0; w <= 3000; w += 7) {
        double f = font_size(w);
        CHECK(f >= prev);
        CHECK(f >= 80.0);
        CHECK(f <= 200.0);
        prev = f;
    }
}

TEST_CASE("label boxes halve per level") {
    TopicNode n{TopicId{0}, "computer vision", 1500};
    for (int z = 1; z < kLevelCount; ++z) {
        auto a = label_box(n, {3, 4}, z);
        auto b = label_box(n, {3, 4}, z + 1);
        CHECK(b.width() == a.width() / 2);
        CHECK(b.height() == a.height() / 2);
        CHECK(b.center() == Vec2{3, 4});
    }
    TopicNode one{TopicId{1}, "x", 100};
    auto box = label_box(one, {0, 0}, 1);
    CHECK(box.width() == doctest::Approx(80 * 0.6));
    CHECK(box.height() == doctest::Approx(80 * 1.2));
}

TEST_CASE("golden box table") {
    // label, weight, level, width, height; worked by hand from
    // chars * font * 0.6 / 2^(z-1) and font * 1.2 / 2^(z-1).
    struct Row {
        const char* label;
        std::uint64_t weight;
        int level;
        double w, h;
    };
    const Row rows[] = {
        {"graph drawing", 1200, 1, 936.0, 144.0},
        {"graph drawing", 1200, 3, 234.0, 36.0},
        {"computer vision", 3000, 1, 1800.0, 240.0},
        {"computer vision", 3000, 8, 14.0625, 1.875},
        {"ai", 10, 1, 96.0, 96.0},
        {"ai", 10, 2, 48.0, 48.0},
        {"r\xc3\xa9seaux", 900, 1, 378.0, 108.0},
        {"machine learning", 1650, 4, 198.0, 24.75},
    };
    for (const auto& r : rows) {
        auto b = label_box({TopicId{0}, r.label, r.weight}, {0, 0}, r.level);
        CHECK(b.width() == doctest::Approx(r.w).epsilon(1e-12));
        CHECK(b.height() == doctest::Approx(r.h).epsilon(1e-12));
    }
}

TEST_CASE("heavier of two overlapping labels wins") {
    TopicGraph g({{TopicId{0}, "aaaa", 5}, {TopicId{1}, "bbbb", 10}}, {});
    Embedding e;
    e.ids = {TopicId{0}, TopicId{1}};
    // Level-1 boxes are 192 x 96, so 100 apart horizontally overlap until level 2.
    e.positions = {{0, 0}, {100, 0}};
    e.boxes = {{1, 1}, {1, 1}};
    auto levels = compute_levels(g, e);
    REQUIRE(levels.size() == 8);
    CHECK(levels[0].visible == std::vector<TopicId>{TopicId{1}});
    CHECK(first_visible_level(levels, TopicId{1}) == 1);
    CHECK(first_visible_level(levels, TopicId{0}) == 2);
    CHECK(levels[1].visible.size() == 2);
}

TEST_CASE("weight ties go to the smaller id") {
    TopicGraph g({{TopicId{3}, "same", 10}, {TopicId{7}, "same", 10}}, {});
    Embedding e;
    e.ids = {TopicId{3}, TopicId{7}};
    e.positions = {{0, 0}, {1, 0}};
    e.boxes = {{1, 1}, {1, 1}};
    auto levels = compute_levels(g, e);
    CHECK(levels[0].visible == std::vector<TopicId>{TopicId{3}});
}

TEST_CASE("300-node fixture: no visible overlaps at any level") {
    auto f = three_hundred();
    REQUIRE(f.levels.size() == 8);
    for (const auto& v : f.levels) {
        std::vector<Rect> boxes;
        for (auto id : v.visible) {
            const auto* node = f.graph.find(id);
            auto idx = f.embedding.index_of(id);
            REQUIRE(node);
            REQUIRE(idx);
            auto b = label_box(*node, f.embedding.positions[*idx], v.level);
            CHECK(v.label_boxes.at(id) == b);
            boxes.push_back(b);
        }
        std::size_t bad = 0;
        for (std::size_t i = 0; i < boxes.size(); ++i)
            for (std::size_t j = i + 1; j < boxes.size(); ++j) bad += intersects(boxes[i], boxes[j]);
        CHECK_MESSAGE(bad == 0, "level " << v.level);
        for (auto [id, font] : v.font_size) {
            CHECK(font >= 80.0);
            CHECK(font <= 200.0);
        }
    }
}

TEST_CASE("300-node fixture: visibility only grows") {
    auto f = three_hundred();
    for (std::size_t j = 0; j + 1 < f.levels.size(); ++j)
        for (auto id : f.levels[j].visible) CHECK(f.levels[j + 1].contains(id));
    CHECK(f.levels.front().visible.size() < f.levels.back().visible.size());
    // Level-8 labels are the embedding's own boxes, which no longer overlap.
    CHECK(f.levels.back().visible.size() == f.graph.node_count());
}

TEST_CASE("300-node fixture: every hidden label is blocked") {
    auto f = three_hundred();
    std::size_t heavier_blocker = 0, hidden = 0;
    for (const auto& v : f.levels) {
        for (const auto& node : f.graph.nodes()) {
            if (v.contains(node.id)) continue;
            ++hidden;
            auto b = label_box(node, f.embedding.positions[*f.embedding.index_of(node.id)], v.level);
            bool blocked = false, by_heavier = false;
            for (const auto& [id, box] : v.label_boxes) {
                if (!intersects(b, box)) continue;
                blocked = true;
                by_heavier = by_heavier || f.graph.find(id)->weight >= node.weight;
            }
            CHECK(blocked);
            // Nothing is carried into level 1, so there the rule is strict.
            if (v.level == 1) CHECK(by_heavier);
            heavier_blocker += by_heavier;
        }
    }
    // Labels carried over from a coarser level may be lighter than the one they
    // block, so only most hidden labels have a heavier blocker.
    CHECK(hidden > 0);
    CHECK(static_cast<double>(heavier_blocker) >= 0.8 * static_cast<double>(hidden));
}

TEST_CASE("level export") {
    TopicGraph g({{TopicId{0}, "a", 5}, {TopicId{1}, "b", 10}, {TopicId{2}, "c", 1}},
                 {{TopicId{0}, TopicId{1}, 2}, {TopicId{1}, TopicId{2}, 1}});
    Embedding e;
    e.ids = {TopicId{0}, TopicId{1}, TopicId{2}};
    e.positions = {{0, 0}, {1000, 0}, {1010, 0}};
    e.boxes = {{1, 1}, {1, 1}, {1, 1}};
    auto levels = compute_levels(g, e);
    REQUIRE(levels[0].visible.size() == 2);
    auto j = level_to_json(levels[0], g, e, {4, 5, 6});
    CHECK(j["level"] == 1);
    CHECK(j["visible"].size() == 2);
    CHECK(j["visible"][0]["id"] == "t1");
    CHECK(j["visible"][0]["font"] == 80.0);
    CHECK(j["visible"][0]["cluster"] == 5);
    REQUIRE(j["edges"].size() == 1);
    CHECK(j["edges"][0] == nlohmann::json::array({"t0", "t1", 2}));
}

}
