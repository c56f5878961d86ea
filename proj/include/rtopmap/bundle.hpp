#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rtopmap/graph.hpp"
#include "rtopmap/ingest.hpp"
#include "rtopmap/labels.hpp"
#include "rtopmap/normalize.hpp"
#include "rtopmap/overlay.hpp"

namespace rtopmap {

inline constexpr std::string_view kBundleFormat = "rtopmap-bundle/1";

struct BuildConfig {
    std::uint64_t seed = 1;
    std::uint64_t min_node_weight = 6;
    std::uint64_t min_edge_weight = 2;
    std::size_t clusters = 16;
    int levels = kLevelCount;
    BaseSet variant = BaseSet::World;
    // Margin around the layout, as a fraction of its larger side.
    double padding = 0.1;
    // Creation time recorded in the manifest (seconds since the epoch). Not
    // part of the config digest.
    std::int64_t created = 0;
    LabelMetrics metrics{};

    // Throws InvalidArgument when a field is out of range.
    void validate() const;
    nlohmann::json to_json() const;
};

std::string config_digest(const BuildConfig& config);
// Digest of the raw corpus as it would be serialized.
std::string corpus_digest(const Corpus& corpus);

struct StageTiming {
    std::string stage;
    double seconds = 0;
};

struct BuildReport {
    std::vector<StageTiming> stages;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::size_t topics = 0;
    double total_seconds = 0;
};

// Called before each stage starts: normalize, graph, embed, overlap, cluster,
// countries, levels, write.
using StageHook = std::function<void(std::string_view stage)>;

// Runs the pipeline and writes the bundle to `out`. Output is staged in a
// sibling directory and renamed into place only after every file is written.
BuildReport build_bundle(const Corpus& corpus, const BuildConfig& config, const std::filesystem::path& out,
                         const StageHook& on_stage = {});

// True when `dir` holds a valid bundle built from the same corpus and config.
bool bundle_up_to_date(const std::filesystem::path& dir, const Corpus& corpus, const BuildConfig& config);

class BundleError : public Error {
public:
    using Error::Error;
};

struct SearchHit {
    TopicId id;
    std::string label;
    Vec2 position;
    std::uint64_t weight = 0;
    int first_level = 0;
};

struct Neighbor {
    TopicId id;
    std::string label;
    std::uint64_t weight = 0;
};

struct NodeInfo {
    TopicId id;
    std::string label;
    std::uint64_t weight = 0;
    Vec2 position;
    std::uint32_t cluster = 0;
    int first_level = 0;
    // Sorted by edge weight, heaviest first; ties by id.
    std::vector<Neighbor> neighbors;
};

class MapBundle {
public:
    // Reads and validates a bundle. NotFoundError when the directory or a
    // file is missing, BundleError on digest or consistency failures.
    static MapBundle load(const std::filesystem::path& dir);

    const std::filesystem::path& directory() const { return dir_; }
    const nlohmann::json& manifest() const { return manifest_; }
    const std::string& manifest_text() const { return manifest_text_; }
    const std::string& geometry_text() const { return geometry_text_; }
    // Level z in [1, 8], verbatim file contents.
    const std::string& level_text(int z) const { return level_text_.at(static_cast<std::size_t>(z - 1)); }
    const TopicGraph& graph() const { return graph_; }
    const TopicLexicon& lexicon() const { return lexicon_; }
    const Corpus& corpus() const { return corpus_; }
    BaseSet variant() const { return variant_; }

    std::vector<SearchHit> search(std::string_view query, std::size_t limit = 20) const;
    // NotFoundError for topics not on the map.
    NodeInfo node_info(TopicId id) const;

private:
    std::filesystem::path dir_;
    nlohmann::json manifest_;
    std::string manifest_text_;
    std::string geometry_text_;
    std::vector<std::string> level_text_;
    TopicGraph graph_;
    TopicLexicon lexicon_;
    Corpus corpus_;
    BaseSet variant_ = BaseSet::World;
    std::map<TopicId, Vec2> positions_;
    std::map<TopicId, std::uint32_t> clusters_;
    std::map<TopicId, int> first_level_;
};

nlohmann::json search_to_json(const std::vector<SearchHit>& hits);
nlohmann::json node_info_to_json(const NodeInfo& info);

}  // namespace rtopmap
