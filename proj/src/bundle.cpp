#include "rtopmap/bundle.hpp"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "rtopmap/digest.hpp"
#include "rtopmap/layout.hpp"
#include "rtopmap/lod.hpp"
#include "rtopmap/text.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace rtopmap {

void BuildConfig::validate() const {
    if (levels != kLevelCount) throw InvalidArgument("levels must be " + std::to_string(kLevelCount));
    if (min_node_weight < 1 || min_edge_weight < 1) throw InvalidArgument("weight thresholds must be >= 1");
    if (clusters < 1) throw InvalidArgument("cluster count must be >= 1");
    if (!(padding >= 0)) throw InvalidArgument("padding must be non-negative");
    if (!(metrics.width_ratio > 0) || !(metrics.height_ratio > 0)) throw InvalidArgument("label metrics must be positive");
}

json BuildConfig::to_json() const {
    return {{"seed", seed},
            {"min_node_weight", min_node_weight},
            {"min_edge_weight", min_edge_weight},
            {"clusters", clusters},
            {"levels", levels},
            {"variant", rtopmap::to_string(variant)},
            {"padding", padding},
            {"width_ratio", metrics.width_ratio},
            {"height_ratio", metrics.height_ratio}};
}

std::string config_digest(const BuildConfig& config) { return sha256_hex(config.to_json().dump()); }

std::string corpus_digest(const Corpus& corpus) {
    std::ostringstream os;
    write_profiles(os, corpus.profiles);
    os << '\n';
    write_universities(os, corpus.universities);
    return sha256_hex(os.str());
}

namespace {

void write_file(const fs::path& path, const std::string& data) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    out << data;
    out.close();
    if (!out) throw Error("failed to write " + path.string());
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFoundError("missing bundle file " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string iso_time(std::int64_t seconds) {
    std::time_t t = static_cast<std::time_t>(seconds);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::vector<std::string> bundle_files() {
    std::vector<std::string> files{"graph.json", "geometry.json", "lexicon.json", "corpus/profiles.jsonl",
                                   "corpus/universities.jsonl"};
    for (int z = 1; z <= kLevelCount; ++z) files.push_back("levels/" + std::to_string(z) + ".json");
    return files;
}

fs::path normalized_target(const fs::path& out) {
    fs::path p = out.lexically_normal();
    if (!p.has_filename()) p = p.parent_path();
    return fs::absolute(p);
}

class StageClock {
public:
    StageClock(BuildReport& report, const StageHook& hook) : report_(report), hook_(hook) {}
    ~StageClock() { stop(); }

    void start(std::string_view stage) {
        stop();
        if (hook_) hook_(stage);
        current_ = std::string(stage);
        begin_ = std::chrono::steady_clock::now();
    }
    void stop() {
        if (current_.empty()) return;
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - begin_).count();
        report_.stages.push_back({current_, s});
        report_.total_seconds += s;
        spdlog::info("stage {:<10} {:8.3f}s", current_, s);
        current_.clear();
    }

private:
    BuildReport& report_;
    const StageHook& hook_;
    std::string current_;
    std::chrono::steady_clock::time_point begin_;
};

}  // namespace

BuildReport build_bundle(const Corpus& corpus, const BuildConfig& config, const fs::path& out,
                         const StageHook& on_stage) {
    config.validate();
    const fs::path target = normalized_target(out);
    const fs::path staging = target.parent_path() / ("." + target.filename().string() + ".tmp-" + std::to_string(::getpid()));
    BuildReport report;
    fs::create_directories(target.parent_path());
    fs::remove_all(staging);
    try {
        StageClock clock(report, on_stage);

        clock.start("normalize");
        auto canon = canonicalize(corpus);
        report.topics = canon.lexicon.size();

        clock.start("graph");
        std::vector<ResearcherProfile> members;
        for (const auto& r : canon.corpus.profiles)
            if (in_base_set(canon.corpus, r, config.variant)) members.push_back(r);
        auto graph = filter_graph(build_graph(members, canon.lexicon), config.min_node_weight, config.min_edge_weight);
        if (graph.empty()) throw InvalidArgument("no topics survive the weight thresholds");
        report.nodes = graph.node_count();
        report.edges = graph.edge_count();
        spdlog::info("graph: {} nodes, {} edges from {} profiles", report.nodes, report.edges, members.size());

        clock.start("embed");
        EmbedOptions eopts;
        eopts.seed = config.seed;
        eopts.metrics = config.metrics;
        auto embedding = embed(graph, eopts);

        clock.start("overlap");
        embedding = remove_overlaps(embedding);

        clock.start("cluster");
        auto clusters = cluster_nodes(embedding, std::min(config.clusters, embedding.size()), config.seed);

        clock.start("countries");
        auto countries = build_countries(embedding, clusters, config.padding);

        clock.start("levels");
        auto levels = compute_levels(graph, embedding, config.metrics);

        clock.start("write");
        std::map<std::string, std::string> contents;
        contents["graph.json"] = graph_to_json(graph).dump();
        contents["geometry.json"] = geometry_to_json(embedding, countries).dump();
        contents["lexicon.json"] = lexicon_to_json(canon.lexicon).dump();
        for (const auto& v : levels)
            contents["levels/" + std::to_string(v.level) + ".json"] =
                level_to_json(v, graph, embedding, countries.cluster_of).dump();
        {
            std::ostringstream p, u;
            write_profiles(p, canon.corpus.profiles, true);
            write_universities(u, canon.corpus.universities);
            contents["corpus/profiles.jsonl"] = p.str();
            contents["corpus/universities.jsonl"] = u.str();
        }
        json files = json::object();
        for (const auto& [name, data] : contents) {
            write_file(staging / name, data);
            files[name] = sha256_hex(data);
        }
        json manifest{{"format", kBundleFormat},
                      {"seed", config.seed},
                      {"variant", to_string(config.variant)},
                      {"config", config.to_json()},
                      {"config_digest", config_digest(config)},
                      {"corpus_digest", corpus_digest(corpus)},
                      {"created", iso_time(config.created)},
                      {"files", std::move(files)},
                      {"counts",
                       {{"nodes", graph.node_count()},
                        {"edges", graph.edge_count()},
                        {"clusters", clusters.cluster_count()},
                        {"topics", canon.lexicon.size()},
                        {"profiles", canon.corpus.profiles.size()},
                        {"variant_profiles", members.size()}}}};
        write_file(staging / "manifest.json", manifest.dump(2) + "\n");
        clock.stop();

        // Swap into place.
        fs::path old;
        if (fs::exists(target)) {
            old = target.parent_path() / ("." + target.filename().string() + ".old-" + std::to_string(::getpid()));
            fs::remove_all(old);
            fs::rename(target, old);
        }
        fs::rename(staging, target);
        if (!old.empty()) fs::remove_all(old);
    } catch (...) {
        std::error_code ec;
        fs::remove_all(staging, ec);
        throw;
    }
    return report;
}

bool bundle_up_to_date(const fs::path& dir, const Corpus& corpus, const BuildConfig& config) {
    if (!fs::exists(dir / "manifest.json")) return false;
    try {
        auto b = MapBundle::load(dir);
        return b.manifest().value("config_digest", "") == config_digest(config) &&
               b.manifest().value("corpus_digest", "") == corpus_digest(corpus);
    } catch (const Error& e) {
        spdlog::info("existing bundle is not reusable: {}", e.what());
        return false;
    }
}

MapBundle MapBundle::load(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw NotFoundError("bundle directory not found: " + dir.string());
    MapBundle b;
    b.dir_ = dir;
    b.manifest_text_ = read_file(dir / "manifest.json");
    try {
        b.manifest_ = json::parse(b.manifest_text_);
    } catch (const json::exception& e) {
        throw BundleError(std::string("manifest is not valid JSON: ") + e.what());
    }
    if (b.manifest_.value("format", "") != kBundleFormat) throw BundleError("unsupported bundle format");
    if (!b.manifest_.contains("config") || !b.manifest_.contains("files"))
        throw BundleError("manifest lacks config or file digests");
    if (sha256_hex(b.manifest_["config"].dump()) != b.manifest_.value("config_digest", ""))
        throw BundleError("config digest mismatch in manifest");

    const auto& files = b.manifest_["files"];
    std::map<std::string, std::string> text;
    for (const auto& name : bundle_files()) {
        if (!files.contains(name)) throw BundleError("manifest lacks digest for " + name);
        if (!fs::exists(dir / name)) throw BundleError("bundle file missing: " + name);
        text[name] = read_file(dir / name);
        if (sha256_hex(text[name]) != files[name].get<std::string>())
            throw BundleError("digest mismatch for " + name);
    }

    auto variant = parse_base_set(b.manifest_.value("variant", "WORLD"));
    if (!variant) throw BundleError("unknown variant in manifest");
    b.variant_ = *variant;
    try {
        b.graph_ = graph_from_json(json::parse(text["graph.json"]));
        b.lexicon_ = lexicon_from_json(json::parse(text["lexicon.json"]));
        std::istringstream pin(text["corpus/profiles.jsonl"]);
        std::istringstream uin(text["corpus/universities.jsonl"]);
        ParseOptions strict{.strict = true, .read_topics = true};
        auto profiles = parse_profiles(pin, strict);
        auto unis = load_universities(uin, strict);
        b.corpus_ = make_corpus(std::move(profiles.records), std::move(unis.records), nullptr, true);

        b.geometry_text_ = std::move(text["geometry.json"]);
        auto geometry = json::parse(b.geometry_text_);
        for (const auto& node : b.graph_.nodes()) {
            const auto key = node.id.str();
            if (!geometry["positions"].contains(key)) throw BundleError("geometry lacks topic " + key);
            const auto& p = geometry["positions"][key];
            b.positions_[node.id] = {p[0].get<double>(), p[1].get<double>()};
            b.clusters_[node.id] = geometry["clusters"].value(key, 0u);
        }
        for (int z = 1; z <= kLevelCount; ++z) {
            auto& t = text["levels/" + std::to_string(z) + ".json"];
            auto level = json::parse(t);
            for (const auto& v : level["visible"]) {
                auto id = TopicId::parse(v["id"].get<std::string>());
                if (!id || !b.graph_.find(*id)) throw BundleError("level " + std::to_string(z) + " references unknown topic");
                b.first_level_.try_emplace(*id, z);
            }
            b.level_text_.push_back(std::move(t));
        }
    } catch (const json::exception& e) {
        throw BundleError(std::string("malformed bundle file: ") + e.what());
    } catch (const ParseError& e) {
        throw BundleError(std::string("malformed bundle corpus: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw BundleError(std::string("inconsistent bundle: ") + e.what());
    }
    for (const auto& node : b.graph_.nodes())
        if (!b.lexicon_.contains(node.id)) throw BundleError("graph topic missing from lexicon: " + node.id.str());
    return b;
}

std::vector<SearchHit> MapBundle::search(std::string_view query, std::size_t limit) const {
    const auto words = text::split_whitespace(text::to_lower(query));
    std::vector<SearchHit> hits;
    if (words.empty() || limit == 0) return hits;
    for (const auto& node : graph_.nodes()) {
        const auto label = text::to_lower(node.label);
        bool all = std::all_of(words.begin(), words.end(),
                               [&](const std::string& w) { return label.find(w) != std::string::npos; });
        if (!all) continue;
        auto lvl = first_level_.find(node.id);
        hits.push_back({node.id, node.label, positions_.at(node.id), node.weight,
                        lvl == first_level_.end() ? 0 : lvl->second});
    }
    std::stable_sort(hits.begin(), hits.end(), [](const SearchHit& a, const SearchHit& b) {
        if (a.weight != b.weight) return a.weight > b.weight;
        return a.id < b.id;
    });
    if (hits.size() > limit) hits.resize(limit);
    return hits;
}

NodeInfo MapBundle::node_info(TopicId id) const {
    const auto* node = graph_.find(id);
    if (!node) throw NotFoundError("unknown topic " + id.str());
    NodeInfo info;
    info.id = id;
    info.label = node->label;
    info.weight = node->weight;
    info.position = positions_.at(id);
    info.cluster = clusters_.at(id);
    auto lvl = first_level_.find(id);
    info.first_level = lvl == first_level_.end() ? 0 : lvl->second;
    const auto idx = *graph_.index_of(id);
    for (auto [j, w] : graph_.adjacency()[idx]) {
        const auto& other = graph_.nodes()[j];
        info.neighbors.push_back({other.id, other.label, w});
    }
    std::stable_sort(info.neighbors.begin(), info.neighbors.end(), [](const Neighbor& a, const Neighbor& b) {
        if (a.weight != b.weight) return a.weight > b.weight;
        return a.id < b.id;
    });
    return info;
}

json search_to_json(const std::vector<SearchHit>& hits) {
    json out = json::array();
    for (const auto& h : hits)
        out.push_back({{"id", h.id.str()},
                       {"label", h.label},
                       {"x", h.position.x},
                       {"y", h.position.y},
                       {"weight", h.weight},
                       {"level", h.first_level}});
    return out;
}

json node_info_to_json(const NodeInfo& info) {
    json neighbors = json::array();
    for (const auto& n : info.neighbors) neighbors.push_back({{"id", n.id.str()}, {"label", n.label}, {"weight", n.weight}});
    return {{"id", info.id.str()},
            {"label", info.label},
            {"weight", info.weight},
            {"x", info.position.x},
            {"y", info.position.y},
            {"cluster", info.cluster},
            {"level", info.first_level},
            {"neighbors", std::move(neighbors)}};
}

}  // namespace rtopmap
