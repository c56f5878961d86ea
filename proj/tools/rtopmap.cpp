// rtopmap: build, serve and inspect topic maps.

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "rtopmap/bundle.hpp"
#include "rtopmap/graph.hpp"
#include "rtopmap/ingest.hpp"
#include "rtopmap/overlay.hpp"
#include "rtopmap/server.hpp"

namespace fs = std::filesystem;
using namespace rtopmap;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

void init_logging() {
    auto logger = spdlog::stderr_color_mt("rtopmap");
    logger->set_pattern("%^%l%$: %v");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("RTOPMAP_LOG")) {
        auto level = spdlog::level::from_str(env);
        // from_str maps unknown names to "off"
        if (level != spdlog::level::off || std::string_view(env) == "off") spdlog::set_level(level);
    }
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFoundError("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// SOURCE_DATE_EPOCH if set, else the newest input modification time, so
// rebuilding unchanged inputs reproduces the manifest byte for byte.
std::int64_t creation_time(const std::vector<std::string>& inputs) {
    if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
        try {
            return std::stoll(env);
        } catch (const std::exception&) {
            throw InvalidArgument("SOURCE_DATE_EPOCH is not an integer");
        }
    }
    std::int64_t newest = 0;
    for (const auto& p : inputs) {
        auto t = fs::last_write_time(p);
        auto sys = std::chrono::file_clock::to_sys(t);
        newest = std::max<std::int64_t>(newest, std::chrono::duration_cast<std::chrono::seconds>(sys.time_since_epoch()).count());
    }
    return newest;
}

Corpus read_corpus(const std::string& profiles, const std::string& universities, bool strict) {
    std::vector<RecordError> errors;
    ParseOptions opts;
    opts.strict = strict;
    auto corpus = load_corpus(profiles, universities, opts, &errors);
    for (const auto& e : errors) spdlog::warn("line {}: {}", e.line, e.message);
    if (!errors.empty()) spdlog::warn("{} records skipped", errors.size());
    return corpus;
}

BaseSet parse_variant(const std::string& s) {
    auto v = parse_base_set(s);
    if (!v) throw CLI::ValidationError("--variant", "must be WORLD, US or EU");
    return *v;
}

void print_ranked(std::ostream& os, const char* title, const std::vector<RankedTopic>& list, int precision) {
    os << title << '\n';
    std::size_t rank = 1;
    for (const auto& t : list)
        os << "  " << std::setw(2) << rank++ << ". " << std::left << std::setw(40) << t.label << std::right << ' '
           << std::fixed << std::setprecision(precision) << t.value << '\n';
}

void print_stats(std::ostream& os, const GraphStats& s) {
    os << "nodes " << s.node_count << '\n';
    os << "edges " << s.edge_count << '\n';
    os << "components " << s.component_count << '\n';
    os << "giant component " << s.giant_nodes << " nodes, " << s.giant_edges << " edges\n";
    os << std::fixed << std::setprecision(3);
    os << "clustering coefficient " << s.clustering_coefficient << '\n';
    if (s.average_path) {
        os << "average shortest path " << *s.average_path << (s.average_path_sampled ? " (sampled)" : " (exact)") << '\n';
    } else {
        os << "average shortest path n/a\n";
    }
    os << "degree distribution";
    std::size_t shown = 0;
    for (const auto& [deg, count] : s.degree_distribution) {
        if (shown++ == 12) {
            os << " ...";
            break;
        }
        os << ' ' << deg << ':' << count;
    }
    os << '\n';
    print_ranked(os, "top by degree", s.top_by_degree, 0);
    print_ranked(os, "top by researchers", s.top_by_weight, 0);
    print_ranked(os, "top by citations per person", s.top_by_citations_per_person, 1);
}

Server* g_server = nullptr;

extern "C" void on_signal(int) {
    if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
    init_logging();
    CLI::App app{"Topic maps from researcher profiles"};
    app.set_config("--config", "", "TOML/INI file with option defaults; flags win");
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "Write a synthetic corpus");
    std::string s_profiles, s_unis, s_preset = "small";
    std::uint64_t s_seed = 7;
    std::optional<std::size_t> s_count, s_vocab, s_n_unis;
    std::optional<double> s_variant, s_permuted, s_conj;
    synth->add_option("--profiles", s_profiles, "Output profiles file")->required();
    synth->add_option("--universities", s_unis, "Output universities file")->required();
    synth->add_option("--preset", s_preset, "small or large")->capture_default_str();
    synth->add_option("--seed", s_seed)->capture_default_str();
    synth->add_option("--count", s_count, "Number of profiles");
    synth->add_option("--vocabulary", s_vocab, "Number of distinct topics");
    synth->add_option("--university-count", s_n_unis);
    synth->add_option("--variant-fraction", s_variant)->check(CLI::Range(0.0, 1.0));
    synth->add_option("--permuted-fraction", s_permuted)->check(CLI::Range(0.0, 1.0));
    synth->add_option("--conjunction-fraction", s_conj)->check(CLI::Range(0.0, 1.0));

    // build
    auto* build = app.add_subcommand("build", "Build a map bundle");
    std::string b_profiles, b_unis, b_out, b_variant = "WORLD";
    BuildConfig cfg;
    bool b_strict = false, b_force = false;
    build->add_option("--profiles", b_profiles)->required()->check(CLI::ExistingFile);
    build->add_option("--universities", b_unis)->required()->check(CLI::ExistingFile);
    build->add_option("--out", b_out, "Bundle directory")->required();
    build->add_option("--seed", cfg.seed)->capture_default_str();
    build->add_option("--min-node-weight", cfg.min_node_weight)->capture_default_str()->check(CLI::PositiveNumber);
    build->add_option("--min-edge-weight", cfg.min_edge_weight)->capture_default_str()->check(CLI::PositiveNumber);
    build->add_option("--clusters,-k", cfg.clusters)->capture_default_str()->check(CLI::PositiveNumber);
    build->add_option("--variant", b_variant, "WORLD, US or EU")->capture_default_str();
    build->add_option("--padding", cfg.padding)->capture_default_str()->check(CLI::NonNegativeNumber);
    build->add_flag("--strict", b_strict, "Abort on malformed records");
    build->add_flag("--force", b_force, "Rebuild even if the bundle is up to date");

    // serve
    auto* serve = app.add_subcommand("serve", "Serve a bundle over HTTP");
    std::string v_bundle, v_host = "127.0.0.1", v_static;
    int v_port = 8080;
    serve->add_option("--bundle", v_bundle)->required();
    serve->add_option("--port", v_port)->capture_default_str()->check(CLI::Range(0, 65535));
    serve->add_option("--host", v_host)->capture_default_str();
    serve->add_option("--static", v_static, "Directory of client assets served under /");

    // stats
    auto* stats = app.add_subcommand("stats", "Print network statistics");
    std::string t_bundle, t_profiles, t_unis, t_format = "text", t_variant = "WORLD";
    std::uint64_t t_min_node = 1, t_min_edge = 1;
    std::size_t t_top = 10;
    auto* t_bundle_opt = stats->add_option("--bundle", t_bundle);
    auto* t_prof_opt = stats->add_option("--profiles", t_profiles)->check(CLI::ExistingFile);
    auto* t_unis_opt = stats->add_option("--universities", t_unis)->check(CLI::ExistingFile);
    t_prof_opt->needs(t_unis_opt);
    t_unis_opt->needs(t_prof_opt);
    t_bundle_opt->excludes(t_prof_opt);
    stats->add_option("--min-node-weight", t_min_node)->capture_default_str()->check(CLI::PositiveNumber);
    stats->add_option("--min-edge-weight", t_min_edge)->capture_default_str()->check(CLI::PositiveNumber);
    stats->add_option("--variant", t_variant)->capture_default_str();
    stats->add_option("--top", t_top)->capture_default_str();
    stats->add_option("--format", t_format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();

    // overlay
    auto* overlay = app.add_subcommand("overlay", "Evaluate an overlay against a bundle");
    std::string o_bundle, o_kind, o_uni, o_mode = "full", o_norm = "none", o_base, o_keyword, o_text_file;
    overlay->add_option("kind", o_kind, "citations, hr, department or document")
        ->required()
        ->check(CLI::IsMember({"citations", "hr", "department", "document"}));
    overlay->add_option("--bundle", o_bundle)->required();
    overlay->add_option("--university", o_uni);
    overlay->add_option("--mode", o_mode)->check(CLI::IsMember({"full", "split"}))->capture_default_str();
    overlay->add_option("--normalize", o_norm)->check(CLI::IsMember({"none", "rate", "literal"}))->capture_default_str();
    overlay->add_option("--base", o_base, "WORLD, US or EU (default: bundle variant)");
    overlay->add_option("--keyword", o_keyword);
    overlay->add_option("--text-file", o_text_file, "Document for the document overlay ('-' for stdin)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*synth) {
            auto preset = synth_preset(s_preset);
            if (!preset) throw CLI::ValidationError("--preset", "must be small or large");
            if (s_count) preset->profiles = *s_count;
            if (s_vocab) preset->vocabulary = *s_vocab;
            if (s_n_unis) preset->options.n_universities = *s_n_unis;
            if (s_variant) preset->options.variant_fraction = *s_variant;
            if (s_permuted) preset->options.permuted_fraction = *s_permuted;
            if (s_conj) preset->options.conjunction_fraction = *s_conj;
            auto vocab = make_vocabulary(s_seed, preset->vocabulary);
            auto corpus = synth_corpus(s_seed, preset->profiles, vocab, preset->options);
            std::ofstream p(s_profiles, std::ios::binary), u(s_unis, std::ios::binary);
            if (!p || !u) throw Error("cannot write output files");
            write_profiles(p, corpus.profiles);
            write_universities(u, corpus.universities);
            std::cout << "wrote " << corpus.profiles.size() << " profiles, " << corpus.universities.size()
                      << " universities\n";
        } else if (*build) {
            cfg.variant = parse_variant(b_variant);
            cfg.created = creation_time({b_profiles, b_unis});
            auto corpus = read_corpus(b_profiles, b_unis, b_strict);
            if (!b_force && bundle_up_to_date(b_out, corpus, cfg)) {
                std::cout << "bundle " << b_out << " is up-to-date\n";
                return kExitOk;
            }
            auto report = build_bundle(corpus, cfg, b_out);
            for (const auto& s : report.stages)
                std::cout << std::left << std::setw(10) << s.stage << std::right << std::fixed << std::setprecision(3)
                          << std::setw(9) << s.seconds << "s\n";
            std::cout << "total     " << std::setw(9) << report.total_seconds << "s\n";
            std::cout << "bundle " << b_out << ": " << report.nodes << " nodes, " << report.edges << " edges, "
                      << report.topics << " topics\n";
        } else if (*serve) {
            auto bundle = MapBundle::load(v_bundle);
            ServerOptions opts;
            opts.host = v_host;
            opts.port = v_port;
            if (!v_static.empty()) opts.static_dir = v_static;
            Server server(bundle, opts);
            int port = server.bind();
            g_server = &server;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cout << "serving " << v_bundle << " on http://" << v_host << ':' << port << std::endl;
            server.listen();
            g_server = nullptr;
        } else if (*stats) {
            TopicGraph graph;
            Corpus corpus;
            if (!t_bundle.empty()) {
                auto bundle = MapBundle::load(t_bundle);
                graph = bundle.graph();
                corpus = bundle.corpus();
            } else if (!t_profiles.empty()) {
                auto canon = canonicalize(read_corpus(t_profiles, t_unis, false));
                auto variant = parse_variant(t_variant);
                std::vector<ResearcherProfile> members;
                for (const auto& r : canon.corpus.profiles)
                    if (in_base_set(canon.corpus, r, variant)) members.push_back(r);
                graph = filter_graph(build_graph(members, canon.lexicon), t_min_node, t_min_edge);
                corpus = std::move(canon.corpus);
            } else {
                throw CLI::ValidationError("stats", "needs --bundle or --profiles with --universities");
            }
            StatsOptions sopts;
            sopts.top_n = t_top;
            auto s = compute_stats(graph, corpus, sopts);
            if (t_format == "json") {
                std::cout << stats_to_json(s).dump(2) << '\n';
            } else {
                print_stats(std::cout, s);
            }
        } else if (*overlay) {
            auto bundle = MapBundle::load(o_bundle);
            BaseSet base = bundle.variant();
            if (!o_base.empty()) base = parse_variant(o_base);
            OverlayResult r;
            if (o_kind == "citations" || o_kind == "hr") {
                if (o_uni.empty()) throw CLI::ValidationError("--university", "required for " + o_kind);
                if (o_kind == "hr") {
                    r = hr_overlay(bundle.corpus(), o_uni, base);
                } else {
                    r = normalized_citations_overlay(bundle.corpus(), o_uni, base, *parse_normalize_mode(o_norm),
                                                     *parse_citation_mode(o_mode));
                }
            } else if (o_kind == "department") {
                if (o_keyword.empty()) throw CLI::ValidationError("--keyword", "required for department");
                r = department_overlay(bundle.corpus(), o_keyword);
            } else {
                if (o_text_file.empty()) throw CLI::ValidationError("--text-file", "required for document");
                std::string text;
                if (o_text_file == "-") {
                    std::ostringstream os;
                    os << std::cin.rdbuf();
                    text = os.str();
                } else {
                    text = read_text(o_text_file);
                }
                r = document_overlay(text, bundle.lexicon());
            }
            std::cout << overlay_to_json(r).dump(2) << '\n';
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NotFoundError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}
