#include <doctest.h>

#include <numeric>
#include <regex>

#include "rtopmap/bundle.hpp"
#include "rtopmap/layout.hpp"
#include "rtopmap/overlay.hpp"
#include "rtopmap/text.hpp"
#include "oracles.hpp"

using namespace rtopmap;
using namespace testutil;

namespace {

std::map<TopicId, double> values(std::initializer_list<std::pair<TopicId, double>> list) {
    return {list.begin(), list.end()};
}

// Regex tokenizer and counter, kept apart from the library's own.
std::map<std::string, std::size_t> count_ngrams(const std::string& doc) {
    std::string lower = text::to_lower(doc);
    static const std::regex word(R"([a-z0-9]+(?:-[a-z0-9]+)*)");
    std::vector<std::string> toks;
    for (auto it = std::sregex_iterator(lower.begin(), lower.end(), word); it != std::sregex_iterator(); ++it) {
        auto w = it->str();
        if (!text::is_stop_word(w)) toks.push_back(text::stem_word(w));
    }
    std::map<std::string, std::size_t> out;
    for (std::size_t n = 1; n <= 3; ++n)
        for (std::size_t i = 0; i + n <= toks.size(); ++i) {
            std::string g = toks[i];
            for (std::size_t k = 1; k < n; ++k) g += " " + toks[i + k];
            ++out[g];
        }
    return out;
}

const char* kAbstract =
    "We study the problem of drawing large graphs as geographic maps. Given a network of research "
    "topics, where nodes are topics and edges connect topics that are listed together by the same "
    "researchers, we compute an embedding of the network in the plane using a multilevel "
    "force-directed algorithm. Nodes are grouped with k-means clustering, and each cluster becomes a "
    "country whose borders follow a modified Voronoi diagram of the embedded nodes. Countries are "
    "colored so that neighboring countries receive clearly different colors. To keep labels readable "
    "at every zoom level, we precompute eight levels of detail and greedily select which labels are "
    "shown, preferring heavier topics. Overlays then show where a university is strong or weak: "
    "citation heatmaps, differences in the share of researchers working on each topic, department "
    "heatmaps, and heatmaps of arbitrary documents such as calls for papers. Document overlays "
    "extract unigrams, bigrams and trigrams from the text after removing stop words and stemming, and "
    "match them against the topics already in the database. The system handles tens of thousands of "
    "topics and hundreds of thousands of researchers, and the map of the graph drawing community "
    "looks like a map of a real continent. Graph drawing, information visualization and machine "
    "learning appear as large countries with many neighbors on the map.";

const char* kCallForPapers =
    "<h1>Call for Papers</h1><p>The conference on Neural Information Processing Systems invites "
    "submissions on machine learning, deep learning and artificial intelligence. Topics of interest "
    "include machine learning theory, deep learning architectures, computer vision, natural language "
    "processing, data mining, and artificial intelligence for science. We welcome work that applies "
    "machine learning to computer vision and natural language processing, as well as new deep learning "
    "methods. Submissions must be anonymous and at most nine pages. Machine learning, deep learning, "
    "computer vision. Papers on data mining and artificial intelligence are encouraged.</p>";

}  // namespace

TEST_SUITE("overlay") {

TEST_CASE("raw citations, both modes") {
    ThreeUniversities f;
    auto full = citations_overlay(f.corpus(), "u1");
    CHECK(full.kind == OverlayKind::Citations);
    CHECK(full.render_hint == RenderHint::Heat);
    CHECK(full.meta == "u1");
    CHECK(full.values == values({{f.a, 150}, {f.b, 100}}));
    auto split = citations_overlay(f.corpus(), "u1", CitationMode::Split);
    CHECK(split.values == values({{f.a, 100}, {f.b, 50}}));
    auto u2 = citations_overlay(f.corpus(), "u2");
    CHECK(u2.values == values({{f.a, 150}}));
    CHECK_THROWS_AS(citations_overlay(f.corpus(), "u9"), NotFoundError);
}

TEST_CASE("normalized citations, both modes") {
    ThreeUniversities f;
    // c_base(a) = 300, c_base(b) = 300, C = 600, |T| = 2.
    auto rate = normalized_citations_overlay(f.corpus(), "u1", BaseSet::World, NormalizeMode::Rate);
    CHECK(rate.kind == OverlayKind::CitationsNormalized);
    CHECK(rate.values == values({{f.a, 150}, {f.b, 100}}));
    auto literal = normalized_citations_overlay(f.corpus(), "u1", BaseSet::World, NormalizeMode::Literal);
    CHECK(literal.values == values({{f.a, 75}, {f.b, 50}}));

    // Split counts: c_X = {100, 50}, c_base = {250, 250}, C = 500.
    auto rate_split =
        normalized_citations_overlay(f.corpus(), "u1", BaseSet::World, NormalizeMode::Rate, CitationMode::Split);
    CHECK(rate_split.values == values({{f.a, 100}, {f.b, 50}}));
    auto literal_split =
        normalized_citations_overlay(f.corpus(), "u1", BaseSet::World, NormalizeMode::Literal, CitationMode::Split);
    CHECK(literal_split.values == values({{f.a, 50}, {f.b, 25}}));

    // US base: c_base = {300, 100}, C = 400.
    auto us = normalized_citations_overlay(f.corpus(), "u1", BaseSet::US, NormalizeMode::Rate);
    CHECK(us.base_set == BaseSet::US);
    CHECK(us.values == values({{f.a, 100}, {f.b, 200}}));
    auto us_literal = normalized_citations_overlay(f.corpus(), "u1", BaseSet::US, NormalizeMode::Literal);
    CHECK(us_literal.values == values({{f.a, 112.5}, {f.b, 25}}));

    auto none = normalized_citations_overlay(f.corpus(), "u1", BaseSet::World, NormalizeMode::None);
    CHECK(none.values == values({{f.a, 150}, {f.b, 100}}));
}

TEST_CASE("topics without base citations are dropped with a warning") {
    ThreeUniversities f;
    // The EU base has no citations for a.
    auto eu = normalized_citations_overlay(f.corpus(), "u1", BaseSet::EU, NormalizeMode::Rate);
    CHECK(eu.values == values({{f.b, 100}}));
    CHECK(eu.warnings.size() == 1);
}

TEST_CASE("self-normalization gives C over |T|") {
    ThreeUniversities f;
    auto corpus = f.corpus();
    for (auto& p : corpus.profiles) p.university_id = "u1";
    auto r = normalized_citations_overlay(corpus, "u1", BaseSet::World, NormalizeMode::Rate);
    CHECK(r.values == values({{f.a, 300}, {f.b, 300}}));
}

TEST_CASE("equal base citations keep raw proportions") {
    ThreeUniversities f;
    auto raw = citations_overlay(f.corpus(), "u1");
    auto rate = normalized_citations_overlay(f.corpus(), "u1", BaseSet::World, NormalizeMode::Rate);
    CHECK(rate.values.at(f.a) / rate.values.at(f.b) == raw.values.at(f.a) / raw.values.at(f.b));
}

TEST_CASE("human resources") {
    ThreeUniversities f;
    auto hr = hr_overlay(f.corpus(), "u1", BaseSet::World);
    CHECK(hr.kind == OverlayKind::HumanResources);
    CHECK(hr.render_hint == RenderHint::SignedCircles);
    // a: 2/2 vs 3/4; b: 1/2 vs 2/4.
    CHECK(hr.values == values({{f.a, 25}, {f.b, 0}}));
    auto hr2 = hr_overlay(f.corpus(), "u2", BaseSet::World);
    CHECK(hr2.values == values({{f.a, 25}, {f.b, -50}}));
    auto us = hr_overlay(f.corpus(), "u1", BaseSet::US);
    CHECK(us.values.at(f.a) == 0.0);
    CHECK(us.values.at(f.b) == doctest::Approx(50.0 - 100.0 / 3.0));
    CHECK_THROWS_AS(hr_overlay(f.corpus(), "u9", BaseSet::World), NotFoundError);
    CHECK_THROWS_AS(hr_overlay(f.corpus(), std::vector<const ResearcherProfile*>{}, BaseSet::World),
                    InvalidArgument);
}

TEST_CASE("human resources of the whole base is zero") {
    auto preset = *synth_preset("small");
    auto canon = canonicalize(synth_corpus(3, 400, make_vocabulary(3, preset.vocabulary), preset.options));
    for (auto base : {BaseSet::World, BaseSet::US, BaseSet::EU}) {
        std::vector<const ResearcherProfile*> all;
        for (const auto& p : canon.corpus.profiles)
            if (in_base_set(canon.corpus, p, base)) all.push_back(&p);
        auto hr = hr_overlay(canon.corpus, all, base);
        for (auto [t, v] : hr.values) CHECK(v == 0.0);
    }
    for (const auto& u : canon.corpus.universities) {
        auto hr = hr_overlay(canon.corpus, u.id, BaseSet::World);
        for (auto [t, v] : hr.values) {
            CHECK(v >= -100.0);
            CHECK(v <= 100.0);
        }
    }
}

TEST_CASE("split citations are conserved exactly") {
    auto preset = *synth_preset("small");
    auto canon = canonicalize(synth_corpus(8, 500, make_vocabulary(8, preset.vocabulary), preset.options));
    for (const auto& u : canon.corpus.universities) {
        std::int64_t cites = 0, weighted = 0;
        for (const auto& p : canon.corpus.profiles)
            if (p.university_id == u.id) {
                cites += static_cast<std::int64_t>(p.total_citations);
                weighted += static_cast<std::int64_t>(p.total_citations * p.topics.size());
            }
        auto split = citations_overlay(canon.corpus, u.id, CitationMode::Split);
        Fraction sum;
        for (const auto& [t, q] : split.exact) sum += q;
        CHECK(sum == Fraction{cites, 1});
        auto full = citations_overlay(canon.corpus, u.id, CitationMode::Full);
        Fraction fsum;
        for (const auto& [t, q] : full.exact) fsum += q;
        CHECK(fsum == Fraction{weighted, 1});
    }
}

TEST_CASE("fractions stay in lowest terms") {
    Fraction f{1, 3};
    f += Fraction{1, 6};
    CHECK(f == Fraction{1, 2});
    f += Fraction{1, 2};
    CHECK(f == Fraction{1, 1});
}

TEST_CASE("department keyword matches whole words") {
    ThreeUniversities f;
    auto d = department_overlay(f.corpus(), "biology");
    CHECK(d.kind == OverlayKind::Department);
    // r3 "Dept. of Biology" and r4 "... Chemical Biology"; not r2 "Biologist".
    CHECK(d.values == values({{f.a, 1}, {f.b, 1}}));
    CHECK(department_overlay(f.corpus(), "BIOLOGY").values == d.values);
    CHECK(department_overlay(f.corpus(), "astronomy").values.empty());
    CHECK_THROWS_AS(department_overlay(f.corpus(), "  "), InvalidArgument);
}

TEST_CASE("department fixture of twenty profiles") {
    const std::pair<const char*, const char*> rows[20] = {
        {"Professor of Biology", "ecology, genetics"},
        {"Biologist", "ecology"},
        {"Art History", "painting"},
        {"Particle Physics Group", "optics"},
        {"Biology Department", "ecology"},
        {"Computer Science", "algorithms"},
        {"Chemistry and Chemical Biology", "genetics, catalysis"},
        {"Microbiology", "genetics"},
        {"School of Biology and Medicine", "ecology, immunology"},
        {"Fine Art", "sculpture"},
        {"Biological Sciences", "ecology"},
        {"Neurobiology Lab", "neuroscience"},
        {"PhD student, University of Biologia", "genetics"},
        {"Mathematics", "algebra"},
        {"Biologics Lab", "robotics"},
        {"Physics", "optics"},
        {"Artificial Intelligence", "algorithms"},
        {"Chemistry", "catalysis"},
        {"Bio logy", "ecology"},
        {"Medicine", "immunology"},
    };
    Corpus c;
    c.universities = {{"u1", "One", Region::US, std::nullopt}};
    for (int i = 0; i < 20; ++i) c.profiles.push_back(profile("r" + std::to_string(i), "u1", 1, rows[i].second, rows[i].first));
    auto canon = canonicalize(c);
    auto id = [&](const char* name) { return *canon.lexicon.find_by_name(name); };
    // Hand-picked matches: r0, r4, r6, r8.
    auto d = department_overlay(canon.corpus, "biology");
    CHECK(d.values == values({{id("ecology"), 3}, {id("genetics"), 2}, {id("catalysis"), 1},
                              {id("immunology"), 1}}));
    // "art" matches "Art History" and "Fine Art" but not "Particle" or "Artificial".
    auto art = department_overlay(canon.corpus, "art");
    CHECK(art.values == values({{id("painting"), 1}, {id("sculpture"), 1}}));
}

TEST_CASE("document terms") {
    auto t = extract_document_terms("deep learning improves deep learning");
    CHECK(t.at("deep learn") == 2);
    CHECK(t.at("deep") == 2);
    CHECK(t.at("learn") == 2);
    CHECK(t.at("improv") == 1);
    CHECK(t.at("deep learn improv") == 1);
    CHECK(t.at("learn improv deep") == 1);
    CHECK(t.size() == 9);
    CHECK(extract_document_terms("").empty());
    CHECK(extract_document_terms("<p>the and of</p>").empty());
    auto h = extract_document_terms("Electro-catalysis, of <b>water</b>!");
    CHECK(h.at("electro-catalysi water") == 1);
}

TEST_CASE("document terms match an independent n-gram count") {
    auto got = extract_document_terms(kAbstract);
    auto want = count_ngrams(kAbstract);
    CHECK(got == want);
    // A few entries worked by hand.
    CHECK(got.at("graph draw") == 2);
    CHECK(got.at("map") == 4);
    CHECK(got.at("topic") == 7);
    CHECK(got.at("heatmap") == 3);
    CHECK(got.at("machin learn") == 1);
}

TEST_CASE("document overlay") {
    ThreeUniversities f;
    auto d = document_overlay("Algorithms for machine learning. Algorithms! ALGORITHMS.", f.canon.lexicon);
    CHECK(d.kind == OverlayKind::Document);
    CHECK(d.meta.size() == 64);
    CHECK(d.values == values({{f.b, 3}, {f.a, 1}}));
    CHECK(document_overlay("nothing relevant here", f.canon.lexicon).values.empty());
    CHECK(document_overlay("learning machine", f.canon.lexicon).values.empty());
}

TEST_CASE("call for papers lands in the machine learning country") {
    // The large map: countries hold a few hundred topics each.
    auto preset = *synth_preset("large");
    auto corpus = synth_corpus(7, preset.profiles, make_vocabulary(7, preset.vocabulary), preset.options);
    auto canon = canonicalize(corpus);
    BuildConfig cfg;
    auto g = filter_graph(build_graph(canon.corpus, canon.lexicon), cfg.min_node_weight, cfg.min_edge_weight);
    EmbedOptions eo;
    eo.seed = cfg.seed;
    auto e = remove_overlaps(embed(g, eo));
    auto clusters = cluster_nodes(e, cfg.clusters, cfg.seed);

    auto ml = *canon.lexicon.find_by_name("machine learning");
    auto ml_cluster = clusters.cluster_of[*e.index_of(ml)];
    auto d = document_overlay(kCallForPapers, canon.lexicon);
    double inside = 0, total = 0;
    for (auto [t, v] : d.values) {
        CHECK(v > 0);
        total += v;
        if (auto i = e.index_of(t)) inside += clusters.cluster_of[*i] == ml_cluster ? v : 0;
    }
    REQUIRE(total > 0);
    MESSAGE("share inside the machine learning cluster: " << inside / total);
    CHECK(inside / total >= 0.7);
}

TEST_CASE("overlay export") {
    ThreeUniversities f;
    auto j = overlay_to_json(hr_overlay(f.corpus(), "u1", BaseSet::US));
    CHECK(j["kind"] == "HUMAN_RESOURCES");
    CHECK(j["render_hint"] == "SIGNED_CIRCLES");
    CHECK(j["base_set"] == "US");
    CHECK(j["meta"] == "u1");
    CHECK(j["values"][f.a.str()] == 0.0);
}

TEST_CASE("parameter parsing") {
    CHECK(parse_base_set("us") == BaseSet::US);
    CHECK(parse_base_set("World") == BaseSet::World);
    CHECK_FALSE(parse_base_set("ASIA"));
    CHECK(parse_citation_mode("split") == CitationMode::Split);
    CHECK_FALSE(parse_citation_mode("half"));
    CHECK(parse_normalize_mode("literal") == NormalizeMode::Literal);
    CHECK_FALSE(parse_normalize_mode(""));
}

TEST_CASE("overlays are pure") {
    ThreeUniversities f;
    auto a = overlay_to_json(normalized_citations_overlay(f.corpus(), "u1", BaseSet::World)).dump();
    auto b = overlay_to_json(normalized_citations_overlay(f.corpus(), "u1", BaseSet::World)).dump();
    CHECK(a == b);
}

}
