#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "rtopmap/ingest.hpp"
#include "rtopmap/text.hpp"

using namespace rtopmap;

namespace {

std::vector<std::string> pieces_of(const std::string& raw) {
    // Independent splitter: separators and the conjunction joiner only.
    std::string s = text::to_lower(raw);
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        auto t = text::trim(cur);
        if (!t.empty()) out.push_back(t);
        cur.clear();
    };
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == ',' || s[i] == ';' || s[i] == '/') {
            flush();
        } else if (s.compare(i, 5, " and ") == 0) {
            flush();
            i += 4;
        } else {
            cur += s[i];
        }
    }
    flush();
    return out;
}

std::string rotate_back(const std::string& phrase) {
    auto t = text::split_whitespace(phrase);
    if (t.size() > 1) std::rotate(t.begin(), t.end() - 1, t.end());
    return text::join(t, " ");
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("profile record fields are copied") {
    std::istringstream in(
        R"({"id":"r1","name":"Ada","uni":"u1","cites":100,"affiliation":"CS","raw_topics":"data mining, algorithms","extra":1})"
        "\n");
    auto r = parse_profiles(in);
    REQUIRE(r.errors.empty());
    REQUIRE(r.records.size() == 1);
    const auto& p = r.records[0];
    CHECK(p.id == "r1");
    CHECK(p.university_id == "u1");
    CHECK(p.total_citations == 100);
    CHECK(p.raw_topics == "data mining, algorithms");
    CHECK(p.topics.empty());
}

TEST_CASE("empty stream yields nothing") {
    std::istringstream in("");
    auto r = parse_profiles(in);
    CHECK(r.records.empty());
    CHECK(r.errors.empty());
}

TEST_CASE("negative citations are a record error") {
    std::istringstream in(
        "{\"id\":\"r1\",\"uni\":\"u1\",\"cites\":1}\n"
        "{\"id\":\"r2\",\"uni\":\"u1\",\"cites\":\"-5\"}\n"
        "not json\n"
        "{\"id\":\"r3\",\"uni\":\"u1\"}\n");
    auto r = parse_profiles(in);
    CHECK(r.records.size() == 2);
    REQUIRE(r.errors.size() == 2);
    CHECK(r.errors[0].line == 2);
    CHECK(r.errors[0].message == "negative citations");
    CHECK(r.errors[1].line == 3);

    std::istringstream again(in.str());
    ParseOptions strict;
    strict.strict = true;
    try {
        parse_profiles(again, strict);
        FAIL("strict mode accepted a bad record");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("duplicate researcher ids are rejected") {
    std::istringstream in("{\"id\":\"r1\",\"uni\":\"u1\"}\n{\"id\":\"r1\",\"uni\":\"u2\"}\n");
    auto r = parse_profiles(in);
    CHECK(r.records.size() == 1);
    CHECK(r.errors.size() == 1);
}

TEST_CASE("universities") {
    std::istringstream in(
        "{\"id\":\"u1\",\"name\":\"MIT\",\"region\":\"US\"}\n"
        "{\"id\":\"u2\",\"name\":\"Somewhere\"}\n"
        "{\"id\":\"u1\",\"name\":\"Again\",\"region\":\"EU\"}\n");
    auto r = load_universities(in);
    REQUIRE(r.records.size() == 2);
    CHECK(r.records[0].region == Region::US);
    CHECK(r.records[1].region == Region::OTHER);
    CHECK_FALSE(r.records[1].academic_staff);
    REQUIRE(r.errors.size() == 1);
    CHECK(r.errors[0].line == 3);
}

TEST_CASE("profiles must resolve their university") {
    std::vector<ResearcherProfile> ps(2);
    ps[0].id = "r1";
    ps[0].university_id = "u1";
    ps[1].id = "r2";
    ps[1].university_id = "u9";
    std::vector<University> us(1);
    us[0].id = "u1";
    std::vector<RecordError> errors;
    auto c = make_corpus(ps, us, &errors);
    CHECK(c.profiles.size() == 1);
    CHECK(errors.size() == 1);
    CHECK_THROWS_AS(make_corpus(ps, us, nullptr, true), InvalidArgument);
}

TEST_CASE("topic field cleaning") {
    using V = std::vector<std::string>;
    CHECK(clean_topic_field("data mining; machine learning / AI") == V{"data mining", "machine learning", "ai"});
    CHECK(clean_topic_field("<b>graph drawing</b>, networks") == V{"graph drawing", "networks"});
    CHECK(clean_topic_field("").empty());
    CHECK(clean_topic_field(" , ;; # ").empty());
    CHECK(clean_topic_field("C#.NET") == V{"c", "net"});
}

TEST_CASE("cleaned topics satisfy the output invariants") {
    auto vocab = make_vocabulary(3, 200);
    auto corpus = synth_corpus(3, 300, vocab, synth_preset("small")->options);
    for (const auto& p : corpus.profiles) {
        for (const auto& t : clean_topic_field(p.raw_topics + ", <i>X</i>;  Y ")) {
            CHECK(t.find(',') == std::string::npos);
            CHECK(t.find('<') == std::string::npos);
            CHECK(t == text::trim(t));
            CHECK(t == text::to_lower(t));
            CHECK_FALSE(t.empty());
        }
    }
}

TEST_CASE("serialize then parse is the identity") {
    auto vocab = make_vocabulary(11, 150);
    auto corpus = synth_corpus(11, 250, vocab);
    std::ostringstream p, u;
    write_profiles(p, corpus.profiles);
    write_universities(u, corpus.universities);
    std::istringstream pin(p.str()), uin(u.str());
    auto profiles = parse_profiles(pin);
    auto unis = load_universities(uin);
    CHECK(profiles.errors.empty());
    CHECK(unis.errors.empty());
    auto back = make_corpus(profiles.records, unis.records);
    CHECK(back == corpus);
}

TEST_CASE("synthetic corpora are deterministic") {
    auto vocab = make_vocabulary(7, 300);
    auto a = synth_corpus(7, 100, vocab);
    auto b = synth_corpus(7, 100, make_vocabulary(7, 300));
    std::ostringstream sa, sb;
    write_profiles(sa, a.profiles);
    write_profiles(sb, b.profiles);
    CHECK(sa.str() == sb.str());
    CHECK(a == b);
    CHECK(synth_corpus(8, 100, vocab) != a);
    CHECK(synth_corpus(7, 0, vocab).profiles.empty());
}

TEST_CASE("synthetic profiles list one to five topics") {
    auto preset = *synth_preset("small");
    auto corpus = synth_corpus(7, preset.profiles, make_vocabulary(7, preset.vocabulary), preset.options);
    for (const auto& p : corpus.profiles) {
        auto n = pieces_of(p.raw_topics).size();
        CHECK(n >= 1);
        CHECK(n <= 5);
        CHECK(corpus.find_university(p.university_id) != nullptr);
    }
}

TEST_CASE("injected variant count is fixed by the seed") {
    auto preset = *synth_preset("small");
    REQUIRE(preset.profiles == 500);
    REQUIRE(preset.options.variant_fraction == doctest::Approx(0.2));
    auto vocab = make_vocabulary(7, preset.vocabulary);
    auto corpus = synth_corpus(7, preset.profiles, vocab, preset.options);

    std::set<std::string> names;
    for (const auto& t : vocab.topics) names.insert(text::to_lower(t.name));
    std::size_t plural = 0, permuted = 0, unexplained = 0;
    for (const auto& p : corpus.profiles) {
        bool has_plural = false, has_permuted = false;
        for (const auto& piece : pieces_of(p.raw_topics)) {
            if (names.count(piece)) continue;
            if (piece.back() == 's' && names.count(piece.substr(0, piece.size() - 1))) {
                has_plural = true;
            } else if (names.count(rotate_back(piece))) {
                has_permuted = true;
            } else {
                ++unexplained;
            }
        }
        plural += has_plural;
        permuted += has_permuted;
    }
    CHECK(unexplained == 0);
    // Frozen from the oracle above. Only topics whose plural keeps the stem
    // are pluralized, so the count sits a little under 20% of 500.
    CHECK(plural == 89);
    CHECK(permuted == 52);
    CHECK(plural > 70);
    CHECK(plural < 130);
}

TEST_CASE("bundled corpus is the small preset at seed 7") {
    auto preset = *synth_preset("small");
    auto corpus = synth_corpus(7, preset.profiles, make_vocabulary(7, preset.vocabulary), preset.options);
    std::ostringstream p, u;
    write_profiles(p, corpus.profiles);
    write_universities(u, corpus.universities);
    CHECK(slurp(RTOPMAP_DATA_DIR "/profiles.jsonl") == p.str());
    CHECK(slurp(RTOPMAP_DATA_DIR "/universities.jsonl") == u.str());
}

TEST_CASE("missing files are reported as not found") {
    CHECK_THROWS_AS(load_corpus("/nonexistent/p.jsonl", "/nonexistent/u.jsonl"), NotFoundError);
}

}
