#pragma once

// Independent reference implementations shared by the unit tests and the
// acceptance runner. They favour obviousness over speed.

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rtopmap/graph.hpp"
#include "rtopmap/ingest.hpp"
#include "rtopmap/layout.hpp"
#include "rtopmap/normalize.hpp"

namespace testutil {

using namespace rtopmap;

using PairCounts = std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t>;

struct Counts {
    std::map<std::uint32_t, std::uint64_t> nodes;
    PairCounts edges;
};

// Nested loops over every profile's topic pairs.
inline Counts count_cooccurrence(const std::vector<ResearcherProfile>& profiles) {
    Counts c;
    for (const auto& p : profiles) {
        for (std::size_t i = 0; i < p.topics.size(); ++i) {
            ++c.nodes[p.topics[i].value];
            for (std::size_t j = 0; j < p.topics.size(); ++j) {
                auto a = p.topics[i].value, b = p.topics[j].value;
                if (a < b) ++c.edges[{a, b}];
            }
        }
    }
    return c;
}

// Closed over connected triples, by enumerating every (center, pair) triple.
inline double brute_clustering(const TopicGraph& g) {
    const auto n = g.node_count();
    std::vector<std::vector<char>> a(n, std::vector<char>(n, 0));
    for (const auto& e : g.edges()) {
        auto u = *g.index_of(e.u), v = *g.index_of(e.v);
        a[u][v] = a[v][u] = 1;
    }
    std::uint64_t closed = 0, connected = 0;
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (a[c][i] && a[c][j]) {
                    ++connected;
                    closed += a[i][j];
                }
    return connected ? static_cast<double>(closed) / static_cast<double>(connected) : 0.0;
}

// Mean over connected unordered pairs, BFS from every node.
inline std::optional<double> brute_average_path(const TopicGraph& g) {
    const auto n = g.node_count();
    double total = 0;
    std::uint64_t pairs = 0;
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<int> d(n, -1);
        std::deque<std::size_t> q{s};
        d[s] = 0;
        while (!q.empty()) {
            auto v = q.front();
            q.pop_front();
            for (auto [u, _] : g.adjacency()[v])
                if (d[u] < 0) {
                    d[u] = d[v] + 1;
                    q.push_back(u);
                }
        }
        for (std::size_t t = s + 1; t < n; ++t)
            if (d[t] > 0) {
                total += d[t];
                ++pairs;
            }
    }
    if (pairs == 0) return std::nullopt;
    return total / static_cast<double>(pairs);
}

struct OracleTopic {
    std::set<std::string> members;
    std::string canonical;
    std::size_t frequency = 0;
};

// Pairwise grouping: same stem first, then same fingerprint of the stem
// groups' canonical forms. Canonical = most profiles, ties alphabetical.
inline std::vector<OracleTopic> brute_force_groups(const Corpus& corpus) {
    std::vector<std::vector<std::string>> listed;
    for (const auto& p : corpus.profiles) listed.push_back(topic_forms(p.raw_topics));
    std::vector<std::string> forms;
    for (const auto& l : listed)
        for (const auto& f : l)
            if (std::find(forms.begin(), forms.end(), f) == forms.end()) forms.push_back(f);

    auto profiles_listing = [&](const std::set<std::string>& group) {
        std::size_t n = 0;
        for (const auto& l : listed) {
            bool any = false;
            for (const auto& f : l) any = any || group.count(f);
            n += any;
        }
        return n;
    };
    auto pick = [](const std::vector<std::pair<std::size_t, std::string>>& cands) {
        auto best = cands.front();
        for (const auto& c : cands)
            if (c.first > best.first || (c.first == best.first && c.second < best.second)) best = c;
        return best.second;
    };

    std::vector<std::size_t> label(forms.size());
    std::iota(label.begin(), label.end(), 0);
    for (std::size_t i = 0; i < forms.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (stem_phrase(forms[i]) == stem_phrase(forms[j])) {
                auto from = label[i], to = label[j];
                for (auto& l : label)
                    if (l == from) l = to;
            }
    std::map<std::size_t, std::set<std::string>> stem_groups;
    for (std::size_t i = 0; i < forms.size(); ++i) stem_groups[label[i]].insert(forms[i]);

    struct G {
        std::set<std::string> members;
        std::string canonical;
        std::size_t freq;
    };
    std::vector<G> groups;
    for (const auto& [_, members] : stem_groups) {
        std::vector<std::pair<std::size_t, std::string>> cands;
        for (const auto& m : members) cands.push_back({profiles_listing({m}), m});
        groups.push_back({members, pick(cands), profiles_listing(members)});
    }

    std::vector<std::size_t> glabel(groups.size());
    std::iota(glabel.begin(), glabel.end(), 0);
    for (std::size_t a = 0; a < groups.size(); ++a)
        for (std::size_t b = 0; b < a; ++b)
            if (fingerprint_key(groups[a].canonical) == fingerprint_key(groups[b].canonical)) {
                auto from = glabel[a], to = glabel[b];
                for (auto& l : glabel)
                    if (l == from) l = to;
            }
    std::map<std::size_t, std::vector<std::size_t>> merged;
    for (std::size_t a = 0; a < groups.size(); ++a) merged[glabel[a]].push_back(a);

    std::vector<OracleTopic> out;
    for (const auto& [_, gs] : merged) {
        OracleTopic t;
        std::vector<std::pair<std::size_t, std::string>> cands;
        for (auto g : gs) {
            t.members.insert(groups[g].members.begin(), groups[g].members.end());
            cands.push_back({groups[g].freq, groups[g].canonical});
        }
        t.canonical = pick(cands);
        t.frequency = profiles_listing(t.members);
        out.push_back(std::move(t));
    }
    return out;
}

inline bool any_overlap_bruteforce(const Embedding& e) {
    for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t j = i + 1; j < e.size(); ++j) {
            const double ox = (e.boxes[i].width + e.boxes[j].width) / 2 - std::abs(e.positions[i].x - e.positions[j].x);
            const double oy = (e.boxes[i].height + e.boxes[j].height) / 2 - std::abs(e.positions[i].y - e.positions[j].y);
            if (ox > 0 && oy > 0) return true;
        }
    return false;
}

// Even-odd ray casting over every ring.
inline bool ray_cast_inside(Vec2 p, const std::vector<std::vector<Vec2>>& rings) {
    bool inside = false;
    for (const auto& r : rings)
        for (std::size_t i = 0, j = r.size() - 1; i < r.size(); j = i++) {
            const auto& a = r[i];
            const auto& b = r[j];
            if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) inside = !inside;
        }
    return inside;
}

// Shoelace area, positive for counterclockwise rings so holes subtract.
inline double shoelace(const std::vector<Vec2>& ring) {
    double s = 0;
    for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++)
        s += ring[j].x * ring[i].y - ring[i].x * ring[j].y;
    return s / 2;
}

inline ResearcherProfile profile(std::string id, std::string uni, std::uint64_t cites, std::string topics,
                                 std::string affiliation = "") {
    ResearcherProfile p;
    p.id = std::move(id);
    p.university_id = std::move(uni);
    p.total_citations = cites;
    p.raw_topics = std::move(topics);
    p.affiliation = std::move(affiliation);
    return p;
}

// Three universities: u1 (US) holds r1 {a,b} 100 and r2 {a} 50; u2 (US)
// holds r3 {a} 150; u3 (EU) holds r4 {b} 200. a = machine learning,
// b = algorithms.
struct ThreeUniversities {
    Canonicalized canon;
    TopicId a, b;

    ThreeUniversities() {
        Corpus c;
        c.universities = {{"u1", "One", Region::US, std::nullopt},
                          {"u2", "Two", Region::US, std::nullopt},
                          {"u3", "Three", Region::EU, std::nullopt}};
        c.profiles = {profile("r1", "u1", 100, "machine learning, algorithms", "Professor of Computer Science"),
                      profile("r2", "u1", 50, "machine learning", "Biologist"),
                      profile("r3", "u2", 150, "machine learning", "Dept. of Biology"),
                      profile("r4", "u3", 200, "algorithms", "Chemistry and Chemical Biology")};
        canon = canonicalize(c);
        a = *canon.lexicon.find_by_name("machine learning");
        b = *canon.lexicon.find_by_name("algorithms");
    }
    const Corpus& corpus() const { return canon.corpus; }
};

}  // namespace testutil
