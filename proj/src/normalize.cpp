#include "rtopmap/normalize.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>
#include <unordered_set>

#include "rtopmap/text.hpp"

namespace rtopmap {

using nlohmann::json;

std::vector<std::string> split_topic(std::string_view topic) {
    std::vector<std::string> out;
    std::vector<std::string> piece;
    auto flush = [&] {
        if (!piece.empty()) out.push_back(text::join(piece, " "));
        piece.clear();
    };
    for (auto& tok : text::split_whitespace(topic)) {
        if (tok == "and" || tok == "or" || tok == "&") {
            flush();
        } else {
            piece.push_back(std::move(tok));
        }
    }
    flush();
    return out;
}

std::string stem_phrase(std::string_view phrase) {
    auto tokens = text::split_whitespace(text::to_lower(phrase));
    for (auto& t : tokens) t = text::stem_word(t);
    return text::join(tokens, " ");
}

std::string fingerprint_key(std::string_view phrase) {
    std::string s = text::to_lower(phrase);
    for (char& c : s) {
        auto u = static_cast<unsigned char>(c);
        if (u < 0x80 && (std::ispunct(u) || std::iscntrl(u))) c = ' ';
    }
    auto tokens = text::split_whitespace(s);
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    return text::join(tokens, " ");
}

std::vector<std::string> topic_forms(std::string_view raw_topics) {
    std::vector<std::string> out;
    for (const auto& cleaned : clean_topic_field(raw_topics)) {
        for (auto& piece : split_topic(cleaned)) {
            if (std::find(out.begin(), out.end(), piece) == out.end()) out.push_back(std::move(piece));
        }
    }
    return out;
}

TopicLexicon::TopicLexicon(std::vector<LexiconTopic> topics) : topics_(std::move(topics)) {
    for (std::uint32_t i = 0; i < topics_.size(); ++i) {
        const TopicId id{i};
        name_index_.emplace(topics_[i].name, id);
        fingerprint_index_.emplace(topics_[i].fingerprint, id);
        stem_index_.emplace(topics_[i].stem, id);
        for (const auto& m : topics_[i].members) stem_index_.emplace(stem_phrase(m), id);
    }
}

const LexiconTopic& TopicLexicon::at(TopicId id) const {
    if (!contains(id)) throw NotFoundError("unknown topic " + id.str());
    return topics_[id.value];
}

std::optional<TopicId> TopicLexicon::find_by_name(std::string_view name) const {
    auto it = name_index_.find(name);
    if (it == name_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<TopicId> TopicLexicon::find_by_stem(std::string_view stem) const {
    auto it = stem_index_.find(stem);
    if (it == stem_index_.end()) return std::nullopt;
    return it->second;
}

namespace {

// Highest count wins; ties go to the lexicographically smallest name.
bool better(std::size_t count_a, const std::string& a, std::size_t count_b, const std::string& b) {
    return count_a > count_b || (count_a == count_b && a < b);
}

}  // namespace

Canonicalized canonicalize(const Corpus& corpus) {
    const std::size_t n = corpus.profiles.size();

    // Forms per profile, and the set of distinct forms with profile counts.
    std::vector<std::vector<std::string>> profile_forms(n);
    std::unordered_map<std::string, std::size_t> form_freq;
    for (std::size_t i = 0; i < n; ++i) {
        profile_forms[i] = topic_forms(corpus.profiles[i].raw_topics);
        for (const auto& f : profile_forms[i]) ++form_freq[f];
    }

    std::vector<std::string> forms;
    forms.reserve(form_freq.size());
    for (const auto& [f, _] : form_freq) forms.push_back(f);
    std::sort(forms.begin(), forms.end());
    std::unordered_map<std::string, std::size_t> form_index;
    for (std::size_t i = 0; i < forms.size(); ++i) form_index.emplace(forms[i], i);

    // Stem groups.
    std::map<std::string, std::vector<std::size_t>> by_stem;
    std::vector<std::string> form_stem(forms.size());
    for (std::size_t i = 0; i < forms.size(); ++i) {
        form_stem[i] = stem_phrase(forms[i]);
        by_stem[form_stem[i]].push_back(i);
    }
    struct StemGroup {
        std::string stem;
        std::vector<std::size_t> forms;
        std::size_t canonical = 0;
        std::size_t frequency = 0;  // distinct profiles listing any member
    };
    std::vector<StemGroup> stem_groups;
    std::vector<std::size_t> group_of_form(forms.size());
    for (auto& [stem, members] : by_stem) {
        StemGroup g{stem, members, members.front(), 0};
        for (auto f : members) {
            if (better(form_freq[forms[f]], forms[f], form_freq[forms[g.canonical]], forms[g.canonical]))
                g.canonical = f;
            group_of_form[f] = stem_groups.size();
        }
        stem_groups.push_back(std::move(g));
    }
    {
        std::vector<std::size_t> last_seen(stem_groups.size(), SIZE_MAX);
        for (std::size_t i = 0; i < n; ++i) {
            for (const auto& f : profile_forms[i]) {
                auto g = group_of_form[form_index.at(f)];
                if (last_seen[g] != i) {
                    last_seen[g] = i;
                    ++stem_groups[g].frequency;
                }
            }
        }
    }

    // Fingerprint groups over stem-group canonicals.
    std::map<std::string, std::vector<std::size_t>> by_fingerprint;
    for (std::size_t g = 0; g < stem_groups.size(); ++g)
        by_fingerprint[fingerprint_key(forms[stem_groups[g].canonical])].push_back(g);

    struct Merged {
        std::string fingerprint;
        std::vector<std::size_t> groups;
        std::size_t canonical_group = 0;
    };
    std::vector<Merged> merged;
    std::vector<std::size_t> topic_of_group(stem_groups.size());
    for (auto& [fp, groups] : by_fingerprint) {
        Merged m{fp, groups, groups.front()};
        for (auto g : groups) {
            const auto& cand = stem_groups[g];
            const auto& best = stem_groups[m.canonical_group];
            if (better(cand.frequency, forms[cand.canonical], best.frequency, forms[best.canonical]))
                m.canonical_group = g;
            topic_of_group[g] = merged.size();
        }
        merged.push_back(std::move(m));
    }

    // Final frequencies and annotated profiles (by provisional index).
    std::vector<std::size_t> freq(merged.size(), 0);
    std::vector<std::vector<std::size_t>> profile_topics(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& f : profile_forms[i]) {
            auto t = topic_of_group[group_of_form[form_index.at(f)]];
            auto& pt = profile_topics[i];
            if (std::find(pt.begin(), pt.end(), t) == pt.end()) {
                pt.push_back(t);
                ++freq[t];
            }
        }
    }

    std::vector<std::size_t> order(merged.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    auto name_of = [&](std::size_t t) -> const std::string& {
        return forms[stem_groups[merged[t].canonical_group].canonical];
    };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return better(freq[a], name_of(a), freq[b], name_of(b));
    });
    std::vector<std::uint32_t> final_id(merged.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) final_id[order[i]] = i;

    std::vector<LexiconTopic> topics;
    topics.reserve(order.size());
    for (auto t : order) {
        LexiconTopic lt;
        lt.name = name_of(t);
        lt.frequency = freq[t];
        lt.stem = stem_phrase(lt.name);
        lt.fingerprint = merged[t].fingerprint;
        for (auto g : merged[t].groups)
            for (auto f : stem_groups[g].forms) lt.members.push_back(forms[f]);
        std::sort(lt.members.begin(), lt.members.end());
        topics.push_back(std::move(lt));
    }

    Canonicalized out{TopicLexicon(std::move(topics)), corpus};
    for (std::size_t i = 0; i < n; ++i) {
        auto& p = out.corpus.profiles[i];
        p.topics.clear();
        for (auto t : profile_topics[i]) p.topics.push_back(TopicId{final_id[t]});
    }
    return out;
}

json lexicon_to_json(const TopicLexicon& lexicon) {
    json j = json::object();
    for (std::uint32_t i = 0; i < lexicon.size(); ++i) {
        const auto& t = lexicon.topics()[i];
        j[TopicId{i}.str()] = {{"name", t.name},
                               {"frequency", t.frequency},
                               {"stem", t.stem},
                               {"fingerprint", t.fingerprint},
                               {"members", t.members}};
    }
    return j;
}

TopicLexicon lexicon_from_json(const json& j) {
    std::vector<std::pair<std::uint32_t, LexiconTopic>> entries;
    for (const auto& [key, value] : j.items()) {
        auto id = TopicId::parse(key);
        if (!id) throw InvalidArgument("bad topic id in lexicon: " + key);
        LexiconTopic t;
        t.name = value.at("name").get<std::string>();
        t.frequency = value.at("frequency").get<std::size_t>();
        t.stem = value.at("stem").get<std::string>();
        t.fingerprint = value.at("fingerprint").get<std::string>();
        if (value.contains("members")) t.members = value.at("members").get<std::vector<std::string>>();
        entries.emplace_back(id->value, std::move(t));
    }
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<LexiconTopic> topics;
    for (std::uint32_t i = 0; i < entries.size(); ++i) {
        if (entries[i].first != i) throw InvalidArgument("lexicon ids are not contiguous");
        topics.push_back(std::move(entries[i].second));
    }
    return TopicLexicon(std::move(topics));
}

}  // namespace rtopmap
