#include "rtopmap/overlay.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "rtopmap/digest.hpp"
#include "rtopmap/text.hpp"

namespace rtopmap {

std::string_view to_string(OverlayKind k) {
    switch (k) {
        case OverlayKind::Citations: return "CITATIONS";
        case OverlayKind::CitationsNormalized: return "CITATIONS_NORMALIZED";
        case OverlayKind::HumanResources: return "HUMAN_RESOURCES";
        case OverlayKind::Department: return "DEPARTMENT";
        case OverlayKind::Document: return "DOCUMENT";
    }
    return "";
}

std::string_view to_string(RenderHint h) { return h == RenderHint::Heat ? "HEAT" : "SIGNED_CIRCLES"; }

std::string_view to_string(BaseSet b) {
    switch (b) {
        case BaseSet::World: return "WORLD";
        case BaseSet::US: return "US";
        case BaseSet::EU: return "EU";
    }
    return "";
}

std::string_view to_string(CitationMode m) { return m == CitationMode::Full ? "full" : "split"; }

std::string_view to_string(NormalizeMode m) {
    switch (m) {
        case NormalizeMode::None: return "none";
        case NormalizeMode::Rate: return "rate";
        case NormalizeMode::Literal: return "literal";
    }
    return "";
}

std::optional<BaseSet> parse_base_set(std::string_view s) {
    auto u = text::to_lower(s);
    if (u == "world") return BaseSet::World;
    if (u == "us") return BaseSet::US;
    if (u == "eu") return BaseSet::EU;
    return std::nullopt;
}

std::optional<CitationMode> parse_citation_mode(std::string_view s) {
    if (s == "full") return CitationMode::Full;
    if (s == "split") return CitationMode::Split;
    return std::nullopt;
}

std::optional<NormalizeMode> parse_normalize_mode(std::string_view s) {
    if (s == "none") return NormalizeMode::None;
    if (s == "rate") return NormalizeMode::Rate;
    if (s == "literal") return NormalizeMode::Literal;
    return std::nullopt;
}

Fraction& Fraction::operator+=(const Fraction& o) {
    const std::int64_t g = std::gcd(den, o.den);
    const std::int64_t l = den / g * o.den;
    num = num * (l / den) + o.num * (l / o.den);
    den = l;
    const std::int64_t r = std::gcd(num, den);
    if (r > 1) {
        num /= r;
        den /= r;
    }
    return *this;
}

bool in_base_set(const Corpus& corpus, const ResearcherProfile& r, BaseSet base) {
    if (base == BaseSet::World) return true;
    const auto* u = corpus.find_university(r.university_id);
    if (!u) return false;
    return (base == BaseSet::US && u->region == Region::US) || (base == BaseSet::EU && u->region == Region::EU);
}

namespace {

const University& require_university(const Corpus& corpus, std::string_view id) {
    const auto* u = corpus.find_university(id);
    if (!u) throw NotFoundError("unknown university " + std::string(id));
    return *u;
}

template <typename Pred>
std::map<TopicId, Fraction> citation_sums(const Corpus& corpus, CitationMode mode, Pred include) {
    std::map<TopicId, Fraction> sums;
    for (const auto& r : corpus.profiles) {
        if (r.topics.empty() || !include(r)) continue;
        const auto cites = static_cast<std::int64_t>(r.total_citations);
        const Fraction share = mode == CitationMode::Full
                                   ? Fraction{cites, 1}
                                   : Fraction{cites, static_cast<std::int64_t>(r.topics.size())};
        for (auto t : r.topics) sums[t] += share;
    }
    return sums;
}

}  // namespace

OverlayResult citations_overlay(const Corpus& corpus, std::string_view university, CitationMode mode) {
    require_university(corpus, university);
    OverlayResult out;
    out.kind = OverlayKind::Citations;
    out.meta = std::string(university);
    out.exact = citation_sums(corpus, mode, [&](const ResearcherProfile& r) { return r.university_id == university; });
    for (const auto& [t, f] : out.exact) out.values[t] = f.value();
    return out;
}

OverlayResult normalized_citations_overlay(const Corpus& corpus, std::string_view university, BaseSet base,
                                           NormalizeMode normalize, CitationMode mode) {
    OverlayResult out = citations_overlay(corpus, university, mode);
    out.base_set = base;
    if (normalize == NormalizeMode::None) return out;
    out.kind = OverlayKind::CitationsNormalized;
    auto base_sums = citation_sums(corpus, mode, [&](const ResearcherProfile& r) { return in_base_set(corpus, r, base); });
    double total = 0;
    std::size_t cited_topics = 0;
    for (const auto& [t, f] : base_sums) {
        total += f.value();
        if (f.num > 0) ++cited_topics;
    }
    std::map<TopicId, double> values;
    std::size_t omitted = 0;
    for (const auto& [t, cx] : out.values) {
        auto it = base_sums.find(t);
        const double cb = it == base_sums.end() ? 0.0 : it->second.value();
        if (normalize == NormalizeMode::Rate) {
            if (cb <= 0) {
                ++omitted;
                continue;
            }
            values[t] = cx * (total / static_cast<double>(cited_topics)) / cb;
        } else {
            values[t] = total > 0 ? cx * cb / total : 0.0;
        }
    }
    if (omitted > 0) {
        out.warnings.push_back(std::to_string(omitted) + " topics have no base citations and were omitted");
        spdlog::warn("normalized citations: {} topics without base citations omitted", omitted);
    }
    out.values = std::move(values);
    out.exact.clear();
    return out;
}

OverlayResult hr_overlay(const Corpus& corpus, const std::vector<const ResearcherProfile*>& group, BaseSet base) {
    if (group.empty()) throw InvalidArgument("human-resources overlay needs at least one researcher");
    std::map<TopicId, std::size_t> in_group, in_base;
    for (const auto* r : group)
        for (auto t : r->topics) ++in_group[t];
    std::size_t base_size = 0;
    for (const auto& r : corpus.profiles) {
        if (!in_base_set(corpus, r, base)) continue;
        ++base_size;
        for (auto t : r.topics) ++in_base[t];
    }
    if (base_size == 0) throw InvalidArgument("base set " + std::string(to_string(base)) + " is empty");
    OverlayResult out;
    out.kind = OverlayKind::HumanResources;
    out.render_hint = RenderHint::SignedCircles;
    out.base_set = base;
    const double gx = static_cast<double>(group.size());
    const double gb = static_cast<double>(base_size);
    for (const auto& [t, c] : in_group) out.values[t] = 100.0 * static_cast<double>(c) / gx;
    for (const auto& [t, c] : in_base) out.values[t] -= 100.0 * static_cast<double>(c) / gb;
    return out;
}

OverlayResult hr_overlay(const Corpus& corpus, std::string_view university, BaseSet base) {
    require_university(corpus, university);
    std::vector<const ResearcherProfile*> group;
    for (const auto& r : corpus.profiles)
        if (r.university_id == university) group.push_back(&r);
    if (group.empty()) throw InvalidArgument("university " + std::string(university) + " has no researchers");
    auto out = hr_overlay(corpus, group, base);
    out.meta = std::string(university);
    return out;
}

OverlayResult department_overlay(const Corpus& corpus, std::string_view keyword) {
    const std::string key = text::trim(keyword);
    if (key.empty()) throw InvalidArgument("department keyword is empty");
    OverlayResult out;
    out.kind = OverlayKind::Department;
    out.meta = key;
    for (const auto& r : corpus.profiles) {
        if (!text::contains_word(r.affiliation, key)) continue;
        for (auto t : r.topics) out.values[t] += 1.0;
    }
    return out;
}

namespace {

std::vector<std::string> document_tokens(std::string_view raw) {
    std::string s = text::to_lower(text::strip_tags(raw));
    auto alnum = [](char c) {
        auto u = static_cast<unsigned char>(c);
        return std::isalnum(u) || u >= 0x80;
    };
    for (std::size_t i = 0; i < s.size(); ++i) {
        auto u = static_cast<unsigned char>(s[i]);
        if (u >= 0x80 || std::isalnum(u)) continue;
        // keep hyphens joining two word characters, as in topic names
        if (s[i] == '-' && i > 0 && i + 1 < s.size() && alnum(s[i - 1]) && alnum(s[i + 1])) continue;
        s[i] = ' ';
    }
    std::vector<std::string> out;
    for (auto& tok : text::split_whitespace(s))
        if (!text::is_stop_word(tok)) out.push_back(text::stem_word(tok));
    return out;
}

}  // namespace

std::map<std::string, std::size_t> extract_document_terms(std::string_view raw) {
    const auto tokens = document_tokens(raw);
    std::map<std::string, std::size_t> terms;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        std::string gram = tokens[i];
        ++terms[gram];
        for (std::size_t n = 1; n < 3 && i + n < tokens.size(); ++n) {
            gram += ' ';
            gram += tokens[i + n];
            ++terms[gram];
        }
    }
    return terms;
}

OverlayResult document_overlay(std::string_view raw, const TopicLexicon& lexicon) {
    OverlayResult out;
    out.kind = OverlayKind::Document;
    out.meta = sha256_hex(raw);
    const auto& index = lexicon.stem_index();
    for (const auto& [term, count] : extract_document_terms(raw)) {
        auto it = index.find(term);
        if (it != index.end()) out.values[it->second] += static_cast<double>(count);
    }
    return out;
}

nlohmann::json overlay_to_json(const OverlayResult& r) {
    nlohmann::json values = nlohmann::json::object();
    for (const auto& [t, v] : r.values) values[t.str()] = v;
    nlohmann::json j{{"kind", to_string(r.kind)},
                     {"render_hint", to_string(r.render_hint)},
                     {"base_set", to_string(r.base_set)},
                     {"meta", r.meta},
                     {"values", std::move(values)}};
    if (!r.warnings.empty()) j["warnings"] = r.warnings;
    return j;
}

}  // namespace rtopmap
