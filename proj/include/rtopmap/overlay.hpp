#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rtopmap/common.hpp"
#include "rtopmap/ingest.hpp"
#include "rtopmap/normalize.hpp"

namespace rtopmap {

enum class OverlayKind { Citations, CitationsNormalized, HumanResources, Department, Document };
enum class RenderHint { Heat, SignedCircles };
enum class BaseSet { World, US, EU };
enum class CitationMode { Full, Split };
enum class NormalizeMode { None, Rate, Literal };

std::string_view to_string(OverlayKind k);
std::string_view to_string(RenderHint h);
std::string_view to_string(BaseSet b);
std::string_view to_string(CitationMode m);
std::string_view to_string(NormalizeMode m);
std::optional<BaseSet> parse_base_set(std::string_view s);
std::optional<CitationMode> parse_citation_mode(std::string_view s);
std::optional<NormalizeMode> parse_normalize_mode(std::string_view s);

// Exact non-negative rational, kept in lowest terms.
struct Fraction {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Fraction& operator+=(const Fraction& o);
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Fraction&) const = default;
};

struct OverlayResult {
    OverlayKind kind = OverlayKind::Citations;
    RenderHint render_hint = RenderHint::Heat;
    BaseSet base_set = BaseSet::World;
    // University id, keyword or document digest.
    std::string meta;
    std::map<TopicId, double> values;
    // Exact per-topic sums behind citation values.
    std::map<TopicId, Fraction> exact;
    std::vector<std::string> warnings;
};

bool in_base_set(const Corpus& corpus, const ResearcherProfile& r, BaseSet base);

// c_X(t): citations of X's researchers listing t. Split mode divides each
// researcher's citations evenly across their topics.
OverlayResult citations_overlay(const Corpus& corpus, std::string_view university,
                                CitationMode mode = CitationMode::Full);

// Rate mode: c_X(t) * (C / |T|) / c_base(t), with C the sum of c_base over
// all topics and T the topics with c_base > 0. Literal mode:
// c_X(t) * c_base(t) / C.
OverlayResult normalized_citations_overlay(const Corpus& corpus, std::string_view university, BaseSet base,
                                           NormalizeMode normalize = NormalizeMode::Rate,
                                           CitationMode mode = CitationMode::Full);

// Percentage-point difference between X's share of researchers listing t and
// the base set's share.
OverlayResult hr_overlay(const Corpus& corpus, std::string_view university, BaseSet base);

// Same, with an arbitrary researcher subset standing in for X.
OverlayResult hr_overlay(const Corpus& corpus, const std::vector<const ResearcherProfile*>& group, BaseSet base);

// Researchers per topic among profiles whose affiliation contains the
// keyword as a whole word (case-insensitive).
OverlayResult department_overlay(const Corpus& corpus, std::string_view keyword);

// Stemmed unigram, bigram and trigram counts over stop-word-free tokens.
std::map<std::string, std::size_t> extract_document_terms(std::string_view text);

OverlayResult document_overlay(std::string_view text, const TopicLexicon& lexicon);

nlohmann::json overlay_to_json(const OverlayResult& r);

}  // namespace rtopmap
