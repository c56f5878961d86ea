#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rtopmap/common.hpp"

namespace rtopmap {

enum class Region { US, EU, OTHER };

std::string_view to_string(Region r);
std::optional<Region> parse_region(std::string_view s);

struct ResearcherProfile {
    std::string id;
    std::string name;
    std::string university_id;
    std::uint64_t total_citations = 0;
    std::string affiliation;
    std::string raw_topics;
    // Canonical topics; empty until normalization.
    std::vector<TopicId> topics;

    bool operator==(const ResearcherProfile&) const = default;
};

struct University {
    std::string id;
    std::string name;
    Region region = Region::OTHER;
    std::optional<std::uint64_t> academic_staff;

    bool operator==(const University&) const = default;
};

struct Corpus {
    std::vector<ResearcherProfile> profiles;
    std::vector<University> universities;

    const University* find_university(std::string_view id) const;
    bool operator==(const Corpus&) const = default;
};

struct RecordError {
    std::size_t line = 0;
    std::string message;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct ParseOptions {
    // Abort on the first malformed record instead of skipping it.
    bool strict = false;
    // Read the "topics" key written for annotated corpora.
    bool read_topics = false;
};

template <typename T>
struct ParseResult {
    std::vector<T> records;
    std::vector<RecordError> errors;
};

ParseResult<ResearcherProfile> parse_profiles(std::istream& in, const ParseOptions& opts = {});
ParseResult<University> load_universities(std::istream& in, const ParseOptions& opts = {});

void write_profiles(std::ostream& out, const std::vector<ResearcherProfile>& profiles,
                    bool with_topics = false);
void write_universities(std::ostream& out, const std::vector<University>& universities);

// Pairs profiles with their universities. Profiles whose university is
// unknown are reported (or rejected in strict mode).
Corpus make_corpus(std::vector<ResearcherProfile> profiles, std::vector<University> universities,
                   std::vector<RecordError>* errors = nullptr, bool strict = false);

Corpus load_corpus(const std::string& profiles_path, const std::string& universities_path,
                   const ParseOptions& opts = {}, std::vector<RecordError>* errors = nullptr);

// Splits a raw self-reported topic field into cleaned, lowercase pieces.
std::vector<std::string> clean_topic_field(std::string_view raw);

// --- synthetic corpora -----------------------------------------------------

struct VocabularyEntry {
    std::string name;
    double weight = 1.0;
    int field = 0;
};

struct Field {
    std::string department;
    double citation_scale = 1.0;
    // Fields of one discipline share a department and borrow each other's topics.
    int discipline = 0;
};

struct Vocabulary {
    std::vector<Field> fields;
    std::vector<VocabularyEntry> topics;
};

// Realistic research topics followed by generated pseudo-word phrases, with
// Zipf-distributed popularity inside each field. Entries have pairwise
// distinct stems and fingerprints.
Vocabulary make_vocabulary(std::uint64_t seed, std::size_t size);

struct SynthOptions {
    std::size_t n_universities = 60;
    // Probability that a profile carries one plural-variant topic.
    double variant_fraction = 0.0;
    // Probability that a profile carries one token-permuted topic.
    double permuted_fraction = 0.0;
    // Probability that two topics are written as "x and y".
    double conjunction_fraction = 0.0;
    // Probability that a topic is drawn from the profile's own field.
    double field_affinity = 0.8;
    // Of the off-field picks, the share drawn from a sibling field.
    double discipline_affinity = 0.5;
    double us_fraction = 0.45;
    double eu_fraction = 0.35;
};

Corpus synth_corpus(std::uint64_t seed, std::size_t n_profiles, const Vocabulary& vocabulary,
                    const SynthOptions& opts = {});

struct SynthPreset {
    std::size_t vocabulary = 300;
    std::size_t profiles = 500;
    SynthOptions options;
};

// "small": 500 profiles with injected variants. "large": about 6,000 nodes
// and 26,000 edges at the default build thresholds.
std::optional<SynthPreset> synth_preset(std::string_view name);

// Plural form used for variant injection: appends "s" to the last token.
std::string plural_variant(std::string_view topic);
// Token-permuted form: rotates the tokens left by one.
std::string permuted_variant(std::string_view topic);

}  // namespace rtopmap
