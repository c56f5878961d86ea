#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rtopmap/common.hpp"
#include "rtopmap/ingest.hpp"

namespace rtopmap {

// Splits a cleaned topic at the standalone conjunctions "and", "or", "&".
std::vector<std::string> split_topic(std::string_view topic);

// Per-token Porter2 stem, re-joined with single spaces.
std::string stem_phrase(std::string_view phrase);

// Key-collision fingerprint: lowercase, punctuation to spaces, unique
// tokens in sorted order.
std::string fingerprint_key(std::string_view phrase);

// Cleaned and split topic strings of one raw field, duplicates removed,
// in first-occurrence order.
std::vector<std::string> topic_forms(std::string_view raw_topics);

struct LexiconTopic {
    std::string name;
    // Number of distinct profiles listing the topic.
    std::size_t frequency = 0;
    std::string stem;
    std::string fingerprint;
    // Raw spellings merged into this topic, sorted.
    std::vector<std::string> members;

    bool operator==(const LexiconTopic&) const = default;
};

class TopicLexicon {
public:
    TopicLexicon() = default;
    explicit TopicLexicon(std::vector<LexiconTopic> topics);

    std::size_t size() const { return topics_.size(); }
    bool contains(TopicId id) const { return id.value < topics_.size(); }
    const LexiconTopic& at(TopicId id) const;
    const std::vector<LexiconTopic>& topics() const { return topics_; }

    // Stemmed phrase of any merged spelling -> topic.
    const std::map<std::string, TopicId, std::less<>>& stem_index() const { return stem_index_; }
    // Merged fingerprint key -> topic.
    const std::map<std::string, TopicId, std::less<>>& fingerprint_index() const {
        return fingerprint_index_;
    }

    std::optional<TopicId> find_by_name(std::string_view name) const;
    std::optional<TopicId> find_by_stem(std::string_view stem) const;

    bool operator==(const TopicLexicon& o) const { return topics_ == o.topics_; }

private:
    std::vector<LexiconTopic> topics_;
    std::map<std::string, TopicId, std::less<>> stem_index_;
    std::map<std::string, TopicId, std::less<>> fingerprint_index_;
    std::map<std::string, TopicId, std::less<>> name_index_;
};

struct Canonicalized {
    TopicLexicon lexicon;
    Corpus corpus;
};

// clean -> split -> merge by stem -> merge by fingerprint -> assign ids.
// Ids are ordered by descending frequency, then name.
Canonicalized canonicalize(const Corpus& corpus);

nlohmann::json lexicon_to_json(const TopicLexicon& lexicon);
TopicLexicon lexicon_from_json(const nlohmann::json& j);

}  // namespace rtopmap
