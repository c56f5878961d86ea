#include "rtopmap/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "rtopmap/normalize.hpp"
#include "rtopmap/text.hpp"

namespace rtopmap {

using nlohmann::json;

std::string_view to_string(Region r) {
    switch (r) {
        case Region::US: return "US";
        case Region::EU: return "EU";
        case Region::OTHER: return "OTHER";
    }
    return "OTHER";
}

std::optional<Region> parse_region(std::string_view s) {
    std::string up(s);
    std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
    if (up == "US") return Region::US;
    if (up == "EU") return Region::EU;
    if (up == "OTHER") return Region::OTHER;
    return std::nullopt;
}

const University* Corpus::find_university(std::string_view id) const {
    for (const auto& u : universities)
        if (u.id == id) return &u;
    return nullptr;
}

ParseError::ParseError(std::size_t line, const std::string& message)
    : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

std::string get_string(const json& obj, const char* key, bool required) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        if (required) throw InvalidArgument(std::string("missing \"") + key + "\"");
        return {};
    }
    if (it->is_string()) return it->get<std::string>();
    if (it->is_number_integer()) return std::to_string(it->get<std::int64_t>());
    throw InvalidArgument(std::string("\"") + key + "\" must be a string");
}

std::uint64_t get_count(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return 0;
    std::int64_t v = 0;
    if (it->is_number_integer()) {
        v = it->get<std::int64_t>();
    } else if (it->is_number_float()) {
        double d = it->get<double>();
        if (d != static_cast<double>(static_cast<std::int64_t>(d)))
            throw InvalidArgument(std::string("\"") + key + "\" must be an integer");
        v = static_cast<std::int64_t>(d);
    } else if (it->is_string()) {
        auto s = text::trim(it->get<std::string>());
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size())
            throw InvalidArgument(std::string("\"") + key + "\" is not a number");
    } else {
        throw InvalidArgument(std::string("\"") + key + "\" is not a number");
    }
    if (v < 0) {
        if (std::string_view(key) == "cites") throw InvalidArgument("negative citations");
        throw InvalidArgument(std::string("negative \"") + key + "\"");
    }
    return static_cast<std::uint64_t>(v);
}

// Runs `parse` over every non-blank line, collecting or throwing errors.
template <typename T, typename F>
ParseResult<T> parse_lines(std::istream& in, const ParseOptions& opts, F&& parse) {
    ParseResult<T> result;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        try {
            json obj = json::parse(line);
            if (!obj.is_object()) throw InvalidArgument("record is not an object");
            result.records.push_back(parse(obj));
        } catch (const std::exception& e) {
            std::string msg = e.what();
            if (dynamic_cast<const json::exception*>(&e)) msg = "malformed JSON: " + msg;
            if (opts.strict) throw ParseError(lineno, msg);
            result.errors.push_back({lineno, msg});
        }
    }
    return result;
}

}  // namespace

ParseResult<ResearcherProfile> parse_profiles(std::istream& in, const ParseOptions& opts) {
    std::unordered_set<std::string> seen;
    return parse_lines<ResearcherProfile>(in, opts, [&](const json& obj) {
        ResearcherProfile p;
        p.id = get_string(obj, "id", true);
        if (p.id.empty()) throw InvalidArgument("empty id");
        p.name = get_string(obj, "name", false);
        p.university_id = get_string(obj, "uni", true);
        p.total_citations = get_count(obj, "cites");
        p.affiliation = get_string(obj, "affiliation", false);
        p.raw_topics = get_string(obj, "raw_topics", false);
        if (opts.read_topics) {
            if (auto it = obj.find("topics"); it != obj.end()) {
                for (const auto& t : *it) {
                    auto id = TopicId::parse(t.get<std::string>());
                    if (!id) throw InvalidArgument("bad topic id " + t.dump());
                    if (std::find(p.topics.begin(), p.topics.end(), *id) == p.topics.end())
                        p.topics.push_back(*id);
                }
            }
        }
        if (!seen.insert(p.id).second) throw InvalidArgument("duplicate researcher id " + p.id);
        return p;
    });
}

ParseResult<University> load_universities(std::istream& in, const ParseOptions& opts) {
    std::unordered_set<std::string> seen;
    return parse_lines<University>(in, opts, [&](const json& obj) {
        University u;
        u.id = get_string(obj, "id", true);
        if (u.id.empty()) throw InvalidArgument("empty id");
        u.name = get_string(obj, "name", false);
        auto region = get_string(obj, "region", false);
        if (!region.empty()) {
            auto r = parse_region(region);
            if (!r) throw InvalidArgument("unknown region " + region);
            u.region = *r;
        }
        if (auto it = obj.find("staff"); it != obj.end() && !it->is_null())
            u.academic_staff = get_count(obj, "staff");
        if (!seen.insert(u.id).second) throw InvalidArgument("duplicate university id " + u.id);
        return u;
    });
}

void write_profiles(std::ostream& out, const std::vector<ResearcherProfile>& profiles,
                    bool with_topics) {
    for (const auto& p : profiles) {
        json obj = {{"id", p.id},
                    {"name", p.name},
                    {"uni", p.university_id},
                    {"cites", p.total_citations},
                    {"affiliation", p.affiliation},
                    {"raw_topics", p.raw_topics}};
        if (with_topics) {
            json topics = json::array();
            for (auto t : p.topics) topics.push_back(t.str());
            obj["topics"] = std::move(topics);
        }
        out << obj.dump() << '\n';
    }
}

void write_universities(std::ostream& out, const std::vector<University>& universities) {
    for (const auto& u : universities) {
        json obj = {{"id", u.id}, {"name", u.name}, {"region", to_string(u.region)}};
        if (u.academic_staff) obj["staff"] = *u.academic_staff;
        out << obj.dump() << '\n';
    }
}

Corpus make_corpus(std::vector<ResearcherProfile> profiles, std::vector<University> universities,
                   std::vector<RecordError>* errors, bool strict) {
    Corpus corpus;
    corpus.universities = std::move(universities);
    std::set<std::string, std::less<>> ids;
    for (const auto& u : corpus.universities) ids.insert(u.id);
    corpus.profiles.reserve(profiles.size());
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        if (!ids.contains(profiles[i].university_id)) {
            std::string msg = "profile " + profiles[i].id + " references unknown university " +
                              profiles[i].university_id;
            if (strict) throw InvalidArgument(msg);
            if (errors) errors->push_back({0, msg});
            continue;
        }
        corpus.profiles.push_back(std::move(profiles[i]));
    }
    return corpus;
}

Corpus load_corpus(const std::string& profiles_path, const std::string& universities_path,
                   const ParseOptions& opts, std::vector<RecordError>* errors) {
    std::ifstream pin(profiles_path);
    if (!pin) throw NotFoundError("cannot open profiles file " + profiles_path);
    std::ifstream uin(universities_path);
    if (!uin) throw NotFoundError("cannot open universities file " + universities_path);
    auto profiles = parse_profiles(pin, opts);
    auto universities = load_universities(uin, opts);
    if (errors) {
        for (auto& e : profiles.errors) errors->push_back({e.line, profiles_path + ": " + e.message});
        for (auto& e : universities.errors)
            errors->push_back({e.line, universities_path + ": " + e.message});
    }
    return make_corpus(std::move(profiles.records), std::move(universities.records), errors,
                       opts.strict);
}

std::vector<std::string> clean_topic_field(std::string_view raw) {
    std::string s = text::strip_tags(raw);
    for (char& c : s) {
        if (c == '/' || c == ';' || c == '.' || c == '#') c = ',';
    }
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t end = s.find(',', start);
        if (end == std::string::npos) end = s.size();
        auto piece = text::to_lower(text::trim(std::string_view(s).substr(start, end - start)));
        if (!piece.empty()) out.push_back(std::move(piece));
        start = end + 1;
    }
    return out;
}

// --- synthetic corpora -----------------------------------------------------

namespace {

struct FieldSeed {
    const char* department;
    int discipline;
    double citation_scale;
    double popularity;
    std::vector<const char*> topics;
};

const std::vector<FieldSeed>& field_seeds() {
    static const std::vector<FieldSeed> seeds = {
        {"Computer Science", 0, 1.0, 1.4,
         {"machine learning", "computer vision", "artificial intelligence", "data mining",
          "deep learning", "natural language processing", "robotics"}},
        {"Computer Science", 0, 1.0, 1.6,
         {"algorithms", "graph drawing", "information visualization", "human computer interaction",
          "computer graphics", "distributed systems", "computer networks", "software engineering",
          "databases", "computational geometry", "operating systems", "cloud computing",
          "network security"}},
        {"Biology", 1, 1.3, 1.5,
         {"ecology", "evolution", "genetics", "molecular biology", "cell biology",
          "bioinformatics", "neuroscience", "microbiology", "plant biology", "biochemistry",
          "immunology", "developmental biology", "population genetics", "conservation biology"}},
        {"Physics", 2, 1.8, 1.5,
         {"particle physics", "condensed matter physics", "quantum optics", "astrophysics",
          "cosmology", "high energy physics", "nuclear physics", "plasma physics",
          "quantum information", "statistical physics"}},
        {"Chemistry", 3, 1.4, 1.0,
         {"organic chemistry", "physical chemistry", "catalysis", "electrochemistry",
          "materials chemistry", "polymer chemistry", "supramolecular chemistry", "spectroscopy",
          "nanomaterials"}},
        {"Economics", 4, 0.6, 1.0,
         {"econometrics", "macroeconomics", "labor economics", "development economics",
          "public economics", "game theory", "finance", "economic growth"}},
        {"Mathematics", 5, 0.5, 1.0,
         {"number theory", "algebraic geometry", "probability theory", "combinatorics",
          "topology", "partial differential equations", "numerical analysis", "optimization",
          "statistics"}},
        {"Geology", 6, 0.8, 0.7,
         {"geochemistry", "tectonics", "paleontology", "hydrology", "sedimentology",
          "geophysics", "volcanology", "seismology"}},
        {"Medicine", 7, 1.6, 1.2,
         {"epidemiology", "oncology", "cardiology", "public health", "radiology", "neurology",
          "pediatrics", "clinical trials"}},
        {"Psychology", 8, 0.9, 0.8,
         {"cognitive psychology", "social psychology", "developmental psychology",
          "cognitive neuroscience", "psycholinguistics", "personality psychology"}},
        {"Electrical Engineering", 9, 0.9, 1.2,
         {"signal processing", "control theory", "power systems", "wireless communications",
          "image processing", "embedded systems", "vlsi design", "antennas"}},
    };
    return seeds;
}

std::string pseudo_word(Rng& rng) {
    static constexpr std::string_view onset = "bcdfgklmnprstvz";
    static constexpr std::string_view vowels = "aeiou";
    static constexpr std::string_view coda = "lmnrtdk";
    std::string w;
    std::size_t syllables = 2 + rng.below(2);
    for (std::size_t i = 0; i < syllables; ++i) {
        w += onset[rng.below(onset.size())];
        w += vowels[rng.below(vowels.size())];
    }
    w += coda[rng.below(coda.size())];
    return w;
}

std::string capitalize_words(std::string s) {
    bool start = true;
    for (char& c : s) {
        if (start && c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
        start = c == ' ';
    }
    return s;
}

// Picks an index from cumulative weights.
std::size_t pick(Rng& rng, const std::vector<double>& cumulative) {
    double x = rng.uniform() * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                                 cumulative.size() - 1);
}

}  // namespace

std::optional<SynthPreset> synth_preset(std::string_view name) {
    SynthPreset p;
    if (name == "small") {
        p.vocabulary = 300;
        p.profiles = 500;
        p.options.n_universities = 12;
        p.options.variant_fraction = 0.2;
        p.options.permuted_fraction = 0.1;
        p.options.conjunction_fraction = 0.1;
        return p;
    }
    if (name == "large") {
        p.vocabulary = 7700;
        p.profiles = 58000;
        p.options.n_universities = 200;
        p.options.variant_fraction = 0.1;
        p.options.permuted_fraction = 0.05;
        p.options.conjunction_fraction = 0.05;
        return p;
    }
    return std::nullopt;
}

std::string plural_variant(std::string_view topic) { return std::string(topic) + "s"; }

std::string permuted_variant(std::string_view topic) {
    auto tokens = text::split_whitespace(topic);
    if (tokens.size() > 1) std::rotate(tokens.begin(), tokens.begin() + 1, tokens.end());
    return text::join(tokens, " ");
}

Vocabulary make_vocabulary(std::uint64_t seed, std::size_t size) {
    Vocabulary vocab;
    const auto& seeds = field_seeds();
    for (const auto& f : seeds) vocab.fields.push_back({f.department, f.citation_scale, f.discipline});

    std::set<std::string> stems;
    std::set<std::string> fingerprints;
    std::vector<std::vector<std::string>> per_field(seeds.size());
    auto try_add = [&](std::size_t field, const std::string& name) {
        auto stem = stem_phrase(name);
        auto fp = fingerprint_key(name);
        // Reserve the stems of the injected variants too.
        auto pstem = stem_phrase(permuted_variant(name));
        if (stems.contains(stem) || fingerprints.contains(fp) || stems.contains(pstem)) return false;
        stems.insert(stem);
        stems.insert(pstem);
        fingerprints.insert(fp);
        per_field[field].push_back(name);
        return true;
    };

    std::size_t total = 0;
    for (std::size_t f = 0; f < seeds.size() && total < size; ++f)
        for (const char* t : seeds[f].topics)
            if (total < size && try_add(f, t)) ++total;

    std::vector<double> field_cum;
    double acc = 0;
    for (const auto& f : seeds) field_cum.push_back(acc += f.popularity);

    Rng rng(seed);
    std::size_t attempts = 0;
    while (total < size && attempts < size * 50) {
        ++attempts;
        std::size_t field = pick(rng, field_cum);
        std::size_t words = 1 + rng.below(3);
        std::vector<std::string> tokens;
        for (std::size_t i = 0; i < words; ++i) tokens.push_back(pseudo_word(rng));
        if (try_add(field, text::join(tokens, " "))) ++total;
    }

    // Zipf popularity within each field, realistic seeds first.
    for (std::size_t f = 0; f < per_field.size(); ++f) {
        for (std::size_t rank = 0; rank < per_field[f].size(); ++rank) {
            double w = seeds[f].popularity / std::pow(static_cast<double>(rank) + 1.0, 0.9);
            vocab.topics.push_back({per_field[f][rank], w, static_cast<int>(f)});
        }
    }
    return vocab;
}

Corpus synth_corpus(std::uint64_t seed, std::size_t n_profiles, const Vocabulary& vocabulary,
                    const SynthOptions& opts) {
    Corpus corpus;
    if (n_profiles == 0 || vocabulary.topics.empty()) return corpus;
    Rng rng(seed);

    const std::size_t n_fields = std::max<std::size_t>(1, vocabulary.fields.size());
    std::vector<std::vector<std::size_t>> members(n_fields);
    std::vector<std::vector<double>> cum(n_fields);
    std::vector<double> field_mass(n_fields, 0.0);
    for (std::size_t i = 0; i < vocabulary.topics.size(); ++i) {
        auto f = static_cast<std::size_t>(std::max(0, vocabulary.topics[i].field)) % n_fields;
        members[f].push_back(i);
        field_mass[f] += vocabulary.topics[i].weight;
        cum[f].push_back(field_mass[f]);
    }
    std::vector<double> field_cum;
    double acc = 0;
    for (std::size_t f = 0; f < n_fields; ++f) field_cum.push_back(acc += field_mass[f]);

    std::vector<std::vector<std::size_t>> siblings(n_fields);
    for (std::size_t a = 0; a < vocabulary.fields.size(); ++a)
        for (std::size_t b = 0; b < vocabulary.fields.size(); ++b)
            if (a != b && vocabulary.fields[a].discipline == vocabulary.fields[b].discipline) siblings[a].push_back(b);

    // Plural and permuted variants must stay in the same merge group as their base.
    std::vector<char> pluralizable(vocabulary.topics.size());
    std::vector<char> permutable(vocabulary.topics.size());
    for (std::size_t i = 0; i < vocabulary.topics.size(); ++i) {
        const auto& name = vocabulary.topics[i].name;
        pluralizable[i] = stem_phrase(plural_variant(name)) == stem_phrase(name);
        permutable[i] = name.find(' ') != std::string::npos;
    }

    std::size_t n_unis = std::max<std::size_t>(1, opts.n_universities);
    for (std::size_t u = 0; u < n_unis; ++u) {
        University uni;
        uni.id = "u" + std::to_string(u + 1);
        std::string stem = capitalize_words(pseudo_word(rng));
        uni.name = rng.chance(0.5) ? "University of " + stem : stem + " University";
        double x = rng.uniform();
        uni.region = x < opts.us_fraction                     ? Region::US
                     : x < opts.us_fraction + opts.eu_fraction ? Region::EU
                                                               : Region::OTHER;
        uni.academic_staff = 500 + rng.below(8000);
        corpus.universities.push_back(std::move(uni));
    }

    static constexpr double topic_count_weights[] = {0.08, 0.17, 0.30, 0.27, 0.18};
    std::vector<double> count_cum;
    acc = 0;
    for (double w : topic_count_weights) count_cum.push_back(acc += w);

    corpus.profiles.reserve(n_profiles);
    for (std::size_t i = 0; i < n_profiles; ++i) {
        ResearcherProfile p;
        p.id = "r" + std::to_string(i + 1);
        p.name = capitalize_words(pseudo_word(rng) + " " + pseudo_word(rng));
        const auto& uni = corpus.universities[rng.below(n_unis)];
        p.university_id = uni.id;

        std::size_t field = pick(rng, field_cum);
        std::size_t k = 1 + pick(rng, count_cum);
        std::vector<std::size_t> chosen;
        for (std::size_t tries = 0; chosen.size() < k && tries < 50; ++tries) {
            std::size_t f = field;
            if (!rng.chance(opts.field_affinity)) {
                f = siblings[field].empty() || !rng.chance(opts.discipline_affinity)
                        ? pick(rng, field_cum)
                        : siblings[field][rng.below(siblings[field].size())];
            }
            if (members[f].empty()) continue;
            std::size_t t = members[f][pick(rng, cum[f])];
            if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) chosen.push_back(t);
        }

        std::vector<std::string> forms;
        for (auto t : chosen) forms.push_back(vocabulary.topics[t].name);

        std::size_t pluralized = chosen.size();
        if (rng.chance(opts.variant_fraction)) {
            std::vector<std::size_t> candidates;
            for (std::size_t j = 0; j < chosen.size(); ++j)
                if (pluralizable[chosen[j]]) candidates.push_back(j);
            if (!candidates.empty()) {
                pluralized = candidates[rng.below(candidates.size())];
                forms[pluralized] = plural_variant(forms[pluralized]);
            }
        }
        // A plural that is also permuted shares neither stem nor fingerprint with its base.
        if (rng.chance(opts.permuted_fraction)) {
            std::vector<std::size_t> candidates;
            for (std::size_t j = 0; j < chosen.size(); ++j)
                if (permutable[chosen[j]] && j != pluralized) candidates.push_back(j);
            if (!candidates.empty()) {
                auto j = candidates[rng.below(candidates.size())];
                forms[j] = permuted_variant(forms[j]);
            }
        }

        for (auto& f : forms)
            if (rng.chance(0.25)) f = capitalize_words(f);

        std::string raw;
        for (std::size_t j = 0; j < forms.size(); ++j) {
            if (j > 0) {
                if (rng.chance(opts.conjunction_fraction)) {
                    raw += " and ";
                } else {
                    double x = rng.uniform();
                    raw += x < 0.8 ? ", " : x < 0.9 ? "; " : " / ";
                }
            }
            raw += forms[j];
        }
        p.raw_topics = std::move(raw);

        const auto& dept = vocabulary.fields.empty() ? std::string("Science")
                                                     : vocabulary.fields[field % vocabulary.fields.size()].department;
        double x = rng.uniform();
        if (x < 0.45) {
            p.affiliation = "Professor of " + dept + ", " + uni.name;
        } else if (x < 0.65) {
            p.affiliation = "Associate Professor of " + dept;
        } else if (x < 0.85) {
            p.affiliation = dept + ", " + uni.name;
        } else {
            p.affiliation = "PhD student, " + uni.name;
        }

        double scale = vocabulary.fields.empty() ? 1.0 : vocabulary.fields[field % vocabulary.fields.size()].citation_scale;
        double cites = std::exp(5.5 + 1.4 * rng.normal()) * scale;
        p.total_citations = static_cast<std::uint64_t>(std::min(cites, 5.0e6));
        corpus.profiles.push_back(std::move(p));
    }
    return corpus;
}

}  // namespace rtopmap
