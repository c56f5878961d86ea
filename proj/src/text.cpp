#include "rtopmap/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <sstream>

namespace rtopmap::text {

// Defined in the generated stopwords.cpp.
extern const char* const kStopWordData;

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c);
    });
    return out;
}

namespace {

bool is_blank(unsigned char c) { return c <= 0x20 || c == 0x7f; }

}  // namespace

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && is_blank(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && is_blank(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string strip_tags(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool in_tag = false;
    for (char c : s) {
        if (in_tag) {
            if (c == '>') in_tag = false;
        } else if (c == '<') {
            in_tag = true;
        } else {
            out.push_back(c);
        }
    }
    return out;
}

std::vector<std::string> split_whitespace(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_blank(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !is_blank(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.emplace_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Porter2 stemmer. Operates on lowercase ASCII; 'Y' marks a consonant y.
// ---------------------------------------------------------------------------
namespace {

class Porter2 {
public:
    explicit Porter2(std::string word) : w_(std::move(word)) {}

    std::string run();

private:
    std::string w_;
    std::size_t r1_ = 0;
    std::size_t r2_ = 0;

    static bool vowel(char c) {
        return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
    }
    static bool is_double(std::string_view s) {
        static constexpr std::array<std::string_view, 9> d{"bb", "dd", "ff", "gg", "mm",
                                                           "nn", "pp", "rr", "tt"};
        return std::find(d.begin(), d.end(), s) != d.end();
    }
    static bool li_ending(char c) {
        return c == 'c' || c == 'd' || c == 'e' || c == 'g' || c == 'h' || c == 'k' ||
               c == 'm' || c == 'n' || c == 'r' || c == 't';
    }

    bool ends(std::string_view suf) const {
        return w_.size() >= suf.size() && std::string_view(w_).substr(w_.size() - suf.size()) == suf;
    }
    std::size_t stem_len(std::string_view suf) const { return w_.size() - suf.size(); }
    bool in_r1(std::string_view suf) const { return stem_len(suf) >= r1_; }
    bool in_r2(std::string_view suf) const { return stem_len(suf) >= r2_; }
    void replace(std::string_view suf, std::string_view rep) {
        w_.replace(w_.size() - suf.size(), suf.size(), rep);
    }

    std::size_t region_after(std::size_t start) const {
        for (std::size_t i = start + 1; i < w_.size(); ++i) {
            if (!vowel(w_[i]) && vowel(w_[i - 1])) return i + 1;
        }
        return w_.size();
    }

    // Short syllable ending at position `end` (exclusive).
    bool short_syllable_at(std::size_t end) const {
        if (end == 2) return vowel(w_[0]) && !vowel(w_[1]);
        if (end < 3) return false;
        char a = w_[end - 3], b = w_[end - 2], c = w_[end - 1];
        return !vowel(a) && vowel(b) && !vowel(c) && c != 'w' && c != 'x' && c != 'Y';
    }
    bool is_short_word() const { return r1_ >= w_.size() && short_syllable_at(w_.size()); }

    bool has_vowel(std::size_t upto) const {
        for (std::size_t i = 0; i < upto; ++i)
            if (vowel(w_[i])) return true;
        return false;
    }

    // Longest suffix from the list that the word ends with, or empty.
    template <std::size_t N>
    std::string_view longest(const std::array<std::string_view, N>& sufs) const {
        std::string_view best;
        for (auto s : sufs)
            if (s.size() > best.size() && ends(s)) best = s;
        return best;
    }

    void step0();
    void step1a();
    void step1b();
    void step1c();
    void step2();
    void step3();
    void step4();
    void step5();
};

std::string Porter2::run() {
    if (w_.size() <= 2) return w_;
    if (w_.front() == '\'') w_.erase(0, 1);

    static const std::array<std::pair<std::string_view, std::string_view>, 18> exceptions{{
        {"skis", "ski"},    {"skies", "sky"},   {"dying", "die"},   {"lying", "lie"},
        {"tying", "tie"},   {"idly", "idl"},    {"gently", "gentl"}, {"ugly", "ugli"},
        {"early", "earli"}, {"only", "onli"},   {"singly", "singl"}, {"sky", "sky"},
        {"news", "news"},   {"howe", "howe"},   {"atlas", "atlas"}, {"cosmos", "cosmos"},
        {"bias", "bias"},   {"andes", "andes"},
    }};
    for (auto& [from, to] : exceptions)
        if (w_ == from) return std::string(to);

    for (std::size_t i = 0; i < w_.size(); ++i) {
        if (w_[i] == 'y' && (i == 0 || vowel(w_[i - 1]))) w_[i] = 'Y';
    }

    if (w_.starts_with("gener") || w_.starts_with("arsen")) {
        r1_ = 5;
    } else if (w_.starts_with("commun")) {
        r1_ = 6;
    } else {
        r1_ = region_after(0);
    }
    r2_ = r1_ < w_.size() ? region_after(r1_) : w_.size();

    step0();
    step1a();
    static constexpr std::array<std::string_view, 8> exceptions2{
        "inning", "outing", "canning", "herring", "earring", "proceed", "exceed", "succeed"};
    if (std::find(exceptions2.begin(), exceptions2.end(), w_) == exceptions2.end()) {
        step1b();
        step1c();
        step2();
        step3();
        step4();
        step5();
    }
    std::replace(w_.begin(), w_.end(), 'Y', 'y');
    return w_;
}

void Porter2::step0() {
    static constexpr std::array<std::string_view, 3> s{"'s'", "'s", "'"};
    auto suf = longest(s);
    if (!suf.empty()) replace(suf, "");
}

void Porter2::step1a() {
    if (ends("sses")) {
        replace("sses", "ss");
    } else if (ends("ied") || ends("ies")) {
        replace("ies", w_.size() > 4 ? "i" : "ie");
    } else if (ends("us") || ends("ss")) {
        // unchanged
    } else if (ends("s")) {
        // delete if the part before the s contains a vowel not directly before it
        if (w_.size() >= 2 && has_vowel(w_.size() - 2)) w_.pop_back();
    }
}

void Porter2::step1b() {
    static constexpr std::array<std::string_view, 6> s{"eed", "eedly", "ed", "edly", "ing", "ingly"};
    auto suf = longest(s);
    if (suf.empty()) return;
    if (suf == "eed" || suf == "eedly") {
        if (in_r1(suf)) replace(suf, "ee");
        return;
    }
    if (!has_vowel(stem_len(suf))) return;
    replace(suf, "");
    if (ends("at") || ends("bl") || ends("iz")) {
        w_ += 'e';
    } else if (w_.size() >= 2 && is_double(std::string_view(w_).substr(w_.size() - 2))) {
        w_.pop_back();
    } else if (is_short_word()) {
        w_ += 'e';
    }
}

void Porter2::step1c() {
    if (w_.size() > 2 && (w_.back() == 'y' || w_.back() == 'Y') && !vowel(w_[w_.size() - 2])) {
        w_.back() = 'i';
    }
}

void Porter2::step2() {
    static constexpr std::array<std::string_view, 24> s{
        "tional", "enci",  "anci",    "abli",  "entli",  "izer",    "ization", "ational",
        "ation",  "ator",  "alism",   "aliti", "alli",   "fulness", "ousli",   "ousness",
        "iveness", "iviti", "biliti", "bli",   "ogi",    "fulli",   "lessli",  "li"};
    auto suf = longest(s);
    if (suf.empty() || !in_r1(suf)) return;
    if (suf == "tional") replace(suf, "tion");
    else if (suf == "enci") replace(suf, "ence");
    else if (suf == "anci") replace(suf, "ance");
    else if (suf == "abli") replace(suf, "able");
    else if (suf == "entli") replace(suf, "ent");
    else if (suf == "izer" || suf == "ization") replace(suf, "ize");
    else if (suf == "ational" || suf == "ation" || suf == "ator") replace(suf, "ate");
    else if (suf == "alism" || suf == "aliti" || suf == "alli") replace(suf, "al");
    else if (suf == "fulness") replace(suf, "ful");
    else if (suf == "ousli" || suf == "ousness") replace(suf, "ous");
    else if (suf == "iveness" || suf == "iviti") replace(suf, "ive");
    else if (suf == "biliti" || suf == "bli") replace(suf, "ble");
    else if (suf == "ogi") {
        if (stem_len(suf) > 0 && w_[stem_len(suf) - 1] == 'l') replace(suf, "og");
    } else if (suf == "fulli") replace(suf, "ful");
    else if (suf == "lessli") replace(suf, "less");
    else if (suf == "li") {
        if (stem_len(suf) > 0 && li_ending(w_[stem_len(suf) - 1])) replace(suf, "");
    }
}

void Porter2::step3() {
    static constexpr std::array<std::string_view, 9> s{
        "tional", "ational", "alize", "icate", "iciti", "ative", "ical", "ful", "ness"};
    auto suf = longest(s);
    if (suf.empty() || !in_r1(suf)) return;
    if (suf == "tional") replace(suf, "tion");
    else if (suf == "ational") replace(suf, "ate");
    else if (suf == "alize") replace(suf, "al");
    else if (suf == "icate" || suf == "iciti" || suf == "ical") replace(suf, "ic");
    else if (suf == "ful" || suf == "ness") replace(suf, "");
    else if (suf == "ative") {
        if (in_r2(suf)) replace(suf, "");
    }
}

void Porter2::step4() {
    static constexpr std::array<std::string_view, 18> s{
        "al",  "ance", "ence", "er",  "ic",  "able", "ible", "ant", "ement",
        "ment", "ent", "ism",  "ate", "iti", "ous",  "ive",  "ize", "ion"};
    auto suf = longest(s);
    if (suf.empty() || !in_r2(suf)) return;
    if (suf == "ion") {
        std::size_t n = stem_len(suf);
        if (n > 0 && (w_[n - 1] == 's' || w_[n - 1] == 't')) replace(suf, "");
    } else {
        replace(suf, "");
    }
}

void Porter2::step5() {
    if (ends("e")) {
        if (in_r2("e") || (in_r1("e") && !short_syllable_at(w_.size() - 1))) w_.pop_back();
    } else if (ends("l")) {
        if (in_r2("l") && w_.size() >= 2 && w_[w_.size() - 2] == 'l') w_.pop_back();
    }
}

}  // namespace

std::string stem_word(std::string_view word) { return Porter2(std::string(word)).run(); }

bool is_stop_word(std::string_view word) {
    static const std::set<std::string, std::less<>> words = [] {
        std::set<std::string, std::less<>> out;
        std::istringstream in(kStopWordData);
        std::string line;
        while (std::getline(in, line)) {
            line = trim(line);
            if (!line.empty() && line.front() != '#') out.insert(line);
        }
        return out;
    }();
    return words.find(word) != words.end();
}

bool contains_word(std::string_view haystack, std::string_view word) {
    if (word.empty()) return false;
    std::string h = to_lower(haystack);
    std::string w = to_lower(word);
    auto is_word_char = [](char c) {
        auto u = static_cast<unsigned char>(c);
        return std::isalnum(u) || u >= 0x80;
    };
    std::size_t pos = 0;
    while ((pos = h.find(w, pos)) != std::string::npos) {
        bool left = pos == 0 || !is_word_char(h[pos - 1]);
        std::size_t end = pos + w.size();
        bool right = end == h.size() || !is_word_char(h[end]);
        if (left && right) return true;
        ++pos;
    }
    return false;
}

}  // namespace rtopmap::text
