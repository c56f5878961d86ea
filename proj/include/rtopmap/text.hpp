#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rtopmap::text {

// ASCII-only case folding; bytes >= 0x80 pass through untouched.
std::string to_lower(std::string_view s);

// Strips leading/trailing whitespace and control characters.
std::string trim(std::string_view s);

// Removes anything between '<' and the next '>' (markup tags).
std::string strip_tags(std::string_view s);

std::vector<std::string> split_whitespace(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

// English (Porter2 / Snowball) stemmer for a single lowercase word.
std::string stem_word(std::string_view word);

// Built-in English stop-word list.
bool is_stop_word(std::string_view word);

// Whole-word, case-insensitive containment of `word` in `haystack`.
bool contains_word(std::string_view haystack, std::string_view word);

}  // namespace rtopmap::text
