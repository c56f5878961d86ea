#include <doctest.h>

#include <fstream>
#include <sstream>

#include "rtopmap/normalize.hpp"
#include "rtopmap/text.hpp"

using namespace rtopmap;

TEST_SUITE("text") {

TEST_CASE("stemmer matches golden vocabulary") {
    // Generated with the reference Snowball English stemmer.
    std::ifstream in(RTOPMAP_TEST_DATA "/porter2_golden.txt");
    REQUIRE(in);
    std::string word, expected;
    std::size_t n = 0, bad = 0;
    while (in >> word >> expected) {
        ++n;
        auto got = text::stem_word(word);
        if (got != expected) {
            ++bad;
            MESSAGE(word << ": expected " << expected << ", got " << got);
        }
    }
    CHECK(n > 2000);
    CHECK(bad == 0);
}

TEST_CASE("stems of the documented examples") {
    CHECK(text::stem_word("algorithms") == "algorithm");
    CHECK(text::stem_word("algorithm") == "algorithm");
    CHECK(text::stem_word("algorithmics") == "algorithm");
    CHECK(text::stem_word("applied") == "appli");
    CHECK(text::stem_word("applications") == "applic");
    CHECK(stem_phrase("graph drawing") == "graph draw");
    CHECK(stem_phrase("algorithms") == "algorithm");
}

TEST_CASE("case folding and trimming") {
    CHECK(text::to_lower("Data MINING") == "data mining");
    CHECK(text::to_lower("Caf\xc3\x89") == "caf\xc3\x89");
    CHECK(text::trim("  \t graph drawing\r\n") == "graph drawing");
    CHECK(text::trim("") == "");
    CHECK(text::trim(" \x01 ") == "");
}

TEST_CASE("tag stripping") {
    CHECK(text::strip_tags("<b>graph drawing</b>, networks") == "graph drawing, networks");
    CHECK(text::strip_tags("a <br/>b") == "a b");
    CHECK(text::strip_tags("no tags") == "no tags");
}

TEST_CASE("whitespace split and join") {
    auto parts = text::split_whitespace("  deep \t learning\nmodels ");
    CHECK(parts == std::vector<std::string>{"deep", "learning", "models"});
    CHECK(text::join(parts, " ") == "deep learning models");
    CHECK(text::split_whitespace("   ").empty());
}

TEST_CASE("stop words") {
    for (const char* w : {"the", "and", "of", "for", "with", "is"}) CHECK(text::is_stop_word(w));
    for (const char* w : {"learning", "graph", "vision"}) CHECK_FALSE(text::is_stop_word(w));
}

TEST_CASE("whole-word containment") {
    CHECK(text::contains_word("Professor of Chemistry and Chemical Biology", "biology"));
    CHECK(text::contains_word("BIOLOGY dept", "Biology"));
    CHECK_FALSE(text::contains_word("Senior biologist", "biology"));
    CHECK_FALSE(text::contains_word("particle physics", "art"));
    CHECK(text::contains_word("Computer Science, MIT", "computer science"));
    CHECK_FALSE(text::contains_word("", "biology"));
}

}
