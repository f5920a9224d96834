#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "trolldet/textproc.hpp"

using namespace trolldet;
using textproc::AffixSide;

TEST_CASE("tokenize splits cyrillic text and records punctuation") {
    const auto tl = textproc::tokenize("Боко е тук.");
    CHECK(tl.tokens == std::vector<std::string>{"Боко", "е", "тук"});
    REQUIRE(tl.punct_runs.size() == 1);
    CHECK(tl.punct_runs[0] == ".");
}

TEST_CASE("tokenize of empty text yields nothing") {
    const auto tl = textproc::tokenize("");
    CHECK(tl.tokens.empty());
    CHECK(tl.offsets.empty());
    CHECK(tl.punct_runs.empty());
}

TEST_CASE("tokenize keeps hyphen and elongation runs separate") {
    const auto tl = textproc::tokenize("GERB-то!!!");
    CHECK(tl.tokens == std::vector<std::string>{"GERB", "то"});
    CHECK(tl.punct_runs == std::vector<std::string>{"-", "!!!"});
}

TEST_CASE("token offsets are byte spans into the original text") {
    const std::string text = "Боко е тук. GERB-то!!!  края";
    const auto tl = textproc::tokenize(text);
    REQUIRE(tl.offsets.size() == tl.tokens.size());
    for (std::size_t i = 0; i < tl.tokens.size(); ++i)
        CHECK(text.substr(tl.offsets[i].offset, tl.offsets[i].length) ==
              tl.tokens[i]);
}

TEST_CASE("tokenize treats nbsp and tabs as whitespace") {
    const auto tl = textproc::tokenize("a\tb\xC2\xA0g\nd");
    CHECK(tl.tokens == std::vector<std::string>{"a", "b", "g", "d"});
    CHECK(tl.punct_runs.empty());
}

TEST_CASE("stem returns the token unchanged when no rule matches") {
    textproc::StemRules rules;
    rules.rules = {{"ation", ""}};
    CHECK(textproc::stem("manipul", rules) == "manipul");
    CHECK(textproc::stem("", rules) == "");
}

TEST_CASE("stem strips a matching suffix when the stem stays long enough") {
    textproc::StemRules rules;
    rules.rules = {{"ation", ""}};
    rules.min_stem_length = 3;
    CHECK(textproc::stem("manipulation", rules) == "manipul");
}

TEST_CASE("stem prefers the longest applicable suffix") {
    textproc::StemRules rules;
    rules.rules = {{"ion", "X"}, {"ation", "Y"}};
    CHECK(textproc::stem("manipulation", rules) == "manipulY");
}

TEST_CASE("stem skips rules that would leave the stem too short") {
    textproc::StemRules rules;
    rules.rules = {{"es", ""}};
    rules.min_stem_length = 3;
    CHECK(textproc::stem("les", rules) == "les");    // stem would be 1 cp
    CHECK(textproc::stem("lines", rules) == "lin");  // 3 cps is enough
}

TEST_CASE("stem applies a rule only once") {
    textproc::StemRules rules;
    rules.rules = {{"s", ""}};
    rules.min_stem_length = 3;
    CHECK(textproc::stem("glasss", rules) == "glass");
}

TEST_CASE("stem counts codepoints, not bytes") {
    textproc::StemRules rules;
    rules.rules = {{"ите", ""}};
    rules.min_stem_length = 3;
    // "дните" is 10 bytes; a byte count would call the 2-codepoint stem long
    // enough and strip the suffix.
    CHECK(textproc::stem("дните", rules) == "дните");
    CHECK(textproc::stem("водите", rules) == "вод");
}

TEST_CASE("load_stem_rules parses tab-separated rewrite rules") {
    namespace fs = std::filesystem;
    const auto path = (fs::temp_directory_path() / "trolldet_stems.tsv").string();
    util::write_file(path, "# demo\nATION\tATE\nies\n\n");
    const auto rules = textproc::load_stem_rules(path);
    REQUIRE(rules.rules.size() == 2);
    CHECK(rules.rules.at("ation") == "ate");  // lowercased
    CHECK(rules.rules.at("ies") == "");       // missing column strips
    std::remove(path.c_str());
    util::write_file(path, "# only comments\n\n");
    CHECK_THROWS_AS(textproc::load_stem_rules(path), util::Error);
    std::remove(path.c_str());
}

TEST_CASE("shipped stem rules are idempotent on the demo corpus") {
    const std::string data = TROLLDET_DATA_DIR;
    const auto rules = textproc::load_stem_rules(data + "/stem_rules.tsv");
    std::string all_text;
    for (const auto& line : util::read_lines(data + "/comments.jsonl"))
        all_text += line + "\n";
    for (const auto& line : util::read_lines(data + "/sentences.txt"))
        all_text += line + "\n";
    const auto tl = textproc::tokenize(all_text);
    for (const auto& token : tl.tokens) {
        const auto once = textproc::stem(utf8::lower(token), rules);
        CHECK(textproc::stem(once, rules) == once);
    }
}

TEST_CASE("word_ngrams joins consecutive tokens") {
    const auto tl = textproc::tokenize("a b c");
    CHECK(textproc::word_ngrams(tl, 2) == std::vector<std::string>{"a b", "b c"});
    CHECK(textproc::word_ngrams(tl, 3) == std::vector<std::string>{"a b c"});
    const auto one = textproc::tokenize("a");
    CHECK(textproc::word_ngrams(one, 2).empty());
}

TEST_CASE("word_ngrams lowercases its output") {
    const auto tl = textproc::tokenize("Боко Е тук");
    CHECK(textproc::word_ngrams(tl, 2) ==
          std::vector<std::string>{"боко е", "е тук"});
}

TEST_CASE("char_ngrams slides per-token windows") {
    CHECK(textproc::char_ngrams("trol", 3) == std::vector<std::string>{"tro", "rol"});
    CHECK(textproc::char_ngrams("trol", 4) == std::vector<std::string>{"trol"});
    CHECK(textproc::char_ngrams("ab", 3).empty());
    CHECK(textproc::char_ngrams("Трол", 3) ==
          std::vector<std::string>{"тро", "рол"});
}

TEST_CASE("ngram counts follow the window arithmetic") {
    const std::vector<std::string> words = {"a", "ab", "abc", "abcd", "abcdefg"};
    for (const auto& w : words)
        for (int n = 1; n <= 5; ++n) {
            const auto grams = textproc::char_ngrams(w, n);
            const std::ptrdiff_t expected =
                std::max<std::ptrdiff_t>(0, std::ptrdiff_t(w.size()) - n + 1);
            CHECK(std::ptrdiff_t(grams.size()) == expected);
        }
    for (std::size_t len = 0; len <= 6; ++len) {
        std::string text;
        for (std::size_t i = 0; i < len; ++i) text += "w" + std::to_string(i) + " ";
        const auto tl = textproc::tokenize(text);
        for (int n = 2; n <= 4; ++n) {
            const auto grams = textproc::word_ngrams(tl, n);
            const std::ptrdiff_t expected =
                std::max<std::ptrdiff_t>(0, std::ptrdiff_t(len) - n + 1);
            CHECK(std::ptrdiff_t(grams.size()) == expected);
        }
    }
}

TEST_CASE("affix takes codepoint prefixes and suffixes") {
    CHECK(textproc::affix("manipulation", 4, AffixSide::prefix) == "mani");
    CHECK(textproc::affix("manipulation", 4, AffixSide::suffix) == "tion");
    CHECK(textproc::affix("ab", 3, AffixSide::prefix) == "ab");
    CHECK(textproc::affix("ab", 3, AffixSide::suffix) == "ab");
    CHECK(textproc::affix("Тролове", 3, AffixSide::prefix) == "тро");
    CHECK(textproc::affix("Тролове", 3, AffixSide::suffix) == "ове");
}

TEST_CASE("punct_stats of empty text is all zeros") {
    const auto s = textproc::punct_stats("");
    CHECK(s.excl_single == 0);
    CHECK(s.excl_elong == 0);
    CHECK(s.quest_single == 0);
    CHECK(s.quest_elong == 0);
    CHECK(s.dots_single == 0);
    CHECK(s.dots_elong == 0);
    CHECK(s.word_count == 0);
    CHECK(s.allcaps_count == 0);
}

TEST_CASE("punct_stats separates single and elongated runs") {
    const auto s = textproc::punct_stats("Чакай!!! Наистина ли?");
    CHECK(s.excl_elong == 1);
    CHECK(s.excl_single == 0);
    CHECK(s.quest_single == 1);
    CHECK(s.quest_elong == 0);
    CHECK(s.word_count == 3);
}

TEST_CASE("punct_stats counts dots and the ellipsis codepoint") {
    const auto s = textproc::punct_stats("Да. Може би... Или\xE2\x80\xA6");
    CHECK(s.dots_single == 1);
    CHECK(s.dots_elong == 2);  // "..." and U+2026
}

TEST_CASE("punct_stats counts all-caps tokens") {
    const auto s = textproc::punct_stats("ТОВА Е СКАНДАЛ");
    CHECK(s.allcaps_count == 2);  // "Е" is a single codepoint, so it is skipped
    CHECK(s.word_count == 3);
    const auto t = textproc::punct_stats("GERB прие 2015 зАкон ABC1");
    CHECK(t.allcaps_count == 2);  // GERB and ABC1; digits alone do not count
}

TEST_CASE("punct_stats adds up over concatenated texts") {
    const std::vector<std::string> parts = {
        "Чакай!!! Наистина ли?", "ТОВА Е СКАНДАЛ", "Може би...", "Да!", ""};
    textproc::PunctStats sum;
    std::string joined;
    for (const auto& p : parts) {
        const auto s = textproc::punct_stats(p);
        sum.excl_single += s.excl_single;
        sum.excl_elong += s.excl_elong;
        sum.quest_single += s.quest_single;
        sum.quest_elong += s.quest_elong;
        sum.dots_single += s.dots_single;
        sum.dots_elong += s.dots_elong;
        sum.word_count += s.word_count;
        sum.allcaps_count += s.allcaps_count;
        if (!joined.empty()) joined += ' ';
        joined += p;
    }
    const auto whole = textproc::punct_stats(joined);
    CHECK(whole.excl_single == sum.excl_single);
    CHECK(whole.excl_elong == sum.excl_elong);
    CHECK(whole.quest_single == sum.quest_single);
    CHECK(whole.quest_elong == sum.quest_elong);
    CHECK(whole.dots_single == sum.dots_single);
    CHECK(whole.dots_elong == sum.dots_elong);
    CHECK(whole.word_count == sum.word_count);
    CHECK(whole.allcaps_count == sum.allcaps_count);
}

TEST_CASE("extract_emoticons counts occurrences") {
    const std::vector<std::string> patterns = {":)", ":D"};
    const auto counts = textproc::extract_emoticons("ами :) да :) така", patterns);
    REQUIRE(counts.size() == 1);
    CHECK(counts.at(":)") == 2);
    CHECK(textproc::extract_emoticons("нищо весело", patterns).empty());
}

TEST_CASE("extract_emoticons prefers the longest pattern") {
    const std::vector<std::string> patterns = {":)", ":))"};
    const auto counts = textproc::extract_emoticons("ехо :))", patterns);
    REQUIRE(counts.size() == 1);
    CHECK(counts.at(":))") == 1);
}

TEST_CASE("extract_emoticons resumes after a match") {
    const std::vector<std::string> patterns = {":)"};
    const auto counts = textproc::extract_emoticons(":):)", patterns);
    CHECK(counts.at(":)") == 2);
}
