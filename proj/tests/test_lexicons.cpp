#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "trolldet/embeddings.hpp"
#include "trolldet/lexicons.hpp"
#include "trolldet/textproc.hpp"

using namespace trolldet;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content)
        : path((std::filesystem::temp_directory_path() / ("trolldet_lex_" + name))
                   .string()) {
        util::write_file(path, content);
    }
    ~TempFile() { std::remove(path.c_str()); }
};

lexicons::Lexicon words(const std::string& name,
                        const std::vector<std::pair<std::string, std::string>>& ts) {
    lexicons::Lexicon lex;
    lex.name = name;
    for (const auto& [term, cat] : ts) {
        lexicons::LexiconEntry e;
        if (!cat.empty()) e.category = cat;
        lex.entries.emplace(term, e);
    }
    return lex;
}

}  // namespace

TEST_CASE("load_lexicon lowercases and collapses case duplicates") {
    TempFile f("case.txt", "трол\nТрол\n");
    const auto res = lexicons::load_lexicon(f.path);
    CHECK(res.lexicon.size() == 1);
    CHECK(res.lexicon.contains("трол"));
    REQUIRE(res.warnings.size() == 1);
    CHECK(res.warnings[0].find("line 2") != std::string::npos);
}

TEST_CASE("load_lexicon never exceeds the line count") {
    std::string content;
    for (int i = 0; i < 458; ++i)
        content += "term" + std::to_string(i % 450) + "\n";  // 8 duplicates
    TempFile f("many.txt", content);
    const auto res = lexicons::load_lexicon(f.path);
    CHECK(res.lexicon.size() == 450);
    CHECK(res.lexicon.size() <= 458);
    CHECK(res.warnings.size() == 8);
}

TEST_CASE("load_lexicon reports a missing file") {
    CHECK_THROWS_AS(lexicons::load_lexicon("/nonexistent/lexicon.txt"),
                    util::Error);
}

TEST_CASE("load_lexicon rejects files with no terms") {
    TempFile f("empty.txt", "# header only\n\n");
    CHECK_THROWS_AS(lexicons::load_lexicon(f.path), util::Error);
}

TEST_CASE("load_lexicon parses categories and weights") {
    TempFile f("cats.txt", "добър\tPositive\t0.9\nлош\tnegative\n");
    const auto res = lexicons::load_lexicon(f.path);
    CHECK(res.lexicon.entries.at("добър").category == "positive");
    CHECK(res.lexicon.entries.at("добър").weight == 0.9);
    CHECK(res.lexicon.entries.at("лош").category == "negative");
    CHECK_FALSE(res.lexicon.entries.at("лош").weight.has_value());
}

TEST_CASE("load_lexicon rejects a malformed weight with its line") {
    TempFile f("badweight.txt", "добър\tpositive\t0.9\nлош\tnegative\txx\n");
    CHECK_THROWS_WITH(lexicons::load_lexicon(f.path),
                      Catch::Matchers::ContainsSubstring(":2"));
}

TEST_CASE("duplicate terms keep the first entry") {
    TempFile f("dup.txt", "term\talpha\nterm\tbeta\n");
    const auto res = lexicons::load_lexicon(f.path);
    CHECK(res.lexicon.entries.at("term").category == "alpha");
    CHECK(res.warnings.size() == 1);
}

TEST_CASE("emoticon lexicons stay case-sensitive") {
    TempFile f("emo.txt", ":D\n:d\n:)\n");
    const auto res =
        lexicons::load_lexicon(f.path, lexicons::LexiconKind::emoticons);
    CHECK(res.lexicon.size() == 3);
    CHECK(res.lexicon.contains(":D"));
    CHECK(res.lexicon.contains(":d"));
}

TEST_CASE("save_lexicon round-trips terms and categories") {
    const auto lex = words("w", {{"добър", "positive"}, {"трол", ""}});
    const auto path =
        (std::filesystem::temp_directory_path() / "trolldet_lex_save.txt").string();
    lexicons::save_lexicon(lex, path);
    const auto back = lexicons::load_lexicon(path);
    std::remove(path.c_str());
    CHECK(back.lexicon.size() == 2);
    CHECK(back.lexicon.entries.at("добър").category == "positive");
    CHECK_FALSE(back.lexicon.entries.at("трол").category.has_value());
}

namespace {

embeddings::EmbeddingTable neighbor_table() {
    // "трол" sits next to three paraphrases; "далечен" points the other way.
    embeddings::EmbeddingTable table(2);
    table.put("трол", {1.0, 0.0});
    table.put("тролче", {0.99, 0.1});
    table.put("мурзилка", {0.98, 0.15});
    table.put("платен", {0.97, 0.2});
    table.put("далечен", {-1.0, 0.0});
    table.put("среден", {0.5, 0.85});
    return table;
}

}  // namespace

TEST_CASE("expand_lexicon adds nearest neighbors with inherited category") {
    const auto base = words("accuse", {{"трол", "insult"}});
    const auto table = neighbor_table();
    const auto expanded = lexicons::expand_lexicon(base, table, 3);
    CHECK(expanded.size() == 4);
    CHECK(expanded.contains("трол"));
    CHECK(expanded.contains("тролче"));
    CHECK(expanded.contains("мурзилка"));
    CHECK(expanded.contains("платен"));
    CHECK(expanded.entries.at("тролче").category == "insult");
}

TEST_CASE("expand_lexicon skips out-of-vocabulary base terms") {
    const auto base = words("accuse", {{"непознат", ""}});
    const auto expanded = lexicons::expand_lexicon(base, neighbor_table(), 3);
    CHECK(expanded.size() == 1);
    CHECK(expanded.contains("непознат"));
}

TEST_CASE("expand_lexicon does not duplicate terms already in the base") {
    const auto base = words("accuse", {{"трол", "insult"}, {"тролче", "original"}});
    const auto expanded = lexicons::expand_lexicon(base, neighbor_table(), 3);
    CHECK(expanded.entries.at("тролче").category == "original");
}

TEST_CASE("expand_lexicon output is a bounded superset of the base") {
    const auto table = neighbor_table();
    const auto base = words("accuse", {{"трол", ""}, {"среден", ""}, {"oov", ""}});
    for (std::size_t k = 1; k <= 4; ++k) {
        const auto expanded = lexicons::expand_lexicon(base, table, k);
        for (const auto& term : base.terms()) CHECK(expanded.contains(term));
        CHECK(expanded.size() <= base.size() * (k + 1));
        CHECK(expanded.size() >= base.size());
    }
    CHECK_THROWS_AS(lexicons::expand_lexicon(base, table, 0), util::Error);
    embeddings::EmbeddingTable empty(2);
    CHECK_THROWS_AS(lexicons::expand_lexicon(base, empty, 2), util::Error);
}

TEST_CASE("count_matches counts single-word hits") {
    const auto lex = words("bad", {{"глупак", ""}, {"идиот", ""}});
    const auto tl = textproc::tokenize("Ти си глупак и пак глупак.");
    CHECK(lexicons::count_matches(tl, lex).total == 2);
    const auto none = textproc::tokenize("Мирен разговор без обиди.");
    CHECK(lexicons::count_matches(none, lex).total == 0);
}

TEST_CASE("count_matches is case-insensitive via normalization") {
    const auto lex = words("bad", {{"глупак", ""}});
    const auto tl = textproc::tokenize("ГЛУПАК!");
    CHECK(lexicons::count_matches(tl, lex).total == 1);
}

TEST_CASE("count_matches finds multi-word entries as token sequences") {
    const auto lex = words("ment", {{"бойко борисов", ""}, {"борисов", ""}});
    const auto tl = textproc::tokenize("Вчера Бойко Борисов говори дълго.");
    // greedy longest-first: the two-token name wins, no extra single hit
    CHECK(lexicons::count_matches(tl, lex).total == 1);
    const auto single = textproc::tokenize("Борисов говори.");
    CHECK(lexicons::count_matches(single, lex).total == 1);
    const auto split = textproc::tokenize("Бойко спря, Борисов продължи.");
    CHECK(lexicons::count_matches(split, lex).total == 1);  // only "борисов"
}

TEST_CASE("count_matches can match stemmed tokens") {
    textproc::StemRules rules;
    rules.rules = {{"ове", ""}};
    const auto lex = words("bad", {{"трол", ""}});
    const auto tl = textproc::tokenize("тролове навсякъде");
    CHECK(lexicons::count_matches(tl, lex).total == 0);
    CHECK(lexicons::count_matches(tl, lex, true, &rules).total == 1);
}

TEST_CASE("count_matches adds up over concatenated texts") {
    const auto lex = words("bad", {{"глупак", ""}, {"идиот", ""}, {"прост", ""}});
    const std::vector<std::string> texts = {
        "глупак тук", "нищо", "идиот и глупак", "прост прост"};
    int sum = 0;
    std::string joined;
    for (const auto& t : texts) {
        sum += lexicons::count_matches(textproc::tokenize(t), lex).total;
        if (!joined.empty()) joined += ' ';
        joined += t;
    }
    CHECK(lexicons::count_matches(textproc::tokenize(joined), lex).total == sum);
}

TEST_CASE("count_matches tracks per-category totals") {
    const auto lex = words("pol", {{"добър", "positive"}, {"лош", "negative"},
                                   {"хубав", "positive"}});
    const auto tl = textproc::tokenize("добър хубав лош добър");
    const auto counts = lexicons::count_matches(tl, lex);
    CHECK(counts.total == 4);
    CHECK(counts.per_category.at("positive") == 3);
    CHECK(counts.per_category.at("negative") == 1);
}

namespace {

lexicons::SentimentResources demo_sentiment() {
    lexicons::SentimentResources res;
    res.polarity = words("polarity", {{"добър", "positive"},
                                      {"хубав", "positive"},
                                      {"лош", "negative"}});
    res.emotions = words("emotions", {{"радост", "joy"},
                                      {"гняв", "anger"},
                                      {"страх", "fear"}});
    res.opinion = words("opinion", {{"съгласен", "positive"},
                                    {"лъже", "negative"}});
    return res;
}

}  // namespace

TEST_CASE("sentiment_scores counts polarity hits") {
    const auto res = demo_sentiment();
    const auto tl = textproc::tokenize("добър хубав лош ден");
    const auto s = lexicons::sentiment_scores(tl, res);
    CHECK(s.polarity.positive == 2);
    CHECK(s.polarity.negative == 1);
    CHECK(s.polarity.net == 1);
    CHECK(s.token_count == 4);
    CHECK(s.normalized(s.polarity.positive) == Catch::Approx(0.5));
}

TEST_CASE("sentiment_scores of an empty token list is all zeros") {
    const auto res = demo_sentiment();
    const auto s = lexicons::sentiment_scores(textproc::tokenize(""), res);
    CHECK(s.polarity.positive == 0);
    CHECK(s.polarity.negative == 0);
    CHECK(s.polarity.net == 0);
    CHECK(s.opinion.positive == 0);
    CHECK(s.token_count == 0);
    CHECK(s.normalized(0) == 0.0);
    for (const auto& [cat, n] : s.emotion_counts) CHECK(n == 0);
}

TEST_CASE("sentiment_scores zero-fills every emotion category") {
    const auto res = demo_sentiment();
    const auto s = lexicons::sentiment_scores(textproc::tokenize("гняв тук"), res);
    REQUIRE(s.emotion_counts.size() == 3);
    CHECK(s.emotion_counts.at("anger") == 1);
    CHECK(s.emotion_counts.at("joy") == 0);
    CHECK(s.emotion_counts.at("fear") == 0);
}

TEST_CASE("a term listed in polarity and emotions scores in both") {
    auto res = demo_sentiment();
    res.polarity.entries.emplace(
        "радост", lexicons::LexiconEntry{std::optional<std::string>("positive"),
                                         std::nullopt});
    const auto s = lexicons::sentiment_scores(textproc::tokenize("радост"), res);
    CHECK(s.polarity.positive == 1);
    CHECK(s.emotion_counts.at("joy") == 1);
}

TEST_CASE("sentiment validate rejects uncategorized polarity terms") {
    auto res = demo_sentiment();
    CHECK_NOTHROW(res.validate());
    res.polarity.entries.emplace("нещо", lexicons::LexiconEntry{});
    CHECK_THROWS_AS(res.validate(), util::Error);
    auto res2 = demo_sentiment();
    res2.opinion.entries.emplace(
        "друго", lexicons::LexiconEntry{std::optional<std::string>("joy"),
                                        std::nullopt});
    CHECK_THROWS_AS(res2.validate(), util::Error);
}

TEST_CASE("gazetteer_entities reports one count per gazetteer") {
    const std::vector<lexicons::Lexicon> gaz = {
        words("country", {{"българия", ""}, {"германия", ""}}),
        words("location", {{"софия", ""}}),
    };
    auto counts =
        lexicons::gazetteer_entities(textproc::tokenize("в България е така"), gaz);
    REQUIRE(counts.size() == 2);
    CHECK(counts.at("country") == 1);
    CHECK(counts.at("location") == 0);

    counts = lexicons::gazetteer_entities(textproc::tokenize("нищо общо"), gaz);
    CHECK(counts.at("country") == 0);
    CHECK(counts.at("location") == 0);
}

TEST_CASE("a surface form shared by two gazetteers hits both") {
    const std::vector<lexicons::Lexicon> gaz = {
        words("person_name", {{"варна", ""}}),  // contrived overlap
        words("location", {{"варна", ""}}),
    };
    const auto counts =
        lexicons::gazetteer_entities(textproc::tokenize("пристигам във Варна"), gaz);
    CHECK(counts.at("person_name") == 1);
    CHECK(counts.at("location") == 1);
}

TEST_CASE("lexicon-driven emoticon extraction uses the pattern set") {
    lexicons::Lexicon lex;
    lex.name = "emoticons";
    lex.entries.emplace(":)", lexicons::LexiconEntry{});
    lex.entries.emplace(":))", lexicons::LexiconEntry{});
    const auto counts = lexicons::extract_emoticons("ето :)) и :)", lex);
    CHECK(counts.at(":))") == 1);
    CHECK(counts.at(":)") == 1);
}
