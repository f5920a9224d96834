#pragma once

// Lexicon loading and matching: sentiment/polarity resources, bad words,
// politician mentions, gazetteers, plus embedding-neighbor expansion.
// Lexicons are immutable after load and safely shared across threads.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "trolldet/embeddings.hpp"
#include "trolldet/textproc.hpp"
#include "trolldet/utf8.hpp"
#include "trolldet/util.hpp"

namespace trolldet::lexicons {

struct LexiconEntry {
    std::optional<std::string> category;
    std::optional<double> weight;
};

enum class LexiconKind {
    words,     // lowercased, trimmed terms (default)
    emoticons  // trimmed only; emoticon symbols are case-sensitive
};

struct Lexicon {
    std::string name;
    std::map<std::string, LexiconEntry> entries;

    bool contains(const std::string& term) const { return entries.count(term) > 0; }
    std::size_t size() const { return entries.size(); }

    std::vector<std::string> terms() const {
        std::vector<std::string> out;
        out.reserve(entries.size());
        for (const auto& [t, e] : entries) out.push_back(t);
        return out;
    }
};

struct LexiconLoadResult {
    Lexicon lexicon;
    std::vector<std::string> warnings;
};

// File format: UTF-8 lines, `term[<TAB>category[<TAB>weight]]`, '#' comments.
// Terms are normalized per kind; duplicates collapse to the first occurrence
// with a warning.
inline LexiconLoadResult load_lexicon(const std::string& path,
                                      LexiconKind kind = LexiconKind::words,
                                      std::string name = "") {
    LexiconLoadResult res;
    res.lexicon.name = name.empty() ? path : std::move(name);
    std::size_t line_no = 0;
    for (const auto& raw : util::read_lines(path)) {
        ++line_no;
        auto t = util::trim(raw);
        if (t.empty() || t.front() == '#') continue;
        auto cols = util::split(std::string{t}, '\t');
        std::string term{util::trim(cols[0])};
        if (kind == LexiconKind::words) term = utf8::lower(term);
        if (term.empty()) continue;
        LexiconEntry entry;
        if (cols.size() > 1 && !util::trim(cols[1]).empty())
            entry.category = utf8::lower(std::string{util::trim(cols[1])});
        if (cols.size() > 2) {
            try {
                entry.weight = std::stod(std::string{util::trim(cols[2])});
            } catch (const std::exception&) {
                throw util::Error(path + ":" + std::to_string(line_no) +
                                  ": malformed weight column");
            }
        }
        auto [it, inserted] = res.lexicon.entries.emplace(term, std::move(entry));
        if (!inserted)
            res.warnings.push_back("duplicate term '" + term + "' at line " +
                                   std::to_string(line_no) + " ignored");
    }
    if (res.lexicon.entries.empty())
        throw util::Error("empty lexicon file: " + path);
    return res;
}

inline void save_lexicon(const Lexicon& lex, const std::string& path) {
    std::string out;
    for (const auto& [term, entry] : lex.entries) {
        out += term;
        if (entry.category) {
            out += '\t';
            out += *entry.category;
        }
        out += '\n';
    }
    util::write_file(path, out);
}

// Adds the k nearest in-vocabulary cosine neighbors of every base term; base
// terms missing from the vocabulary contribute nothing. Neighbors inherit
// the source term's category.
inline Lexicon expand_lexicon(const Lexicon& base,
                              const embeddings::EmbeddingTable& table,
                              std::size_t k) {
    if (k < 1) throw util::Error("expand_lexicon: k must be >= 1");
    if (table.vocab_size() == 0) throw util::Error("expand_lexicon: empty embeddings");
    Lexicon out = base;
    for (const auto& [term, entry] : base.entries) {
        if (!table.contains(term)) continue;
        for (const auto& [neighbor, sim] : embeddings::nearest(table, term, k)) {
            out.entries.emplace(neighbor, entry);  // no-op when already present
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Matching. Single-word entries match tokens exactly after normalization;
// multi-word entries match as consecutive token sequences. The scan is
// greedy longest-first and non-overlapping.

struct MatchCounts {
    int total = 0;
    std::map<std::string, int> per_category;
};

namespace detail {

struct PreparedLexicon {
    // term split into normalized words -> category
    std::vector<std::pair<std::vector<std::string>, const LexiconEntry*>> terms;
    std::size_t max_words = 0;
};

inline PreparedLexicon prepare(const Lexicon& lex) {
    PreparedLexicon p;
    for (const auto& [term, entry] : lex.entries) {
        std::vector<std::string> words;
        for (auto& w : util::split(term, ' '))
            if (!w.empty()) words.push_back(w);
        if (words.empty()) continue;
        p.max_words = std::max(p.max_words, words.size());
        p.terms.emplace_back(std::move(words), &entry);
    }
    // Longest sequences first so the greedy scan prefers them.
    std::sort(p.terms.begin(), p.terms.end(), [](const auto& a, const auto& b) {
        return a.first.size() != b.first.size() ? a.first.size() > b.first.size()
                                                : a.first < b.first;
    });
    return p;
}

}  // namespace detail

inline MatchCounts count_matches(const textproc::TokenList& tokens,
                                 const Lexicon& lexicon,
                                 bool match_stems = false,
                                 const textproc::StemRules* rules = nullptr) {
    std::vector<std::string> norm;
    norm.reserve(tokens.tokens.size());
    for (const auto& t : tokens.tokens) {
        std::string low = utf8::lower(t);
        norm.push_back(match_stems && rules ? textproc::stem(low, *rules)
                                            : std::move(low));
    }
    const auto prepared = detail::prepare(lexicon);
    MatchCounts counts;
    for (std::size_t i = 0; i < norm.size();) {
        std::size_t advance = 1;
        for (const auto& [words, entry] : prepared.terms) {
            if (words.size() > norm.size() - i) continue;
            bool ok = true;
            for (std::size_t j = 0; j < words.size(); ++j) {
                if (norm[i + j] != words[j]) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                counts.total++;
                if (entry->category) counts.per_category[*entry->category]++;
                advance = words.size();
                break;
            }
        }
        i += advance;
    }
    return counts;
}

// ---------------------------------------------------------------------------
// Sentiment resources: a polarity lexicon (positive/negative), an emotion
// lexicon (category = emotion name), and an opinion polarity lexicon.

struct SentimentResources {
    Lexicon polarity;  // categories restricted to positive/negative
    Lexicon emotions;
    Lexicon opinion;  // categories restricted to positive/negative

    void validate() const {
        for (const Lexicon* lex : {&polarity, &opinion}) {
            for (const auto& [term, entry] : lex->entries) {
                if (!entry.category ||
                    (*entry.category != "positive" && *entry.category != "negative"))
                    throw util::Error("polarity lexicon '" + lex->name +
                                      "' term '" + term +
                                      "' must be categorized positive|negative");
            }
        }
    }
};

struct PolarityScore {
    int positive = 0;
    int negative = 0;
    int net = 0;  // positive - negative
};

struct SentimentScores {
    PolarityScore polarity;
    PolarityScore opinion;
    std::map<std::string, int> emotion_counts;  // per emotion category
    std::size_t token_count = 0;

    double normalized(int count) const {
        return token_count == 0 ? 0.0 : double(count) / double(token_count);
    }
};

inline SentimentScores sentiment_scores(const textproc::TokenList& tokens,
                                        const SentimentResources& res) {
    SentimentScores out;
    out.token_count = tokens.tokens.size();
    auto polarity_of = [](const Lexicon& lex, const textproc::TokenList& toks) {
        PolarityScore s;
        const auto counts = count_matches(toks, lex);
        auto it = counts.per_category.find("positive");
        if (it != counts.per_category.end()) s.positive = it->second;
        it = counts.per_category.find("negative");
        if (it != counts.per_category.end()) s.negative = it->second;
        s.net = s.positive - s.negative;
        return s;
    };
    out.polarity = polarity_of(res.polarity, tokens);
    out.opinion = polarity_of(res.opinion, tokens);
    // Every category present in the lexicon gets a (possibly zero) count, so
    // the emitted feature set is fixed by the resource, not by the text.
    for (const auto& [term, entry] : res.emotions.entries)
        if (entry.category) out.emotion_counts[*entry.category] = 0;
    const auto counts = count_matches(tokens, res.emotions);
    for (const auto& [cat, n] : counts.per_category) out.emotion_counts[cat] = n;
    return out;
}

// Per-gazetteer match counts; the same surface form hits every gazetteer
// that lists it.
inline std::map<std::string, int> gazetteer_entities(
    const textproc::TokenList& tokens, const std::vector<Lexicon>& gazetteers) {
    std::map<std::string, int> out;
    for (const auto& gaz : gazetteers)
        out[gaz.name] = count_matches(tokens, gaz).total;
    return out;
}

// Emoticon counting against a loaded lexicon (kind = emoticons).
inline std::map<std::string, int> extract_emoticons(std::string_view text,
                                                    const Lexicon& lexicon) {
    std::vector<std::string> patterns;
    patterns.reserve(lexicon.entries.size());
    for (const auto& [term, entry] : lexicon.entries) patterns.push_back(term);
    return textproc::extract_emoticons(text, patterns);
}

}  // namespace trolldet::lexicons
