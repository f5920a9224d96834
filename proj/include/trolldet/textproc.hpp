#pragma once

// Surface-form text primitives: tokenization, suffix-rewrite stemming,
// word/char n-grams, affixes, punctuation statistics, and emoticon matching.
// Everything here is a pure function of its inputs.

#include <algorithm>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "trolldet/utf8.hpp"
#include "trolldet/util.hpp"

namespace trolldet::textproc {

struct TokenSpan {
    std::size_t offset = 0;  // byte offset into the original text
    std::size_t length = 0;  // byte length
};

struct TokenList {
    std::vector<std::string> tokens;
    std::vector<TokenSpan> offsets;      // parallel to tokens
    std::vector<std::string> punct_runs; // non-alnum, non-space runs, in order
};

// Splits text into maximal letter/digit runs. Case is preserved; punctuation
// runs are kept aside for punct_stats. Offsets are byte spans, so
// text.substr(offset, length) recovers the exact token.
inline TokenList tokenize(std::string_view text) {
    TokenList out;
    std::size_t i = 0;
    while (i < text.size()) {
        auto d = utf8::decode(text, i);
        if (utf8::is_alnum(d.cp)) {
            std::size_t start = i;
            while (i < text.size()) {
                auto e = utf8::decode(text, i);
                if (!utf8::is_alnum(e.cp)) break;
                i += e.len;
            }
            out.tokens.emplace_back(text.substr(start, i - start));
            out.offsets.push_back({start, i - start});
        } else if (d.cp == U' ' || d.cp == U'\t' || d.cp == U'\n' ||
                   d.cp == U'\r' || d.cp == 0xA0) {
            i += d.len;
        } else {
            std::size_t start = i;
            while (i < text.size()) {
                auto e = utf8::decode(text, i);
                if (utf8::is_alnum(e.cp) || e.cp == U' ' || e.cp == U'\t' ||
                    e.cp == U'\n' || e.cp == U'\r' || e.cp == 0xA0)
                    break;
                i += e.len;
            }
            out.punct_runs.emplace_back(text.substr(start, i - start));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Stemming: a longest-match suffix-rewrite engine with a loadable rule table
// (BulStem-style). Unmatched tokens pass through unchanged.

struct StemRules {
    std::map<std::string, std::string> rules;  // suffix -> replacement
    std::size_t min_stem_length = 3;           // in codepoints
};

// Rule file: UTF-8, one `suffix<TAB>replacement` per line, '#' comments.
// A missing replacement column means "strip".
inline StemRules load_stem_rules(const std::string& path,
                                 std::size_t min_stem_length = 3) {
    StemRules r;
    r.min_stem_length = min_stem_length;
    for (const auto& line : util::read_lines(path, /*skip_comments=*/true)) {
        auto cols = util::split(line, '\t');
        std::string suffix{util::trim(cols[0])};
        if (suffix.empty()) continue;
        std::string repl = cols.size() > 1 ? std::string{util::trim(cols[1])} : "";
        r.rules.emplace(utf8::lower(suffix), utf8::lower(repl));
    }
    if (r.rules.empty()) throw util::Error("empty stem rule file: " + path);
    return r;
}

// Applies the longest applicable suffix rule once. A rule applies when the
// token ends with the suffix and the rewritten stem has at least
// min_stem_length codepoints. Byte-level suffix matching is codepoint-safe
// because UTF-8 is self-synchronizing.
inline std::string stem(std::string_view token, const StemRules& rules) {
    const std::size_t token_cps = utf8::length(token);
    const std::string* best_suffix = nullptr;
    const std::string* best_repl = nullptr;
    std::size_t best_len = 0;
    for (const auto& [suffix, repl] : rules.rules) {
        if (suffix.size() > token.size() || suffix.size() < best_len) continue;
        if (token.substr(token.size() - suffix.size()) != suffix) continue;
        const std::size_t stem_cps =
            token_cps - utf8::length(suffix) + utf8::length(repl);
        if (stem_cps < rules.min_stem_length) continue;
        if (suffix.size() > best_len) {
            best_len = suffix.size();
            best_suffix = &suffix;
            best_repl = &repl;
        }
    }
    if (!best_suffix) return std::string{token};
    std::string out{token.substr(0, token.size() - best_suffix->size())};
    out += *best_repl;
    return out;
}

// ---------------------------------------------------------------------------
// n-grams and affixes. All outputs are lowercased.

// Joins of n consecutive tokens, space-separated. Fewer than n tokens: empty.
inline std::vector<std::string> word_ngrams(const TokenList& tl, int n) {
    std::vector<std::string> out;
    if (n < 2 || tl.tokens.size() < static_cast<std::size_t>(n)) return out;
    for (std::size_t i = 0; i + n <= tl.tokens.size(); ++i) {
        std::string g = utf8::lower(tl.tokens[i]);
        for (int j = 1; j < n; ++j) {
            g += ' ';
            g += utf8::lower(tl.tokens[i + j]);
        }
        out.push_back(std::move(g));
    }
    return out;
}

// Per-token sliding character windows, no boundary padding. Tokens shorter
// than n yield nothing.
inline std::vector<std::string> char_ngrams(std::string_view token, int n) {
    std::vector<std::string> out;
    const std::string low = utf8::lower(token);
    const auto cps = utf8::decode_all(low);
    if (n < 1 || cps.size() < static_cast<std::size_t>(n)) return out;
    for (std::size_t i = 0; i + n <= cps.size(); ++i) {
        std::string g;
        for (int j = 0; j < n; ++j) utf8::append(g, cps[i + j]);
        out.push_back(std::move(g));
    }
    return out;
}

enum class AffixSide { prefix, suffix };

// First/last k codepoints, lowercased. Tokens of length <= k return whole.
inline std::string affix(std::string_view token, int k, AffixSide side) {
    const std::string low = utf8::lower(token);
    const auto cps = utf8::decode_all(low);
    if (cps.size() <= static_cast<std::size_t>(k)) return low;
    std::string out;
    const std::size_t start =
        side == AffixSide::prefix ? 0 : cps.size() - static_cast<std::size_t>(k);
    for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i)
        utf8::append(out, cps[start + i]);
    return out;
}

// ---------------------------------------------------------------------------
// Punctuation statistics.

struct PunctStats {
    int excl_single = 0;
    int excl_elong = 0;
    int quest_single = 0;
    int quest_elong = 0;
    int dots_single = 0;
    int dots_elong = 0;
    int word_count = 0;
    int allcaps_count = 0;
};

// A run of k identical marks counts once: single if k == 1, elongated if
// k >= 2. U+2026 is treated as an elongated dots run. All-caps tokens need
// at least 2 codepoints, at least one letter, and no lowercase letter.
inline PunctStats punct_stats(std::string_view text) {
    PunctStats st;
    for (std::size_t i = 0; i < text.size();) {
        auto d = utf8::decode(text, i);
        if (d.cp == U'!' || d.cp == U'?' || d.cp == U'.') {
            const char32_t mark = d.cp;
            int run = 0;
            while (i < text.size()) {
                auto e = utf8::decode(text, i);
                if (e.cp != mark) break;
                ++run;
                i += e.len;
            }
            if (mark == U'!') (run == 1 ? st.excl_single : st.excl_elong)++;
            if (mark == U'?') (run == 1 ? st.quest_single : st.quest_elong)++;
            if (mark == U'.') (run == 1 ? st.dots_single : st.dots_elong)++;
        } else if (d.cp == 0x2026) {  // ellipsis, normalized to "..."
            st.dots_elong++;
            i += d.len;
        } else {
            i += d.len;
        }
    }
    const TokenList tl = tokenize(text);
    st.word_count = static_cast<int>(tl.tokens.size());
    for (const auto& tok : tl.tokens) {
        const auto cps = utf8::decode_all(tok);
        if (cps.size() < 2) continue;
        bool has_letter = false, all_upper = true;
        for (char32_t c : cps) {
            if (!utf8::is_letter(c)) continue;
            has_letter = true;
            if (!utf8::is_upper(c)) {
                all_upper = false;
                break;
            }
        }
        if (has_letter && all_upper) st.allcaps_count++;
    }
    return st;
}

// ---------------------------------------------------------------------------
// Emoticons: counts of literal patterns in the raw text, matched before
// tokenization; at each position the longest matching pattern wins and the
// scan resumes after it.

inline std::map<std::string, int> extract_emoticons(
    std::string_view text, const std::vector<std::string>& patterns) {
    std::map<std::string, int> counts;
    for (std::size_t i = 0; i < text.size();) {
        const std::string* best = nullptr;
        for (const auto& p : patterns) {
            if (p.empty() || p.size() > text.size() - i) continue;
            if (text.substr(i, p.size()) != p) continue;
            if (!best || p.size() > best->size()) best = &p;
        }
        if (best) {
            counts[*best]++;
            i += best->size();
        } else {
            i += utf8::decode(text, i).len;
        }
    }
    return counts;
}

}  // namespace trolldet::textproc
