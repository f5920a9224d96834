#pragma once

// The 17 feature groups and their assembly into classifier inputs: per-group
// sparse raw extraction, a registry fit on training data only, min-max
// scaling to [0,1], and per-vector L2 normalization. Groups toggle as units
// so ablation experiments can exclude exactly one family at a time.

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "trolldet/corpus.hpp"
#include "trolldet/embeddings.hpp"
#include "trolldet/lexicons.hpp"
#include "trolldet/textproc.hpp"
#include "trolldet/utf8.hpp"
#include "trolldet/util.hpp"

namespace trolldet::features {

enum class FeatureGroup {
    bow_no_stop,
    bow_with_stop,
    bow_stems,
    word_2grams,
    word_3grams,
    char_ngrams,
    word_prefix,
    word_suffix,
    emoticons,
    punct,
    metadata,
    w2v_clusters,
    sentiment,
    bad_words,
    mentions,
    pos,
    ne,
};

inline constexpr std::size_t kGroupCount = 17;

inline constexpr std::array<FeatureGroup, kGroupCount> all_groups() {
    return {FeatureGroup::bow_no_stop,  FeatureGroup::bow_with_stop,
            FeatureGroup::bow_stems,    FeatureGroup::word_2grams,
            FeatureGroup::word_3grams,  FeatureGroup::char_ngrams,
            FeatureGroup::word_prefix,  FeatureGroup::word_suffix,
            FeatureGroup::emoticons,    FeatureGroup::punct,
            FeatureGroup::metadata,     FeatureGroup::w2v_clusters,
            FeatureGroup::sentiment,    FeatureGroup::bad_words,
            FeatureGroup::mentions,     FeatureGroup::pos,
            FeatureGroup::ne};
}

// name: stable identifier used in masks, configs, and serialized models.
// label: report-table wording.
inline const char* group_name(FeatureGroup g) {
    switch (g) {
        case FeatureGroup::bow_no_stop: return "bow_no_stop";
        case FeatureGroup::bow_with_stop: return "bow_with_stop";
        case FeatureGroup::bow_stems: return "bow_stems";
        case FeatureGroup::word_2grams: return "word_2grams";
        case FeatureGroup::word_3grams: return "word_3grams";
        case FeatureGroup::char_ngrams: return "char_ngrams";
        case FeatureGroup::word_prefix: return "word_prefix";
        case FeatureGroup::word_suffix: return "word_suffix";
        case FeatureGroup::emoticons: return "emoticons";
        case FeatureGroup::punct: return "punct";
        case FeatureGroup::metadata: return "metadata";
        case FeatureGroup::w2v_clusters: return "w2v_clusters";
        case FeatureGroup::sentiment: return "sentiment";
        case FeatureGroup::bad_words: return "bad_words";
        case FeatureGroup::mentions: return "mentions";
        case FeatureGroup::pos: return "pos";
        case FeatureGroup::ne: return "ne";
    }
    return "?";
}

inline const char* group_label(FeatureGroup g) {
    switch (g) {
        case FeatureGroup::bow_no_stop: return "bow, no stop";
        case FeatureGroup::bow_with_stop: return "bow with stop";
        case FeatureGroup::bow_stems: return "bow stems";
        case FeatureGroup::word_2grams: return "word 2-grams";
        case FeatureGroup::word_3grams: return "word 3-grams";
        case FeatureGroup::char_ngrams: return "char n-grams";
        case FeatureGroup::word_prefix: return "word preff";
        case FeatureGroup::word_suffix: return "word suff";
        case FeatureGroup::emoticons: return "emoticons";
        case FeatureGroup::punct: return "punct";
        case FeatureGroup::metadata: return "metadata";
        case FeatureGroup::w2v_clusters: return "w2v clusters";
        case FeatureGroup::sentiment: return "sentiment";
        case FeatureGroup::bad_words: return "bad words";
        case FeatureGroup::mentions: return "mentions";
        case FeatureGroup::pos: return "POS";
        case FeatureGroup::ne: return "NE";
    }
    return "?";
}

inline std::optional<FeatureGroup> group_from_name(std::string_view name) {
    for (FeatureGroup g : all_groups())
        if (name == group_name(g)) return g;
    return std::nullopt;
}

using GroupMask = std::set<FeatureGroup>;

inline GroupMask full_mask() {
    GroupMask m;
    for (FeatureGroup g : all_groups()) m.insert(g);
    return m;
}

// Comma-separated group names, or "all". Unknown names are an error that
// lists the valid vocabulary.
inline GroupMask parse_mask(std::string_view csv) {
    const std::string trimmed{util::trim(csv)};
    if (trimmed.empty() || trimmed == "all") return full_mask();
    GroupMask mask;
    for (auto& part : util::split(trimmed, ',')) {
        const std::string name{util::trim(part)};
        if (name.empty()) continue;
        auto g = group_from_name(name);
        if (!g) {
            std::string valid;
            for (FeatureGroup gg : all_groups()) {
                if (!valid.empty()) valid += ", ";
                valid += group_name(gg);
            }
            throw util::Error("unknown feature group '" + name +
                              "' (valid: all, " + valid + ")");
        }
        mask.insert(*g);
    }
    return mask;
}

// ---------------------------------------------------------------------------

struct FeatureKey {
    FeatureGroup group;
    std::string name;
    auto operator<=>(const FeatureKey&) const = default;
};

using RawFeatures = std::map<FeatureKey, double>;

struct FeatureRegistry {
    std::map<FeatureKey, std::size_t> index;
    std::size_t n_columns = 0;

    std::optional<std::size_t> column(const FeatureKey& key) const {
        auto it = index.find(key);
        if (it == index.end()) return std::nullopt;
        return it->second;
    }

    // Keys in column order.
    std::vector<FeatureKey> ordered_keys() const {
        std::vector<FeatureKey> keys(n_columns);
        for (const auto& [key, col] : index) keys[col] = key;
        return keys;
    }

    GroupMask groups() const {
        GroupMask m;
        for (const auto& [key, col] : index) m.insert(key.group);
        return m;
    }
};

struct ScalerStats {
    std::vector<double> min_v;  // per column, over training values (absent = 0)
    std::vector<double> max_v;
};

// Sparse scaled vector, entries sorted by column id, L2 norm 1 (or all-zero).
struct FeatureVector {
    std::vector<std::pair<std::size_t, double>> entries;
};

struct MetadataFeatures {
    int worktime = 0;  // 9:00 <= t < 19:00
    int night = 0;     // t >= 21:00 or t < 6:00
    int weekend = 0;   // Saturday or Sunday
    double rank_ratio = 0;
};

// The 19:00-21:00 and 6:00-9:00 gaps belong to neither interval, so worktime
// and night are never both set.
inline MetadataFeatures metadata_features(const corpus::Comment& c) {
    MetadataFeatures m;
    const int h = c.timestamp.hour;
    m.worktime = (h >= 9 && h < 19) ? 1 : 0;
    m.night = (h >= 21 || h < 6) ? 1 : 0;
    m.weekend = c.timestamp.is_weekend() ? 1 : 0;
    m.rank_ratio = double(c.rank) / double(c.thread_size);
    return m;
}

// ---------------------------------------------------------------------------
// Resources backing the lexicon- and embedding-based groups. Each pointer is
// required only when the matching group is enabled. The POS dictionary is
// genuinely optional: comments may carry their own tags, and untagged tokens
// fall back to "X".

struct FeatureResources {
    const lexicons::Lexicon* stopwords = nullptr;                // bow_no_stop
    const textproc::StemRules* stem_rules = nullptr;             // bow_stems
    const lexicons::Lexicon* emoticons = nullptr;                // emoticons
    const embeddings::ClusterModel* clusters = nullptr;          // w2v_clusters
    const lexicons::SentimentResources* sentiment = nullptr;     // sentiment
    const std::vector<lexicons::Lexicon>* bad_words = nullptr;   // bad_words
    const std::vector<lexicons::Lexicon>* mentions = nullptr;    // mentions
    const std::vector<lexicons::Lexicon>* gazetteers = nullptr;  // ne
    const std::map<std::string, std::string>* pos_dictionary = nullptr;
};

namespace detail {

inline void require(const void* resource, FeatureGroup g) {
    if (!resource)
        throw util::Error(std::string("feature group '") + group_name(g) +
                          "' is enabled but its resource is not loaded");
}

// First k codepoints, case preserved (POS tags are case-significant).
inline std::string cp_prefix(std::string_view s, int k) {
    std::size_t i = 0;
    for (int taken = 0; i < s.size() && taken < k; ++taken)
        i += utf8::decode(s, i).len;
    return std::string(s.substr(0, i));
}

}  // namespace detail

// Raw group-tagged features for one comment. Count-valued families (bow,
// n-grams, affixes, emoticons, clusters) use raw counts; the scaling stage
// absorbs magnitude. POS and sentiment are normalized by token count as
// their definitions require. Fixed-width families (punct, metadata,
// sentiment bundle, per-lexicon counts) always emit every member, zeros
// included, so columns that can go negative are never silently absent.
inline RawFeatures extract_raw(const corpus::Comment& comment,
                               const GroupMask& mask,
                               const FeatureResources& res,
                               const corpus::MetaOverride* meta = nullptr) {
    using FG = FeatureGroup;
    RawFeatures raw;
    const auto tl = textproc::tokenize(comment.text);
    auto on = [&](FG g) { return mask.count(g) != 0; };

    if (on(FG::bow_no_stop)) {
        detail::require(res.stopwords, FG::bow_no_stop);
        for (const auto& t : tl.tokens) {
            const std::string low = utf8::lower(t);
            if (!res.stopwords->contains(low))
                raw[{FG::bow_no_stop, low}] += 1.0;
        }
    }
    if (on(FG::bow_with_stop))
        for (const auto& t : tl.tokens)
            raw[{FG::bow_with_stop, utf8::lower(t)}] += 1.0;
    if (on(FG::bow_stems)) {
        detail::require(res.stem_rules, FG::bow_stems);
        for (const auto& t : tl.tokens)
            raw[{FG::bow_stems, textproc::stem(utf8::lower(t), *res.stem_rules)}] += 1.0;
    }
    if (on(FG::word_2grams))
        for (const auto& g : textproc::word_ngrams(tl, 2))
            raw[{FG::word_2grams, g}] += 1.0;
    if (on(FG::word_3grams))
        for (const auto& g : textproc::word_ngrams(tl, 3))
            raw[{FG::word_3grams, g}] += 1.0;
    if (on(FG::char_ngrams)) {
        // Lengths 3 and 4; names need no size marker since the gram's own
        // codepoint length disambiguates.
        for (const auto& t : tl.tokens)
            for (int n : {3, 4})
                for (const auto& g : textproc::char_ngrams(t, n))
                    raw[{FG::char_ngrams, g}] += 1.0;
    }
    if (on(FG::word_prefix) || on(FG::word_suffix)) {
        // Affixes of length 3 and 4. The short-token rule makes a 2-letter
        // word its own 3- and 4-affix, so names carry the length to keep
        // those two features distinct.
        for (const auto& t : tl.tokens) {
            for (int k : {3, 4}) {
                const std::string tag = std::to_string(k) + ":";
                if (on(FG::word_prefix))
                    raw[{FG::word_prefix,
                         tag + textproc::affix(t, k, textproc::AffixSide::prefix)}] += 1.0;
                if (on(FG::word_suffix))
                    raw[{FG::word_suffix,
                         tag + textproc::affix(t, k, textproc::AffixSide::suffix)}] += 1.0;
            }
        }
    }
    if (on(FG::emoticons)) {
        detail::require(res.emoticons, FG::emoticons);
        for (const auto& [pattern, n] :
             lexicons::extract_emoticons(comment.text, *res.emoticons))
            raw[{FG::emoticons, pattern}] = double(n);
    }
    if (on(FG::punct)) {
        const auto ps = textproc::punct_stats(comment.text);
        raw[{FG::punct, "excl_single"}] = ps.excl_single;
        raw[{FG::punct, "excl_elong"}] = ps.excl_elong;
        raw[{FG::punct, "quest_single"}] = ps.quest_single;
        raw[{FG::punct, "quest_elong"}] = ps.quest_elong;
        raw[{FG::punct, "dots_single"}] = ps.dots_single;
        raw[{FG::punct, "dots_elong"}] = ps.dots_elong;
        raw[{FG::punct, "word_count"}] = ps.word_count;
        raw[{FG::punct, "allcaps_count"}] = ps.allcaps_count;
    }
    if (on(FG::metadata)) {
        if (meta) {
            raw[{FG::metadata, "worktime"}] = meta->worktime;
            raw[{FG::metadata, "night"}] = meta->night;
            raw[{FG::metadata, "weekend"}] = meta->weekend;
            raw[{FG::metadata, "rank_ratio"}] = meta->rank_ratio;
        } else {
            const auto m = metadata_features(comment);
            raw[{FG::metadata, "worktime"}] = m.worktime;
            raw[{FG::metadata, "night"}] = m.night;
            raw[{FG::metadata, "weekend"}] = m.weekend;
            raw[{FG::metadata, "rank_ratio"}] = m.rank_ratio;
        }
    }
    if (on(FG::w2v_clusters)) {
        detail::require(res.clusters, FG::w2v_clusters);
        for (const auto& t : tl.tokens) {
            auto it = res.clusters->assignment.find(utf8::lower(t));
            if (it != res.clusters->assignment.end())
                raw[{FG::w2v_clusters, std::to_string(it->second)}] += 1.0;
        }
    }
    if (on(FG::sentiment)) {
        detail::require(res.sentiment, FG::sentiment);
        const auto s = lexicons::sentiment_scores(tl, *res.sentiment);
        raw[{FG::sentiment, "polarity_positive"}] = s.normalized(s.polarity.positive);
        raw[{FG::sentiment, "polarity_negative"}] = s.normalized(s.polarity.negative);
        raw[{FG::sentiment, "polarity_net"}] = s.normalized(s.polarity.net);
        raw[{FG::sentiment, "opinion_positive"}] = s.normalized(s.opinion.positive);
        raw[{FG::sentiment, "opinion_negative"}] = s.normalized(s.opinion.negative);
        raw[{FG::sentiment, "opinion_net"}] = s.normalized(s.opinion.net);
        for (const auto& [cat, n] : s.emotion_counts)
            raw[{FG::sentiment, "emotion_" + cat}] = s.normalized(n);
    }
    if (on(FG::bad_words)) {
        detail::require(res.bad_words, FG::bad_words);
        for (const auto& lex : *res.bad_words)
            raw[{FG::bad_words, lex.name}] =
                double(lexicons::count_matches(tl, lex).total);
    }
    if (on(FG::mentions)) {
        detail::require(res.mentions, FG::mentions);
        for (const auto& lex : *res.mentions)
            raw[{FG::mentions, lex.name}] =
                double(lexicons::count_matches(tl, lex).total);
    }
    if (on(FG::pos)) {
        std::vector<std::string> tags;
        if (comment.pos_tags) {
            tags = *comment.pos_tags;
        } else {
            for (const auto& t : tl.tokens) {
                std::string tag = "X";
                if (res.pos_dictionary) {
                    auto it = res.pos_dictionary->find(utf8::lower(t));
                    if (it != res.pos_dictionary->end()) tag = it->second;
                }
                tags.push_back(std::move(tag));
            }
        }
        if (!tags.empty()) {
            // Each tag expands to itself plus its 1- and 2-codepoint
            // prefixes, deduplicated per token, every expansion weighted
            // 1 / token count.
            const double denom = double(tags.size());
            for (const auto& tag : tags) {
                if (tag.empty()) continue;
                std::set<std::string> expansions{tag, detail::cp_prefix(tag, 1),
                                                 detail::cp_prefix(tag, 2)};
                for (const auto& e : expansions)
                    raw[{FG::pos, e}] += 1.0 / denom;
            }
        }
    }
    if (on(FG::ne)) {
        detail::require(res.gazetteers, FG::ne);
        for (const auto& [name, n] : lexicons::gazetteer_entities(tl, *res.gazetteers))
            raw[{FG::ne, name}] = double(n);
    }
    return raw;
}

inline RawFeatures extract_raw(const corpus::LabeledExample& example,
                               const GroupMask& mask,
                               const FeatureResources& res) {
    return extract_raw(example.comment, mask, res,
                       example.meta ? &*example.meta : nullptr);
}

// ---------------------------------------------------------------------------
// Registry and scaler, fit on training examples only. Column ids follow the
// sorted key order, so the layout is independent of example order. A column
// absent from some training example counts as 0 for its min/max.

inline std::pair<FeatureRegistry, ScalerStats> fit_registry(
    const std::vector<RawFeatures>& train) {
    if (train.empty()) throw util::Error("fit_registry: empty training set");
    struct Agg {
        double min_v = 0, max_v = 0;
        std::size_t seen = 0;
    };
    std::map<FeatureKey, Agg> agg;
    for (const auto& raw : train) {
        for (const auto& [key, value] : raw) {
            auto [it, inserted] = agg.try_emplace(key);
            Agg& a = it->second;
            if (inserted || a.seen == 0) {
                a.min_v = a.max_v = value;
            } else {
                a.min_v = std::min(a.min_v, value);
                a.max_v = std::max(a.max_v, value);
            }
            a.seen++;
        }
    }
    FeatureRegistry registry;
    ScalerStats scaler;
    for (auto& [key, a] : agg) {
        if (a.seen < train.size()) {
            a.min_v = std::min(a.min_v, 0.0);
            a.max_v = std::max(a.max_v, 0.0);
        }
        registry.index.emplace(key, registry.n_columns++);
        scaler.min_v.push_back(a.min_v);
        scaler.max_v.push_back(a.max_v);
    }
    return {std::move(registry), std::move(scaler)};
}

// Scale to [0,1] with train stats (clipping out-of-range values, mapping
// constant columns to 0), drop unseen keys, then L2-normalize. Entries that
// scale to exactly 0 are omitted; for every emitted family this matches the
// absent-means-zero convention because count features have train min <= 0
// after the absent rule, and sign-carrying features are always present.
inline FeatureVector transform(const RawFeatures& raw,
                               const FeatureRegistry& registry,
                               const ScalerStats& scaler) {
    FeatureVector vec;
    for (const auto& [key, value] : raw) {
        if (!std::isfinite(value))
            throw util::Error("non-finite value for feature '" +
                              std::string(group_name(key.group)) + ":" + key.name + "'");
        auto col = registry.column(key);
        if (!col) continue;
        const double lo = scaler.min_v[*col], hi = scaler.max_v[*col];
        double scaled = 0;
        if (hi > lo) {
            scaled = (value - lo) / (hi - lo);
            scaled = std::min(1.0, std::max(0.0, scaled));
        }
        if (scaled != 0) vec.entries.emplace_back(*col, scaled);
    }
    std::sort(vec.entries.begin(), vec.entries.end());
    double norm_sq = 0;
    for (const auto& [col, v] : vec.entries) norm_sq += v * v;
    if (norm_sq > 0) {
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (auto& [col, v] : vec.entries) v *= inv;
    }
    return vec;
}

// Word -> POS tag dictionary: `word<TAB>tag` per line, '#' comments. Words
// are lowercased; tags keep their case (coarse prefixes are derived from it).
inline std::map<std::string, std::string> load_pos_dictionary(
    const std::string& path) {
    std::map<std::string, std::string> dict;
    std::size_t line_no = 0;
    for (const auto& line : util::read_lines(path, /*skip_comments=*/true)) {
        ++line_no;
        if (util::trim(line).empty()) continue;
        const auto cols = util::split(line, '\t');
        if (cols.size() != 2 || util::trim(cols[0]).empty() ||
            util::trim(cols[1]).empty())
            throw util::Error(path + ":" + std::to_string(line_no) +
                              ": expected word<TAB>tag");
        dict[utf8::lower(util::trim(cols[0]))] = std::string{util::trim(cols[1])};
    }
    return dict;
}

// Debug dump: one JSON object per feature.
inline std::string dump_raw_jsonl(const std::string& comment_id,
                                  const RawFeatures& raw) {
    std::string out;
    for (const auto& [key, value] : raw) {
        nlohmann::json j = {{"id", comment_id},
                            {"group", group_name(key.group)},
                            {"name", key.name},
                            {"value", value}};
        out += j.dump();
        out += '\n';
    }
    return out;
}

}  // namespace trolldet::features
