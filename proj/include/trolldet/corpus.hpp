#pragma once

// Forum corpus handling: comment ingestion and validation, troll-accusation
// mining, inter-annotator agreement, same-thread troll/non-troll pairing,
// and the user-level dataset with minimum-mention thresholds.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "trolldet/lexicons.hpp"
#include "trolldet/textproc.hpp"
#include "trolldet/utf8.hpp"
#include "trolldet/util.hpp"

namespace trolldet::corpus {

using json = nlohmann::json;

enum class Label { paid_troll, mentioned_troll, non_troll };

inline std::string label_to_string(Label l) {
    switch (l) {
        case Label::paid_troll: return "paid_troll";
        case Label::mentioned_troll: return "mentioned_troll";
        case Label::non_troll: return "non_troll";
    }
    return "non_troll";
}

inline std::optional<Label> label_from_string(std::string_view s) {
    if (s == "paid_troll") return Label::paid_troll;
    if (s == "mentioned_troll") return Label::mentioned_troll;
    if (s == "non_troll") return Label::non_troll;
    return std::nullopt;
}

inline bool is_troll(Label l) { return l != Label::non_troll; }

struct Comment {
    std::string id;
    std::string user_id;
    std::string publication_id;
    std::optional<std::string> parent_id;  // reply target
    util::DateTime timestamp;
    int rank = 1;         // 1-based position in the thread
    int thread_size = 1;
    std::string text;
    std::optional<std::vector<std::string>> pos_tags;  // per-token tags
};

// Averaged metadata for user-level examples, where the posting-time flags
// become fractions over the user's comments.
struct MetaOverride {
    double worktime = 0;
    double night = 0;
    double weekend = 0;
    double rank_ratio = 0;
};

struct LabeledExample {
    Comment comment;
    Label label = Label::non_troll;
    std::optional<MetaOverride> meta;
};

struct LabeledDataset {
    std::vector<LabeledExample> examples;
    std::uint64_t pairing_seed = 0;
    std::vector<std::string> dropped_troll_ids;

    std::size_t positives() const {
        std::size_t n = 0;
        for (const auto& e : examples) n += is_troll(e.label);
        return n;
    }
    std::size_t negatives() const { return examples.size() - positives(); }
    bool balanced() const { return positives() == negatives(); }
};

struct UserStats {
    std::string user_id;
    std::int64_t comment_count = 0;
    std::int64_t accusation_mentions = 0;  // distinct accusing comments
    std::int64_t distinct_accusers = 0;    // distinct accusing users
};

struct AccusationCandidate {
    std::string accusation_comment_id;
    std::string accused_comment_id;  // the parent comment
    std::string accused_user_id;
    std::string matched_trigger;
    std::vector<bool> annotator_decisions;
};

// ---------------------------------------------------------------------------
// Comment JSON (line-delimited), the primary interchange format.

inline json comment_to_json(const Comment& c) {
    json j;
    j["id"] = c.id;
    j["user_id"] = c.user_id;
    j["publication_id"] = c.publication_id;
    if (c.parent_id) j["parent_id"] = *c.parent_id;
    j["timestamp"] = c.timestamp.to_iso8601();
    j["rank"] = c.rank;
    j["thread_size"] = c.thread_size;
    j["text"] = c.text;
    if (c.pos_tags) j["pos_tags"] = *c.pos_tags;
    return j;
}

inline Comment comment_from_json(const json& j) {
    Comment c;
    auto str_field = [&](const char* name) -> std::string {
        if (!j.contains(name) || !j[name].is_string())
            throw util::Error(std::string("missing or non-string field '") + name + "'");
        return j[name].get<std::string>();
    };
    auto int_field = [&](const char* name) -> int {
        if (!j.contains(name) || !j[name].is_number_integer())
            throw util::Error(std::string("missing or non-integer field '") + name + "'");
        return j[name].get<int>();
    };
    c.id = str_field("id");
    c.user_id = str_field("user_id");
    c.publication_id = str_field("publication_id");
    if (j.contains("parent_id") && !j["parent_id"].is_null()) {
        if (!j["parent_id"].is_string())
            throw util::Error("field 'parent_id' must be a string or null");
        c.parent_id = j["parent_id"].get<std::string>();
    }
    const std::string ts = str_field("timestamp");
    auto parsed = util::parse_iso8601(ts);
    if (!parsed) throw util::Error("invalid timestamp '" + ts + "'");
    c.timestamp = *parsed;
    c.rank = int_field("rank");
    c.thread_size = int_field("thread_size");
    c.text = str_field("text");
    if (j.contains("pos_tags") && !j["pos_tags"].is_null()) {
        if (!j["pos_tags"].is_array())
            throw util::Error("field 'pos_tags' must be an array of strings");
        std::vector<std::string> tags;
        for (const auto& t : j["pos_tags"]) {
            if (!t.is_string())
                throw util::Error("field 'pos_tags' must be an array of strings");
            tags.push_back(t.get<std::string>());
        }
        c.pos_tags = std::move(tags);
    }
    // Type invariants.
    if (c.rank < 1) throw util::Error("rank must be >= 1");
    if (c.thread_size < 1) throw util::Error("thread_size must be >= 1");
    if (c.rank > c.thread_size) throw util::Error("rank exceeds thread_size");
    if (c.parent_id && *c.parent_id == c.id)
        throw util::Error("parent_id equals id");
    return c;
}

// ---------------------------------------------------------------------------
// Ingestion. JSONL: one comment object per line. CSV: header row naming the
// same fields; pos_tags space-separated. In strict mode the first malformed
// record aborts with its line number; in lenient mode bad records are
// skipped and reported.

enum class IngestFormat { jsonl, csv };

struct LoadIssue {
    std::size_t line = 0;
    std::string message;
};

struct LoadResult {
    std::vector<Comment> comments;
    std::vector<LoadIssue> issues;
};

namespace detail {

// RFC 4180-style records: quoted fields may contain commas, doubled quotes,
// and newlines.
inline std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false, field_started = false;
    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        if (record.size() > 1 || !record[0].empty()) records.push_back(record);
        record.clear();
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += ch;
            }
        } else if (ch == '"' && !field_started) {
            in_quotes = true;
            field_started = true;
        } else if (ch == ',') {
            end_field();
        } else if (ch == '\n') {
            if (!field.empty() && field.back() == '\r') field.pop_back();
            end_record();
        } else {
            field += ch;
            field_started = true;
        }
    }
    if (!field.empty() || !record.empty()) end_record();
    return records;
}

}  // namespace detail

inline LoadResult load_comments(const std::string& path, IngestFormat format,
                                bool strict = false) {
    LoadResult result;
    auto fail = [&](std::size_t line, const std::string& msg) {
        if (strict)
            throw util::Error(path + ":" + std::to_string(line) + ": " + msg);
        result.issues.push_back({line, msg});
    };
    if (format == IngestFormat::jsonl) {
        std::ifstream in(path);
        if (!in) throw util::Error("cannot open file: " + path);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (util::trim(line).empty()) continue;
            try {
                result.comments.push_back(comment_from_json(json::parse(line)));
            } catch (const std::exception& e) {
                fail(line_no, e.what());
            }
        }
    } else {
        const auto records = detail::parse_csv(util::read_file(path));
        if (records.empty()) return result;
        std::map<std::string, std::size_t> col;
        for (std::size_t i = 0; i < records[0].size(); ++i)
            col[std::string{util::trim(records[0][i])}] = i;
        for (const char* required : {"id", "user_id", "publication_id",
                                     "timestamp", "rank", "thread_size", "text"})
            if (!col.count(required))
                throw util::Error(path + ": CSV header lacks column '" +
                                  std::string(required) + "'");
        for (std::size_t r = 1; r < records.size(); ++r) {
            const auto& rec = records[r];
            auto get = [&](const char* name) -> std::string {
                auto it = col.find(name);
                if (it == col.end() || it->second >= rec.size()) return "";
                return rec[it->second];
            };
            try {
                json j;
                j["id"] = get("id");
                j["user_id"] = get("user_id");
                j["publication_id"] = get("publication_id");
                if (!get("parent_id").empty()) j["parent_id"] = get("parent_id");
                j["timestamp"] = get("timestamp");
                j["text"] = get("text");
                const std::string rank = get("rank"), ts = get("thread_size");
                try {
                    j["rank"] = std::stoi(rank);
                    j["thread_size"] = std::stoi(ts);
                } catch (const std::exception&) {
                    throw util::Error("non-integer rank/thread_size");
                }
                if (!get("pos_tags").empty()) {
                    json tags = json::array();
                    for (auto& t : util::split(get("pos_tags"), ' '))
                        if (!t.empty()) tags.push_back(t);
                    j["pos_tags"] = tags;
                }
                result.comments.push_back(comment_from_json(j));
            } catch (const std::exception& e) {
                fail(r + 1, e.what());
            }
        }
    }
    return result;
}

inline void write_comments_jsonl(const std::vector<Comment>& comments,
                                 const std::string& path) {
    std::string out;
    for (const auto& c : comments) {
        out += comment_to_json(c).dump();
        out += '\n';
    }
    util::write_file(path, out);
}

// ---------------------------------------------------------------------------
// Labeled dataset IO: comment fields plus `label` and, for user-level
// examples, a `meta_override` object.

inline void write_dataset_jsonl(const LabeledDataset& ds, const std::string& path) {
    std::string out;
    for (const auto& e : ds.examples) {
        json j = comment_to_json(e.comment);
        j["label"] = label_to_string(e.label);
        if (e.meta) {
            j["meta_override"] = {{"worktime", e.meta->worktime},
                                  {"night", e.meta->night},
                                  {"weekend", e.meta->weekend},
                                  {"rank_ratio", e.meta->rank_ratio}};
        }
        out += j.dump();
        out += '\n';
    }
    util::write_file(path, out);
}

inline LabeledDataset read_dataset_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw util::Error("cannot open file: " + path);
    LabeledDataset ds;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (util::trim(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const std::exception& e) {
            throw util::Error(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        LabeledExample ex;
        ex.comment = comment_from_json(j);
        if (!j.contains("label") || !j["label"].is_string())
            throw util::Error(path + ":" + std::to_string(line_no) +
                              ": missing label field");
        auto label = label_from_string(j["label"].get<std::string>());
        if (!label)
            throw util::Error(path + ":" + std::to_string(line_no) +
                              ": unknown label '" + j["label"].get<std::string>() + "'");
        ex.label = *label;
        if (j.contains("meta_override")) {
            const auto& m = j["meta_override"];
            ex.meta = MetaOverride{m.at("worktime").get<double>(),
                                   m.at("night").get<double>(),
                                   m.at("weekend").get<double>(),
                                   m.at("rank_ratio").get<double>()};
        }
        ds.examples.push_back(std::move(ex));
    }
    return ds;
}

// ---------------------------------------------------------------------------
// Accusation mining. A reply is a candidate accusation iff its parent exists
// in the corpus and at least one token, case-insensitively, begins with a
// trigger stem. Replies to comments outside the corpus are skipped and
// reported.

struct MiningResult {
    std::vector<AccusationCandidate> candidates;
    std::vector<std::string> dangling_reply_ids;
};

inline MiningResult mine_accusations(const std::vector<Comment>& comments,
                                     const lexicons::Lexicon& triggers) {
    if (triggers.entries.empty())
        throw util::Error("mine_accusations: trigger lexicon is empty");
    std::map<std::string, const Comment*> by_id;
    for (const auto& c : comments) by_id.emplace(c.id, &c);
    MiningResult result;
    for (const auto& c : comments) {
        if (!c.parent_id) continue;
        auto parent = by_id.find(*c.parent_id);
        if (parent == by_id.end()) {
            result.dangling_reply_ids.push_back(c.id);
            continue;
        }
        const auto tokens = textproc::tokenize(c.text);
        const std::string* matched = nullptr;
        for (const auto& tok : tokens.tokens) {
            const std::string low = utf8::lower(tok);
            for (const auto& [stemmed, entry] : triggers.entries) {
                if (low.size() >= stemmed.size() &&
                    low.compare(0, stemmed.size(), stemmed) == 0) {
                    if (!matched || stemmed.size() > matched->size())
                        matched = &stemmed;
                }
            }
            if (matched) break;  // first matching token decides
        }
        if (matched) {
            result.candidates.push_back({c.id, parent->second->id,
                                         parent->second->user_id, *matched, {}});
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Cohen's kappa: (p_o - p_e) / (1 - p_e) with chance agreement from marginal
// label frequencies. The degenerate p_e = 1 case (both annotators constant
// and identical) is defined as 1.0.

inline double cohen_kappa(const std::vector<std::string>& labels_a,
                          const std::vector<std::string>& labels_b) {
    if (labels_a.empty() || labels_a.size() != labels_b.size())
        throw util::Error("cohen_kappa: label lists must be equal, non-zero length");
    const double n = static_cast<double>(labels_a.size());
    std::map<std::string, std::size_t> freq_a, freq_b;
    std::size_t agree = 0;
    for (std::size_t i = 0; i < labels_a.size(); ++i) {
        freq_a[labels_a[i]]++;
        freq_b[labels_b[i]]++;
        if (labels_a[i] == labels_b[i]) ++agree;
    }
    const double p_o = agree / n;
    double p_e = 0;
    for (const auto& [label, ca] : freq_a) {
        auto it = freq_b.find(label);
        if (it != freq_b.end()) p_e += (ca / n) * (it->second / n);
    }
    if (p_e >= 1.0) return 1.0;
    return (p_o - p_e) / (1.0 - p_e);
}

// ---------------------------------------------------------------------------
// Same-thread pairing. For each troll comment, one non-troll partner is
// drawn seeded-uniformly from the same publication's comments whose authors
// have >= 100 forum comments and are not in the accused set. Partners are
// drawn without replacement; trolls with no eligible partner are dropped
// and recorded. The result is exactly balanced.

inline constexpr std::int64_t kNonTrollMinComments = 100;

inline LabeledDataset build_pairs(
    const std::vector<std::pair<Comment, Label>>& troll_comments,
    const std::vector<Comment>& all_comments,
    const std::vector<UserStats>& stats,
    const std::set<std::string>& accused_users, std::uint64_t seed) {
    std::map<std::string, std::int64_t> comment_count;
    for (const auto& s : stats) comment_count[s.user_id] = s.comment_count;
    std::set<std::string> troll_ids;
    for (const auto& [c, l] : troll_comments) troll_ids.insert(c.id);

    // Eligible partners per publication, ordered by comment id so the seeded
    // draw is reproducible regardless of input order.
    std::map<std::string, std::vector<const Comment*>> pool;
    for (const auto& c : all_comments) {
        if (troll_ids.count(c.id)) continue;
        if (accused_users.count(c.user_id)) continue;
        auto it = comment_count.find(c.user_id);
        if (it == comment_count.end() || it->second < kNonTrollMinComments) continue;
        pool[c.publication_id].push_back(&c);
    }
    for (auto& [pub, list] : pool)
        std::sort(list.begin(), list.end(),
                  [](const Comment* a, const Comment* b) { return a->id < b->id; });

    LabeledDataset ds;
    ds.pairing_seed = seed;
    util::Rng rng(seed);
    std::set<std::string> used;
    for (const auto& [troll, label] : troll_comments) {
        auto it = pool.find(troll.publication_id);
        std::vector<const Comment*> eligible;
        if (it != pool.end()) {
            for (const Comment* c : it->second)
                if (!used.count(c->id)) eligible.push_back(c);
        }
        if (eligible.empty()) {
            ds.dropped_troll_ids.push_back(troll.id);
            continue;
        }
        const Comment* partner = eligible[rng.below(eligible.size())];
        used.insert(partner->id);
        ds.examples.push_back({troll, label, std::nullopt});
        ds.examples.push_back({*partner, Label::non_troll, std::nullopt});
    }
    return ds;
}

// ---------------------------------------------------------------------------
// User statistics: total comments per user, distinct accusing comments
// against the user, and distinct accusing users.

inline std::vector<UserStats> compute_user_stats(
    const std::vector<Comment>& comments,
    const std::vector<AccusationCandidate>& candidates) {
    std::map<std::string, const Comment*> by_id;
    for (const auto& c : comments) by_id.emplace(c.id, &c);
    std::map<std::string, UserStats> stats;
    for (const auto& c : comments) {
        auto& s = stats[c.user_id];
        s.user_id = c.user_id;
        s.comment_count++;
    }
    std::map<std::string, std::set<std::string>> accusing_comments, accusing_users;
    for (const auto& cand : candidates) {
        std::string accused_user = cand.accused_user_id;
        if (accused_user.empty()) {
            auto it = by_id.find(cand.accused_comment_id);
            if (it == by_id.end()) continue;
            accused_user = it->second->user_id;
        }
        accusing_comments[accused_user].insert(cand.accusation_comment_id);
        auto accuser = by_id.find(cand.accusation_comment_id);
        if (accuser != by_id.end())
            accusing_users[accused_user].insert(accuser->second->user_id);
    }
    std::vector<UserStats> out;
    out.reserve(stats.size());
    for (auto& [user, s] : stats) {
        auto itc = accusing_comments.find(user);
        if (itc != accusing_comments.end())
            s.accusation_mentions = static_cast<std::int64_t>(itc->second.size());
        auto itu = accusing_users.find(user);
        if (itu != accusing_users.end())
            s.distinct_accusers = static_cast<std::int64_t>(itu->second.size());
        out.push_back(s);
    }
    return out;
}

inline void write_user_stats_jsonl(const std::vector<UserStats>& stats,
                                   const std::string& path) {
    std::string out;
    for (const auto& s : stats) {
        json j = {{"user_id", s.user_id},
                  {"comment_count", s.comment_count},
                  {"accusation_mentions", s.accusation_mentions},
                  {"distinct_accusers", s.distinct_accusers}};
        out += j.dump();
        out += '\n';
    }
    util::write_file(path, out);
}

inline std::vector<UserStats> read_user_stats_jsonl(const std::string& path) {
    std::vector<UserStats> out;
    std::size_t line_no = 0;
    for (const auto& line : util::read_lines(path)) {
        ++line_no;
        if (util::trim(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const std::exception& e) {
            throw util::Error(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        UserStats s;
        s.user_id = j.at("user_id").get<std::string>();
        s.comment_count = j.at("comment_count").get<std::int64_t>();
        if (j.contains("accusation_mentions"))
            s.accusation_mentions = j["accusation_mentions"].get<std::int64_t>();
        if (j.contains("distinct_accusers"))
            s.distinct_accusers = j["distinct_accusers"].get<std::int64_t>();
        out.push_back(std::move(s));
    }
    return out;
}

// ---------------------------------------------------------------------------
// User-level dataset. Positive class: users with at least min_mentions
// distinct accusing comments. Negative class: never-accused users with
// >= 100 comments, seeded-subsampled to balance. Each example concatenates
// the user's comments; metadata features are averaged via MetaOverride.

struct UserDatasetResult {
    LabeledDataset dataset;
    std::size_t eligible_positive = 0;
    std::size_t eligible_negative = 0;  // before subsampling
    bool empty_warning = false;         // no positive users at the threshold
};

namespace detail {

inline LabeledExample merge_user_comments(const std::string& user_id,
                                          std::vector<const Comment*> comments,
                                          Label label) {
    std::sort(comments.begin(), comments.end(), [](const Comment* a, const Comment* b) {
        const auto ea = a->timestamp.epoch_seconds(), eb = b->timestamp.epoch_seconds();
        return ea != eb ? ea < eb : a->id < b->id;
    });
    LabeledExample ex;
    ex.label = label;
    Comment merged;
    merged.id = "user:" + user_id;
    merged.user_id = user_id;
    merged.timestamp = comments.front()->timestamp;
    MetaOverride meta;
    std::vector<std::string> tags;
    bool all_tagged = true;
    for (const Comment* c : comments) {
        if (!merged.text.empty()) merged.text += '\n';
        merged.text += c->text;
        const int h = c->timestamp.hour;
        meta.worktime += (h >= 9 && h < 19) ? 1 : 0;
        meta.night += (h >= 21 || h < 6) ? 1 : 0;
        meta.weekend += c->timestamp.is_weekend() ? 1 : 0;
        meta.rank_ratio += double(c->rank) / double(c->thread_size);
        if (c->pos_tags)
            tags.insert(tags.end(), c->pos_tags->begin(), c->pos_tags->end());
        else
            all_tagged = false;
    }
    const double n = static_cast<double>(comments.size());
    meta.worktime /= n;
    meta.night /= n;
    meta.weekend /= n;
    meta.rank_ratio /= n;
    ex.meta = meta;
    if (all_tagged && !tags.empty()) merged.pos_tags = std::move(tags);
    ex.comment = std::move(merged);
    return ex;
}

}  // namespace detail

inline UserDatasetResult build_user_dataset(const std::vector<Comment>& comments,
                                            const std::vector<UserStats>& stats,
                                            int min_mentions, std::uint64_t seed) {
    if (min_mentions < 1)
        throw util::Error("build_user_dataset: min_mentions must be >= 1");
    std::map<std::string, std::vector<const Comment*>> by_user;
    for (const auto& c : comments) by_user[c.user_id].push_back(&c);

    std::vector<const UserStats*> positive, negative;
    for (const auto& s : stats) {
        if (!by_user.count(s.user_id)) continue;  // no text available
        if (s.accusation_mentions >= min_mentions)
            positive.push_back(&s);
        else if (s.accusation_mentions == 0 && s.comment_count >= kNonTrollMinComments)
            negative.push_back(&s);
    }
    auto by_user_id = [](const UserStats* a, const UserStats* b) {
        return a->user_id < b->user_id;
    };
    std::sort(positive.begin(), positive.end(), by_user_id);
    std::sort(negative.begin(), negative.end(), by_user_id);

    UserDatasetResult res;
    res.dataset.pairing_seed = seed;
    res.eligible_positive = positive.size();
    res.eligible_negative = negative.size();
    if (positive.empty()) {
        res.empty_warning = true;
        return res;
    }
    util::Rng rng(seed);
    rng.shuffle(negative);
    if (negative.size() > positive.size()) negative.resize(positive.size());
    std::sort(negative.begin(), negative.end(), by_user_id);

    for (const UserStats* s : positive)
        res.dataset.examples.push_back(detail::merge_user_comments(
            s->user_id, by_user[s->user_id], Label::mentioned_troll));
    for (const UserStats* s : negative)
        res.dataset.examples.push_back(detail::merge_user_comments(
            s->user_id, by_user[s->user_id], Label::non_troll));
    return res;
}

// ---------------------------------------------------------------------------
// Accusation candidate IO.

inline void write_candidates_jsonl(const std::vector<AccusationCandidate>& cands,
                                   const std::string& path) {
    std::string out;
    for (const auto& c : cands) {
        json j = {{"accusation_comment_id", c.accusation_comment_id},
                  {"accused_comment_id", c.accused_comment_id},
                  {"accused_user_id", c.accused_user_id},
                  {"matched_trigger", c.matched_trigger},
                  {"annotator_decisions", c.annotator_decisions}};
        out += j.dump();
        out += '\n';
    }
    util::write_file(path, out);
}

inline std::vector<AccusationCandidate> read_candidates_jsonl(const std::string& path) {
    std::vector<AccusationCandidate> out;
    std::size_t line_no = 0;
    for (const auto& line : util::read_lines(path)) {
        ++line_no;
        if (util::trim(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const std::exception& e) {
            throw util::Error(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        AccusationCandidate c;
        c.accusation_comment_id = j.at("accusation_comment_id").get<std::string>();
        c.accused_comment_id = j.at("accused_comment_id").get<std::string>();
        if (j.contains("accused_user_id"))
            c.accused_user_id = j["accused_user_id"].get<std::string>();
        if (j.contains("matched_trigger"))
            c.matched_trigger = j["matched_trigger"].get<std::string>();
        if (j.contains("annotator_decisions"))
            for (const auto& b : j["annotator_decisions"])
                c.annotator_decisions.push_back(b.get<bool>());
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace trolldet::corpus
