#pragma once

// Experiment drivers over the classifier: leave-one-group-out and
// single-group/combination ablations, the user-level minimum-mentions study,
// and the accusation detector, each emitting ranked two-decimal report
// tables rendered to markdown or CSV.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"
#include "trolldet/corpus.hpp"
#include "trolldet/features.hpp"
#include "trolldet/learn.hpp"
#include "trolldet/util.hpp"

namespace trolldet::experiments {

enum class Mode {
    all,
    leave_one_out,
    single_group,
    group_combo,
    user_level,
    accusation_detector,
};

inline const char* mode_name(Mode m) {
    switch (m) {
        case Mode::all: return "all";
        case Mode::leave_one_out: return "leave-one-out";
        case Mode::single_group: return "single-group";
        case Mode::group_combo: return "group-combo";
        case Mode::user_level: return "user-level";
        case Mode::accusation_detector: return "accusation-detector";
    }
    return "?";
}

inline std::optional<Mode> mode_from_name(std::string_view s) {
    for (Mode m : {Mode::all, Mode::leave_one_out, Mode::single_group,
                   Mode::group_combo, Mode::user_level, Mode::accusation_detector})
        if (s == mode_name(m)) return m;
    // Accept underscore spelling too; config files tend to mix them.
    std::string norm{s};
    std::replace(norm.begin(), norm.end(), '_', '-');
    if (norm != s) return mode_from_name(norm);
    return std::nullopt;
}

struct ComboSpec {
    std::string label;
    features::GroupMask groups;
};

struct ExperimentConfig {
    std::string dataset_id;
    Mode mode = Mode::leave_one_out;
    features::GroupMask base_mask = features::full_mask();
    std::vector<ComboSpec> combos;  // group_combo mode
    std::vector<int> thresholds;    // user_level mode
    int folds = 10;
    std::uint64_t seed = 42;
    learn::TrainParams train;
};

struct ReportRow {
    std::string label;
    double f = 0;    // percent
    double acc = 0;  // percent
    std::optional<double> diff;  // user-level only: vs. majority baseline
    bool empty = false;          // no data at this configuration
    std::uint64_t fold_hash = 0;
};

struct ReportTable {
    std::string title;
    std::vector<ReportRow> rows;
    bool has_baseline = false;  // renders a trailing Baseline 50.00/50.00 row
    bool user_level = false;    // transposed rendering: thresholds as columns
};

// ---------------------------------------------------------------------------
// Two-decimal fixed-point, halves rounded up (away from zero), matching the
// tables' style: 78.056 -> "78.06".

inline std::string format_fixed2(double v) {
    long long scaled = std::llround(v * 100.0);
    std::string sign;
    if (scaled < 0) {
        sign = "-";
        scaled = -scaled;
    }
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%s%lld.%02lld", sign.c_str(), scaled / 100,
                  scaled % 100);
    return buf;
}

// ---------------------------------------------------------------------------

namespace detail {

inline std::string leave_out_label(features::FeatureGroup g) {
    const std::string label = features::group_label(g);
    // A comma inside the group label would read as a list, so parenthesize.
    if (label.find(',') != std::string::npos) return "All - (" + label + ")";
    return "All - " + label;
}

inline ReportRow run_row(const std::string& label,
                         const corpus::LabeledDataset& dataset,
                         const ExperimentConfig& config,
                         const features::GroupMask& mask,
                         const features::FeatureResources& resources) {
    const auto cv = learn::cross_validate(dataset, config.folds, config.train,
                                          mask, resources, config.seed);
    ReportRow row;
    row.label = label;
    row.f = cv.pooled.f1 * 100.0;
    row.acc = cv.pooled.accuracy * 100.0;
    row.fold_hash = cv.fold_hash;
    return row;
}

}  // namespace detail

// Leave-one-out emits one row per excluded group plus the full "All" row;
// single-group emits one row per group alone; group-combo runs the named
// combinations. Every row shares the seed, so fold assignments match across
// rows and score differences isolate the feature change.
inline ReportTable run_ablation(const corpus::LabeledDataset& dataset,
                                const ExperimentConfig& config,
                                const features::FeatureResources& resources) {
    if (!dataset.balanced())
        throw util::Error("run_ablation: dataset must be balanced");
    if (config.mode == Mode::group_combo && config.combos.empty())
        throw util::Error("run_ablation: group-combo mode needs at least one combination");

    ReportTable table;
    table.title = config.dataset_id.empty()
                      ? std::string(mode_name(config.mode))
                      : config.dataset_id + " (" + mode_name(config.mode) + ")";
    table.has_baseline = true;

    switch (config.mode) {
        case Mode::all:
            table.rows.push_back(
                detail::run_row("All", dataset, config, config.base_mask, resources));
            break;
        case Mode::leave_one_out: {
            table.rows.push_back(
                detail::run_row("All", dataset, config, config.base_mask, resources));
            for (features::FeatureGroup g : features::all_groups()) {
                if (!config.base_mask.count(g)) continue;
                features::GroupMask mask = config.base_mask;
                mask.erase(g);
                table.rows.push_back(detail::run_row(detail::leave_out_label(g),
                                                     dataset, config, mask, resources));
            }
            break;
        }
        case Mode::single_group:
            for (features::FeatureGroup g : features::all_groups()) {
                if (!config.base_mask.count(g)) continue;
                table.rows.push_back(detail::run_row(
                    std::string("Only ") + features::group_label(g), dataset, config,
                    features::GroupMask{g}, resources));
            }
            break;
        case Mode::group_combo:
            for (const auto& combo : config.combos)
                table.rows.push_back(detail::run_row(combo.label, dataset, config,
                                                     combo.groups, resources));
            break;
        default:
            throw util::Error("run_ablation: unsupported mode for this driver");
    }
    std::stable_sort(table.rows.begin(), table.rows.end(),
                     [](const ReportRow& a, const ReportRow& b) { return a.f > b.f; });
    return table;
}

// ---------------------------------------------------------------------------
// User-level study: one column per minimum-mentions threshold. Accuracy is
// cross-validated on the balanced user dataset; Diff is reported against the
// majority-class baseline of the eligible (pre-balancing) population.

inline ReportTable run_user_experiment(const std::vector<corpus::Comment>& comments,
                                       const std::vector<corpus::UserStats>& stats,
                                       const std::vector<int>& thresholds,
                                       const ExperimentConfig& config,
                                       const features::FeatureResources& resources) {
    if (thresholds.empty())
        throw util::Error("run_user_experiment: thresholds must be non-empty");
    for (std::size_t i = 1; i < thresholds.size(); ++i)
        if (thresholds[i] <= thresholds[i - 1])
            throw util::Error("run_user_experiment: thresholds must be ascending");

    ReportTable table;
    table.title = config.dataset_id.empty()
                      ? "user-level"
                      : config.dataset_id + " (user-level)";
    table.user_level = true;

    for (int t : thresholds) {
        ReportRow row;
        row.label = std::to_string(t);
        const auto built =
            corpus::build_user_dataset(comments, stats, t, config.seed);
        const std::size_t pos = built.eligible_positive;
        const std::size_t neg = built.eligible_negative;
        const std::size_t n_pos_ds = built.dataset.positives();
        const std::size_t n_neg_ds = built.dataset.negatives();
        if (built.empty_warning || n_pos_ds < 2 || n_neg_ds < 2) {
            row.empty = true;  // too few users at this threshold to validate
            table.rows.push_back(std::move(row));
            continue;
        }
        ExperimentConfig cv_config = config;
        cv_config.folds = std::min<std::size_t>(
            {std::size_t(config.folds), n_pos_ds, n_neg_ds});
        const auto cv =
            learn::cross_validate(built.dataset, cv_config.folds, config.train,
                                  config.base_mask, resources, config.seed);
        row.acc = cv.pooled.accuracy * 100.0;
        row.f = cv.pooled.f1 * 100.0;
        row.fold_hash = cv.fold_hash;
        const double majority = 100.0 * double(std::max(pos, neg)) / double(pos + neg);
        row.diff = row.acc - majority;
        table.rows.push_back(std::move(row));
    }
    return table;
}

// ---------------------------------------------------------------------------
// Accusation detector: plain bag-of-words (with stopwords, so no external
// resources are needed) over reply comments labeled accusation or not.

inline learn::CvResult run_accusation_detector(
    const std::vector<std::pair<corpus::Comment, bool>>& replies,
    const ExperimentConfig& config) {
    corpus::LabeledDataset dataset;
    bool has_pos = false, has_neg = false;
    for (const auto& [comment, is_accusation] : replies) {
        dataset.examples.push_back(
            {comment,
             is_accusation ? corpus::Label::mentioned_troll : corpus::Label::non_troll,
             std::nullopt});
        (is_accusation ? has_pos : has_neg) = true;
    }
    if (!has_pos || !has_neg)
        throw util::Error("run_accusation_detector: both classes must be present");
    const features::FeatureResources no_resources;
    return learn::cross_validate(dataset, config.folds, config.train,
                                 features::GroupMask{features::FeatureGroup::bow_with_stop},
                                 no_resources, config.seed);
}

// ---------------------------------------------------------------------------
// Rendering. Identical inputs produce identical bytes.

inline std::string render_markdown(const std::vector<ReportTable>& tables) {
    std::string out;
    for (const auto& table : tables) {
        if (!out.empty()) out += '\n';
        out += "## " + table.title + "\n\n";
        if (table.user_level) {
            std::string head = "| |", sep = "|---|", acc = "| Acc |", diff = "| Diff |";
            for (const auto& row : table.rows) {
                head += " " + row.label + " |";
                sep += "---|";
                if (row.empty) {
                    acc += " - |";
                    diff += " - |";
                } else {
                    acc += " " + format_fixed2(row.acc) + " |";
                    const double d = row.diff.value_or(0);
                    diff += std::string(" ") + (d >= 0 ? "+" : "") + format_fixed2(d) + " |";
                }
            }
            out += head + "\n" + sep + "\n" + acc + "\n" + diff + "\n";
        } else {
            out += "| Features | F | Acc |\n|---|---|---|\n";
            for (const auto& row : table.rows) {
                out += "| " + row.label + " | " +
                       (row.empty ? "-" : format_fixed2(row.f)) + " | " +
                       (row.empty ? "-" : format_fixed2(row.acc)) + " |\n";
            }
            if (table.has_baseline) out += "| Baseline | 50.00 | 50.00 |\n";
        }
    }
    return out;
}

inline std::string render_csv(const std::vector<ReportTable>& tables) {
    std::string out;
    for (const auto& table : tables) {
        if (!out.empty()) out += '\n';
        out += "# " + table.title + "\n";
        if (table.user_level) {
            out += "label,acc,diff\n";
            for (const auto& row : table.rows) {
                out += row.label + ",";
                if (row.empty) {
                    out += ",";
                } else {
                    out += format_fixed2(row.acc) + "," +
                           format_fixed2(row.diff.value_or(0));
                }
                out += '\n';
            }
        } else {
            out += "label,f,acc\n";
            for (const auto& row : table.rows)
                out += row.label + "," + (row.empty ? "" : format_fixed2(row.f)) + "," +
                       (row.empty ? "" : format_fixed2(row.acc)) + "\n";
            if (table.has_baseline) out += "Baseline,50.00,50.00\n";
        }
    }
    return out;
}

enum class ReportFormat { markdown, csv };

inline void emit_report(const std::vector<ReportTable>& tables, ReportFormat format,
                        const std::string& path) {
    if (tables.empty()) throw util::Error("emit_report: no tables");
    util::write_file(path, format == ReportFormat::markdown ? render_markdown(tables)
                                                            : render_csv(tables));
}

// ---------------------------------------------------------------------------
// Table JSON, so rendering can be re-run without re-running experiments.

inline nlohmann::json table_to_json(const ReportTable& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json r = {{"label", row.label},
                            {"f", row.f},
                            {"acc", row.acc},
                            {"empty", row.empty},
                            {"fold_hash", util::hex64(row.fold_hash)}};
        if (row.diff) r["diff"] = *row.diff;
        rows.push_back(std::move(r));
    }
    return {{"title", table.title},
            {"rows", std::move(rows)},
            {"has_baseline", table.has_baseline},
            {"user_level", table.user_level}};
}

inline ReportTable table_from_json(const nlohmann::json& j) {
    ReportTable table;
    table.title = j.at("title").get<std::string>();
    table.has_baseline = j.value("has_baseline", false);
    table.user_level = j.value("user_level", false);
    for (const auto& r : j.at("rows")) {
        ReportRow row;
        row.label = r.at("label").get<std::string>();
        row.f = r.at("f").get<double>();
        row.acc = r.at("acc").get<double>();
        row.empty = r.value("empty", false);
        if (r.contains("diff")) row.diff = r["diff"].get<double>();
        if (r.contains("fold_hash"))
            row.fold_hash = std::stoull(r["fold_hash"].get<std::string>(), nullptr, 16);
        table.rows.push_back(std::move(row));
    }
    return table;
}

inline void write_tables_json(const std::vector<ReportTable>& tables,
                              const std::string& path) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& t : tables) j.push_back(table_to_json(t));
    util::write_file(path, j.dump(2) + "\n");
}

inline std::vector<ReportTable> read_tables_json(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(util::read_file(path));
    } catch (const std::exception& e) {
        throw util::Error(path + ": " + e.what());
    }
    std::vector<ReportTable> tables;
    for (const auto& t : j) tables.push_back(table_from_json(t));
    return tables;
}

}  // namespace trolldet::experiments
