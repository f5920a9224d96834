// Acceptance gate: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Each check carries its own independent oracle (finite
// differences, bisection, exhaustive search, hand-computed values) so a pass
// means the implementation agrees with something other than itself.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "trolldet/corpus.hpp"
#include "trolldet/embeddings.hpp"
#include "trolldet/experiments.hpp"
#include "trolldet/features.hpp"
#include "trolldet/learn.hpp"
#include "trolldet/textproc.hpp"
#include "trolldet/util.hpp"
#include "synth.hpp"

using namespace trolldet;

namespace {

int failures = 0;

void report(const char* name, bool pass, const std::string& detail) {
    std::printf("%s: %s (%s)\n", pass ? "PASS" : "FAIL", name, detail.c_str());
    if (!pass) ++failures;
}

template <typename Fn>
void criterion(const char* name, Fn&& fn) {
    try {
        auto [pass, detail] = fn();
        report(name, pass, detail);
    } catch (const std::exception& e) {
        report(name, false, std::string("exception: ") + e.what());
    }
}

std::string fmt(const char* pattern, double a, double b = 0, double c = 0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

using Outcome = std::pair<bool, std::string>;
using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

// ---------------------------------------------------------------------------

Outcome check_gradient() {
    const auto start = clock_type::now();
    const double kC[] = {0.1, 1.0, 10.0};
    util::Rng rng(101);
    double worst = 0;
    for (int problem = 0; problem < 10; ++problem) {
        const double C = kC[problem % 3];
        std::vector<learn::Example> data;
        for (int i = 0; i < 20; ++i) {
            features::FeatureVector x;
            for (std::size_t j = 0; j < 10; ++j)
                x.entries.emplace_back(j, rng.uniform() * 2 - 1);
            data.emplace_back(std::move(x), rng.below(2) == 0 ? 1 : -1);
        }
        std::vector<double> w(10);
        for (auto& wj : w) wj = rng.uniform() * 4 - 2;
        const double b = rng.uniform() * 2 - 1;
        const auto og = learn::objective_and_gradient(w, b, data, C);
        auto value_at = [&](const std::vector<double>& w2, double b2) {
            return learn::objective_and_gradient(w2, b2, data, C).value;
        };
        for (std::size_t j = 0; j <= w.size(); ++j) {
            const bool is_b = j == w.size();
            const double at = is_b ? b : w[j];
            const double h = 1e-6 * (1.0 + std::abs(at));
            auto w_plus = w, w_minus = w;
            double b_plus = b, b_minus = b;
            (is_b ? b_plus : w_plus[j]) += h;
            (is_b ? b_minus : w_minus[j]) -= h;
            const double fd = (value_at(w_plus, b_plus) - value_at(w_minus, b_minus)) /
                              (2 * h);
            const double analytic = is_b ? og.grad_b : og.grad_w[j];
            worst = std::max(worst, std::abs(analytic - fd) /
                                        std::max({1.0, std::abs(analytic),
                                                  std::abs(fd)}));
        }
    }
    const double elapsed = seconds_since(start);
    return {worst < 1e-5 && elapsed < 5.0,
            fmt("max rel err %.3g, %.2f s", worst, elapsed)};
}

Outcome check_optimizer() {
    features::FeatureVector pos, neg;
    pos.entries.emplace_back(0, 1.0);
    neg.entries.emplace_back(0, -1.0);
    const std::vector<learn::Example> data = {{pos, 1}, {neg, -1}};
    learn::TrainParams params;
    params.C = 1.0;
    params.tol = 1e-10;
    features::FeatureRegistry registry;
    registry.index.emplace(
        features::FeatureKey{features::FeatureGroup::bow_with_stop, "x"},
        registry.n_columns++);
    const auto model =
        learn::train_lr(data, params, registry, features::ScalerStats{{0.0}, {1.0}});

    // independent optimum: bisection on f'(w) = w - 2C / (1 + e^w)
    auto fprime = [&](double w) { return w - 2.0 * params.C / (1.0 + std::exp(w)); };
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (fprime(mid) < 0 ? lo : hi) = mid;
    }
    const double w_star = 0.5 * (lo + hi);
    const double w_err = std::abs(model.weights[0] - w_star);
    const double b_err = std::abs(model.intercept);
    return {model.converged && w_err < 1e-3 && b_err < 1e-6,
            fmt("|w - w*| = %.3g, |b| = %.3g", w_err, b_err)};
}

Outcome check_kappa() {
    auto fill = [](std::vector<std::string>& v, const char* label, int n) {
        for (int i = 0; i < n; ++i) v.push_back(label);
    };
    std::vector<std::string> a, b;
    fill(a, "y", 20), fill(b, "y", 20);  // both yes
    fill(a, "y", 5), fill(b, "n", 5);
    fill(a, "n", 10), fill(b, "y", 10);
    fill(a, "n", 15), fill(b, "n", 15);
    const double k_mixed = corpus::cohen_kappa(a, b);
    const double k_same = corpus::cohen_kappa(a, a);
    const double k_opposite = corpus::cohen_kappa({"1", "0"}, {"0", "1"});
    const bool pass = std::abs(k_mixed - 0.4) <= 1e-9 &&
                      std::abs(k_same - 1.0) <= 1e-9 &&
                      std::abs(k_opposite + 1.0) <= 1e-9;
    return {pass, fmt("kappa = %.12f / %.1f / %.1f", k_mixed, k_same, k_opposite)};
}

double brute_force_two_clusters(const std::vector<std::vector<double>>& pts) {
    const std::size_t n = pts.size(), dim = pts[0].size();
    double best = std::numeric_limits<double>::max();
    for (std::size_t split = 1; split < (std::size_t(1) << n) - 1; ++split) {
        std::vector<double> mean[2] = {std::vector<double>(dim, 0.0),
                                       std::vector<double>(dim, 0.0)};
        std::size_t count[2] = {0, 0};
        for (std::size_t i = 0; i < n; ++i) {
            const int side = int((split >> i) & 1);
            count[side]++;
            for (std::size_t d = 0; d < dim; ++d) mean[side][d] += pts[i][d];
        }
        for (int side : {0, 1})
            for (std::size_t d = 0; d < dim; ++d) mean[side][d] /= double(count[side]);
        double obj = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const int side = int((split >> i) & 1);
            for (std::size_t d = 0; d < dim; ++d) {
                const double diff = pts[i][d] - mean[side][d];
                obj += diff * diff;
            }
        }
        best = std::min(best, obj);
    }
    return best;
}

Outcome check_kmeans() {
    // objective must never increase, over several random datasets
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        util::Rng rng(seed);
        embeddings::EmbeddingTable table(4);
        for (int i = 0; i < 60; ++i) {
            std::vector<double> v(4);
            for (auto& x : v) x = rng.uniform() * 10 - 5;
            table.put("w" + std::to_string(i), std::move(v));
        }
        const auto model = embeddings::kmeans(table, 5, seed * 7, 100, 1e-12);
        for (std::size_t i = 1; i < model.objective_history.size(); ++i)
            if (model.objective_history[i] > model.objective_history[i - 1] + 1e-9)
                return {false, fmt("objective rose at iteration %.0f (seed %.0f)",
                                   double(i), double(seed))};
    }

    // one cluster per point reaches zero
    {
        util::Rng rng(11);
        embeddings::EmbeddingTable table(3);
        for (int i = 0; i < 10; ++i) {
            std::vector<double> v(3);
            for (auto& x : v) x = rng.uniform();
            table.put("p" + std::to_string(i), std::move(v));
        }
        const auto model = embeddings::kmeans(table, 10, 2);
        if (model.objective_history.back() > 1e-12)
            return {false, fmt("k = n objective %.3g != 0",
                               model.objective_history.back())};
    }

    // the four-point example against the exhaustive two-partition optimum
    embeddings::EmbeddingTable table(2);
    const std::vector<std::vector<double>> pts = {{0, 0}, {0, 1}, {10, 10}, {10, 11}};
    for (std::size_t i = 0; i < pts.size(); ++i)
        table.put("p" + std::to_string(i), std::vector<double>(pts[i]));
    const auto model = embeddings::kmeans(table, 2, 77);
    std::vector<std::pair<double, double>> centroids = {
        {model.centroids[0], model.centroids[1]},
        {model.centroids[2], model.centroids[3]}};
    std::sort(centroids.begin(), centroids.end());
    const double centroid_err = std::max(
        {std::abs(centroids[0].first - 0.0), std::abs(centroids[0].second - 0.5),
         std::abs(centroids[1].first - 10.0), std::abs(centroids[1].second - 10.5)});
    const double obj_err =
        std::abs(model.objective_history.back() - brute_force_two_clusters(pts));
    return {centroid_err < 1e-9 && obj_err < 1e-9,
            fmt("centroid err %.3g, objective err %.3g", centroid_err, obj_err)};
}

Outcome check_noise_baseline() {
    const auto dataset = synth::make_noise(1000, 31);
    learn::TrainParams params;
    params.tol = 1e-4;
    const features::GroupMask mask = {features::FeatureGroup::bow_with_stop,
                                      features::FeatureGroup::punct,
                                      features::FeatureGroup::metadata};
    const auto cv = learn::cross_validate(dataset, 10, params, mask, {}, 13);
    const double acc = cv.pooled.accuracy;
    return {acc >= 0.45 && acc <= 0.55, fmt("pooled accuracy %.4f", acc)};
}

Outcome check_planted_signal() {
    const auto start = clock_type::now();
    const auto pc = synth::make_planted(1000, 99, 0.8, 0.5);
    learn::TrainParams params;
    params.tol = 1e-5;

    auto accuracy_with = [&](const features::GroupMask& mask) {
        return learn::cross_validate(pc->dataset, 10, params, mask, pc->res, 29)
            .pooled.accuracy;
    };

    const double all = accuracy_with(features::full_mask());

    auto no_meta = features::full_mask();
    no_meta.erase(features::FeatureGroup::metadata);
    const double without_meta = accuracy_with(no_meta);

    auto no_meta_no_words = no_meta;
    for (features::FeatureGroup g : synth::word_surface_groups())
        no_meta_no_words.erase(g);
    const double stripped = accuracy_with(no_meta_no_words);

    const double elapsed = seconds_since(start);
    const bool pass = all >= 0.90 && (all - without_meta) >= 0.05 &&
                      stripped <= 0.65 && elapsed < 60.0;
    return {pass, fmt("all %.4f, no-metadata %.4f, stripped %.4f", all,
                      without_meta, stripped) +
                      fmt(", %.1f s", elapsed)};
}

Outcome check_ablation_table() {
    const auto pc = synth::make_planted(160, 7);
    experiments::ExperimentConfig config;
    config.dataset_id = "planted";
    config.mode = experiments::Mode::leave_one_out;
    config.folds = 4;
    config.seed = 3;
    config.train.tol = 1e-4;

    const auto table = experiments::run_ablation(pc->dataset, config, pc->res);
    if (table.rows.size() != 18)
        return {false, fmt("%.0f rows, expected 18", double(table.rows.size()))};
    for (std::size_t i = 1; i < table.rows.size(); ++i)
        if (table.rows[i - 1].f < table.rows[i].f)
            return {false, fmt("rows not sorted by F at index %.0f", double(i))};
    const auto rendered = experiments::render_markdown({table});
    const std::string baseline = "| Baseline | 50.00 | 50.00 |\n";
    if (rendered.size() < baseline.size() ||
        rendered.substr(rendered.size() - baseline.size()) != baseline)
        return {false, "baseline row missing from the rendered table"};

    const auto again = experiments::run_ablation(pc->dataset, config, pc->res);
    if (experiments::render_markdown({again}) != rendered)
        return {false, "re-run produced different bytes"};
    return {true, "18 rows, sorted, baseline present, re-run byte-identical"};
}

Outcome check_accusation_detector() {
    const auto replies = synth::make_accusation_replies(400, 55);
    experiments::ExperimentConfig config;
    config.folds = 10;
    config.seed = 19;
    config.train.tol = 1e-4;
    const auto cv = experiments::run_accusation_detector(replies, config);
    return {cv.pooled.f1 >= 0.9, fmt("f1 %.4f", cv.pooled.f1)};
}

Outcome check_feature_examples() {
    // per-token char n-grams
    if (textproc::char_ngrams("trol", 3) != std::vector<std::string>{"tro", "rol"})
        return {false, "char 3-grams of 'trol'"};
    if (textproc::char_ngrams("trol", 4) != std::vector<std::string>{"trol"})
        return {false, "char 4-grams of 'trol'"};
    if (!textproc::char_ngrams("ab", 3).empty())
        return {false, "char 3-grams of a 2-letter token"};

    // short tokens are their own affix at every length
    using textproc::AffixSide;
    if (textproc::affix("manipulation", 3, AffixSide::prefix) != "man" ||
        textproc::affix("manipulation", 4, AffixSide::suffix) != "tion" ||
        textproc::affix("ab", 3, AffixSide::prefix) != "ab" ||
        textproc::affix("ab", 4, AffixSide::suffix) != "ab")
        return {false, "affix extraction"};

    // POS tags expand to themselves plus coarse prefixes at 1/len weight
    corpus::Comment tagged;
    tagged.id = "c";
    tagged.user_id = "u";
    tagged.publication_id = "p";
    tagged.timestamp = *util::parse_iso8601("2015-03-11T12:00:00Z");
    tagged.text = "а б в г д е ж з и к";
    tagged.pos_tags = std::vector<std::string>{"Npmsi", "A", "A", "A", "A",
                                               "A", "A", "A", "A", "A"};
    const auto raw = features::extract_raw(tagged, {features::FeatureGroup::pos}, {});
    for (const char* name : {"Npmsi", "Np", "N"}) {
        auto it = raw.find({features::FeatureGroup::pos, name});
        if (it == raw.end() || std::abs(it->second - 0.1) > 1e-12)
            return {false, std::string("pos expansion of ") + name};
    }

    // the 19:00-21:00 and 6:00-9:00 gaps set neither worktime nor night
    for (const char* iso : {"2015-03-11T19:30:00Z", "2015-03-11T20:59:00Z",
                            "2015-03-11T06:00:00Z", "2015-03-11T08:59:00Z"}) {
        corpus::Comment c = tagged;
        c.timestamp = *util::parse_iso8601(iso);
        const auto m = features::metadata_features(c);
        if (m.worktime != 0 || m.night != 0)
            return {false, std::string("metadata gap at ") + iso};
    }

    // min-max scaling then L2 normalization
    features::FeatureRegistry registry;
    using FG = features::FeatureGroup;
    registry.index = {{{FG::bow_with_stop, "a"}, 0}, {{FG::bow_with_stop, "b"}, 1}};
    registry.n_columns = 2;
    const features::ScalerStats scaler{{0.0, 0.0}, {10.0, 10.0}};
    const features::RawFeatures pipeline_raw = {{{FG::bow_with_stop, "a"}, 3.0},
                                                {{FG::bow_with_stop, "b"}, 4.0}};
    const auto vec = features::transform(pipeline_raw, registry, scaler);
    if (vec.entries.size() != 2 || std::abs(vec.entries[0].second - 0.6) > 1e-12 ||
        std::abs(vec.entries[1].second - 0.8) > 1e-12)
        return {false, "scale-then-normalize pipeline"};

    return {true, "all worked examples reproduced"};
}

Outcome check_no_leakage() {
    corpus::LabeledDataset dataset;
    for (std::size_t i = 0; i < 60; ++i) {
        corpus::Comment c;
        c.id = "t" + std::to_string(i);
        c.user_id = "u" + std::to_string(i);
        c.publication_id = "p0";
        c.timestamp = *util::parse_iso8601("2015-03-10T12:00:00Z");
        c.text = "common tok" + std::to_string(i);
        if (i % 2 == 0) c.text += " signal";
        dataset.examples.push_back({std::move(c),
                                    i % 2 == 0 ? corpus::Label::paid_troll
                                               : corpus::Label::non_troll,
                                    std::nullopt});
    }
    learn::TrainParams params;
    params.tol = 1e-4;
    const features::GroupMask mask = {features::FeatureGroup::bow_with_stop};
    const auto before = learn::cross_validate(dataset, 3, params, mask, {}, 23);

    for (std::size_t i = 0; i < dataset.examples.size(); ++i)
        if (before.assignments[i] == 0)
            dataset.examples[i].comment.text += " mutated" + std::to_string(i);
    const auto after = learn::cross_validate(dataset, 3, params, mask, {}, 23);

    if (after.assignments != before.assignments)
        return {false, "fold assignment changed"};
    if (after.folds[0].registry_hash != before.folds[0].registry_hash ||
        after.folds[0].scaler_hash != before.folds[0].scaler_hash)
        return {false, "fold-0 training statistics moved when only its held-out "
                       "examples changed"};
    if (after.folds[1].registry_hash == before.folds[1].registry_hash)
        return {false, "fold-1 registry ignored its mutated training examples "
                       "(the probe has no teeth)"};
    return {true, "held-out mutations left training-fold registry and scaler intact"};
}

Outcome check_user_thresholds() {
    // users with comments and a spread of accusation mentions
    std::vector<corpus::Comment> comments;
    std::vector<corpus::UserStats> stats;
    int serial = 0;
    auto add_user = [&](const std::string& user, std::int64_t n_comments,
                        std::int64_t mentions) {
        stats.push_back({user, n_comments, mentions, mentions ? 1 : 0});
        for (int k = 0; k < 2; ++k) {
            corpus::Comment c;
            c.id = "c" + std::to_string(serial++);
            c.user_id = user;
            c.publication_id = "p" + std::to_string(serial % 4);
            c.timestamp = *util::parse_iso8601("2015-03-1" + std::to_string(serial % 9) +
                                               "T1" + std::to_string(serial % 9) +
                                               ":00:00Z");
            c.rank = 1 + serial % 5;
            c.thread_size = 12;
            c.text = "дума" + std::to_string(serial) + " още" + std::to_string(k) +
                     (mentions >= 10 ? " нощем" : " сутрин");
            comments.push_back(std::move(c));
        }
    };
    const std::int64_t mention_counts[] = {5, 6, 8, 11, 13, 16, 18, 21, 24, 30};
    for (std::size_t i = 0; i < 10; ++i)
        add_user("accused" + std::to_string(i), 40, mention_counts[i]);
    for (int i = 0; i < 8; ++i) add_user("clean" + std::to_string(i), 150, 0);

    // monotone filtering: a positive at a high threshold stays positive below
    auto positives_at = [&](int threshold) {
        std::set<std::string> ids;
        const auto built = corpus::build_user_dataset(comments, stats, threshold, 1);
        for (const auto& e : built.dataset.examples)
            if (corpus::is_troll(e.label)) ids.insert(e.comment.user_id);
        return ids;
    };
    const auto at5 = positives_at(5), at10 = positives_at(10), at15 = positives_at(15);
    for (const auto& id : at15)
        if (!at10.count(id)) return {false, "user at threshold 15 missing at 10"};
    for (const auto& id : at10)
        if (!at5.count(id)) return {false, "user at threshold 10 missing at 5"};

    experiments::ExperimentConfig config;
    config.dataset_id = "users";
    config.mode = experiments::Mode::user_level;
    config.base_mask = features::parse_mask("bow_with_stop,punct,metadata");
    config.folds = 3;
    config.seed = 9;
    config.train.tol = 1e-3;
    const auto table = experiments::run_user_experiment(comments, stats,
                                                        {5, 10, 15, 20}, config, {});
    if (table.rows.size() != 4)
        return {false, fmt("%.0f threshold rows, expected 4", double(table.rows.size()))};
    const auto rendered = experiments::render_markdown({table});
    for (const char* col : {"| 5 |", "| 10 |", "| 15 |", "| 20 |"})
        if (rendered.find(col) == std::string::npos)
            return {false, std::string("rendered table misses column ") + col};
    return {true, fmt("monotone (%.0f >= %.0f >= %.0f users), 4 columns rendered",
                      double(at5.size()), double(at10.size()), double(at15.size()))};
}

}  // namespace

int main() {
    criterion("gradient matches central finite differences", check_gradient);
    criterion("optimizer reaches the bisection optimum", check_optimizer);
    criterion("kappa matches hand-computed agreement", check_kappa);
    criterion("k-means objective, exact optimum, and centroids", check_kmeans);
    criterion("label-independent baseline stays near chance", check_noise_baseline);
    criterion("planted corpus: full, no-metadata, and stripped masks",
              check_planted_signal);
    criterion("leave-one-out table shape, order, and determinism",
              check_ablation_table);
    criterion("accusation detector on planted trigger replies",
              check_accusation_detector);
    criterion("feature extraction worked examples", check_feature_examples);
    criterion("held-out folds never touch training statistics", check_no_leakage);
    criterion("user thresholds filter monotonically and render fully",
              check_user_thresholds);

    if (failures == 0) {
        std::printf("acceptance: all 11 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d of 11 criteria FAILED\n", failures);
    return 1;
}
