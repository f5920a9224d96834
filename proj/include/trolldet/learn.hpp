#pragma once

// L2-regularized logistic regression trained from scratch with a
// deterministic full-batch L-BFGS, plus prediction, binary metrics,
// stratified cross-validation, and versioned model files.
//
// Objective over labels y in {-1,+1}:
//   f(w, b) = 0.5 ||w||^2 + C * sum_i log(1 + exp(-y_i (w.x_i + b)))
// The intercept b is not regularized.

#include <bit>
#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"
#include "trolldet/corpus.hpp"
#include "trolldet/features.hpp"
#include "trolldet/util.hpp"

namespace trolldet::learn {

struct TrainParams {
    double C = 1.0;
    double tol = 1e-6;  // gradient-norm stopping threshold
    int max_iter = 1000;
    std::uint64_t seed = 42;

    void validate() const {
        if (!(C > 0)) throw util::Error("TrainParams: C must be > 0");
        if (!(tol > 0)) throw util::Error("TrainParams: tol must be > 0");
        if (max_iter <= 0) throw util::Error("TrainParams: max_iter must be > 0");
    }
};

struct Metrics {
    double accuracy = 0;
    double precision = 0;
    double recall = 0;
    double f1 = 0;
};

struct Model {
    std::vector<double> weights;  // one per registry column
    double intercept = 0;
    features::FeatureRegistry registry;
    features::ScalerStats scaler;
    TrainParams params;
    bool converged = false;
    int iterations = 0;
};

// One training example: transformed vector and label in {-1,+1}.
using Example = std::pair<features::FeatureVector, int>;

inline double sparse_dot(const features::FeatureVector& x,
                         const std::vector<double>& w) {
    double s = 0;
    for (const auto& [col, v] : x.entries)
        if (col < w.size()) s += v * w[col];
    return s;
}

// ---------------------------------------------------------------------------
// Objective and analytic gradient, numerically stable for |margin| far past
// the overflow point of exp.

struct ObjGrad {
    double value = 0;
    std::vector<double> grad_w;
    double grad_b = 0;
};

namespace detail {

// log(1 + exp(-m)) without overflow.
inline double softplus_neg(double m) {
    return m >= 0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
}

// sigma(-m) = 1 / (1 + exp(m)) without overflow.
inline double sigma_neg(double m) {
    if (m >= 0) {
        const double e = std::exp(-m);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(m));
}

}  // namespace detail

inline ObjGrad objective_and_gradient(const std::vector<double>& w, double b,
                                      const std::vector<Example>& data,
                                      double C) {
    ObjGrad out;
    out.grad_w.assign(w.size(), 0.0);
    for (double wj : w) out.value += 0.5 * wj * wj;
    for (std::size_t j = 0; j < w.size(); ++j) out.grad_w[j] = w[j];
    for (const auto& [x, y] : data) {
        const double margin = double(y) * (sparse_dot(x, w) + b);
        out.value += C * detail::softplus_neg(margin);
        // d/dm log(1+exp(-m)) = -sigma(-m)
        const double coeff = -C * detail::sigma_neg(margin) * double(y);
        for (const auto& [col, v] : x.entries) out.grad_w[col] += coeff * v;
        out.grad_b += coeff;
    }
    return out;
}

// ---------------------------------------------------------------------------
// L-BFGS (history 10) with Armijo backtracking. Full batch, no randomness,
// so retraining on identical inputs is bit-reproducible.

inline Model train_lr(const std::vector<Example>& data, const TrainParams& params,
                      features::FeatureRegistry registry,
                      features::ScalerStats scaler) {
    params.validate();
    if (data.size() < 2) throw util::Error("train_lr: need at least 2 examples");
    bool has_pos = false, has_neg = false;
    for (const auto& [x, y] : data) {
        if (y != 1 && y != -1) throw util::Error("train_lr: labels must be +1/-1");
        (y == 1 ? has_pos : has_neg) = true;
        for (const auto& [col, v] : x.entries) {
            if (!std::isfinite(v)) throw util::Error("train_lr: non-finite feature");
            if (col >= registry.n_columns)
                throw util::Error("train_lr: feature column out of registry range");
        }
    }
    if (!has_pos || !has_neg)
        throw util::Error("train_lr: both classes must be present");

    const std::size_t dim = registry.n_columns + 1;  // weights + intercept
    std::vector<double> x(dim, 0.0);                 // current point
    auto eval = [&](const std::vector<double>& point, std::vector<double>& grad) {
        std::vector<double> w(point.begin(), point.end() - 1);
        const ObjGrad og = objective_and_gradient(w, point.back(), data, params.C);
        grad.assign(og.grad_w.begin(), og.grad_w.end());
        grad.push_back(og.grad_b);
        return og.value;
    };

    std::vector<double> grad(dim);
    double fx = eval(x, grad);
    auto norm = [](const std::vector<double>& v) {
        double s = 0;
        for (double a : v) s += a * a;
        return std::sqrt(s);
    };

    const std::size_t history = 10;
    std::vector<std::vector<double>> s_list, y_list;
    std::vector<double> rho_list;

    Model model;
    model.registry = std::move(registry);
    model.scaler = std::move(scaler);
    model.params = params;

    int iter = 0;
    for (; iter < params.max_iter; ++iter) {
        if (norm(grad) <= params.tol) {
            model.converged = true;
            break;
        }
        // Two-loop recursion for the search direction d = -H * grad.
        std::vector<double> d = grad;
        std::vector<double> alpha(s_list.size());
        for (std::size_t i = s_list.size(); i-- > 0;) {
            double si_d = 0;
            for (std::size_t j = 0; j < dim; ++j) si_d += s_list[i][j] * d[j];
            alpha[i] = rho_list[i] * si_d;
            for (std::size_t j = 0; j < dim; ++j) d[j] -= alpha[i] * y_list[i][j];
        }
        if (!s_list.empty()) {
            const auto& s_last = s_list.back();
            const auto& y_last = y_list.back();
            double sy = 0, yy = 0;
            for (std::size_t j = 0; j < dim; ++j) {
                sy += s_last[j] * y_last[j];
                yy += y_last[j] * y_last[j];
            }
            if (yy > 0) {
                const double gamma = sy / yy;
                for (double& dj : d) dj *= gamma;
            }
        }
        for (std::size_t i = 0; i < s_list.size(); ++i) {
            double yi_d = 0;
            for (std::size_t j = 0; j < dim; ++j) yi_d += y_list[i][j] * d[j];
            const double beta = rho_list[i] * yi_d;
            for (std::size_t j = 0; j < dim; ++j)
                d[j] += (alpha[i] - beta) * s_list[i][j];
        }
        for (double& dj : d) dj = -dj;

        double g_dot_d = 0;
        for (std::size_t j = 0; j < dim; ++j) g_dot_d += grad[j] * d[j];
        if (g_dot_d >= 0) {
            // Not a descent direction (can happen after numerical trouble);
            // fall back to steepest descent.
            for (std::size_t j = 0; j < dim; ++j) d[j] = -grad[j];
            g_dot_d = -norm(grad) * norm(grad);
            s_list.clear();
            y_list.clear();
            rho_list.clear();
        }

        // Armijo backtracking from a unit step.
        const double c1 = 1e-4;
        double step = 1.0;
        std::vector<double> x_new(dim), grad_new(dim);
        double fx_new = fx;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t j = 0; j < dim; ++j) x_new[j] = x[j] + step * d[j];
            fx_new = eval(x_new, grad_new);
            if (std::isfinite(fx_new) && fx_new <= fx + c1 * step * g_dot_d) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // step size underflow; gradient check decides below

        std::vector<double> s_vec(dim), y_vec(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            s_vec[j] = x_new[j] - x[j];
            y_vec[j] = grad_new[j] - grad[j];
        }
        double sy = 0;
        for (std::size_t j = 0; j < dim; ++j) sy += s_vec[j] * y_vec[j];
        if (sy > 1e-12) {
            if (s_list.size() == history) {
                s_list.erase(s_list.begin());
                y_list.erase(y_list.begin());
                rho_list.erase(rho_list.begin());
            }
            s_list.push_back(std::move(s_vec));
            y_list.push_back(std::move(y_vec));
            rho_list.push_back(1.0 / sy);
        }
        x = std::move(x_new);
        grad = std::move(grad_new);
        fx = fx_new;
    }
    if (!model.converged) model.converged = norm(grad) <= params.tol;

    model.weights.assign(x.begin(), x.end() - 1);
    model.intercept = x.back();
    model.iterations = iter;
    return model;
}

// ---------------------------------------------------------------------------

struct Prediction {
    int label = 1;  // +1 = troll
    double probability = 0.5;
};

inline double margin(const Model& model, const features::FeatureVector& x) {
    return sparse_dot(x, model.weights) + model.intercept;
}

inline Prediction predict(const Model& model, const features::FeatureVector& x) {
    const double m = margin(model, x);
    Prediction p;
    p.probability = 1.0 - detail::sigma_neg(m);  // sigma(m)
    p.label = p.probability >= 0.5 ? 1 : -1;     // positive at the tie
    return p;
}

inline Metrics compute_metrics(const std::vector<int>& predictions,
                               const std::vector<int>& gold) {
    if (predictions.size() != gold.size() || gold.empty())
        throw util::Error("compute_metrics: length mismatch or empty input");
    std::size_t tp = 0, fp = 0, fn = 0, correct = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
        if (predictions[i] == gold[i]) ++correct;
        if (predictions[i] == 1 && gold[i] == 1) ++tp;
        if (predictions[i] == 1 && gold[i] != 1) ++fp;
        if (predictions[i] != 1 && gold[i] == 1) ++fn;
    }
    Metrics m;
    m.accuracy = double(correct) / double(gold.size());
    m.precision = (tp + fp) ? double(tp) / double(tp + fp) : 0.0;
    m.recall = (tp + fn) ? double(tp) / double(tp + fn) : 0.0;
    m.f1 = (m.precision + m.recall) > 0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    return m;
}

// ---------------------------------------------------------------------------
// Stratified seeded cross-validation. Fold registries and scalers are fit on
// the training split only; pooled metrics are computed over the concatenated
// held-out predictions, so one number covers the whole dataset.

struct FoldResult {
    Metrics metrics;
    std::uint64_t registry_hash = 0;
    std::uint64_t scaler_hash = 0;
    std::size_t n_columns = 0;
};

struct CvResult {
    Metrics pooled;
    std::vector<FoldResult> folds;
    std::vector<int> assignments;  // example index -> fold
    std::uint64_t fold_hash = 0;
    std::vector<int> predictions;  // per example, in dataset order
    std::vector<int> gold;
};

namespace detail {

inline std::uint64_t scaler_hash(const features::ScalerStats& scaler) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (double v : scaler.min_v) h = util::fnv1a64_u64(std::bit_cast<std::uint64_t>(v), h);
    for (double v : scaler.max_v) h = util::fnv1a64_u64(std::bit_cast<std::uint64_t>(v), h);
    return h;
}

inline std::uint64_t registry_hash(const features::FeatureRegistry& registry) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const auto& key : registry.ordered_keys()) {
        h = util::fnv1a64(features::group_name(key.group), h);
        h = util::fnv1a64(":", h);
        h = util::fnv1a64(key.name, h);
        h = util::fnv1a64("\n", h);
    }
    return h;
}

}  // namespace detail

// Assigns examples to folds: positives and negatives are shuffled separately
// with the same generator and dealt round-robin, so class proportions hold
// per fold and the assignment depends only on (seed, labels, folds).
inline std::vector<int> stratified_folds(const std::vector<int>& labels, int folds,
                                         std::uint64_t seed) {
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < labels.size(); ++i)
        (labels[i] == 1 ? pos : neg).push_back(i);
    if (folds < 2) throw util::Error("cross_validate: folds must be >= 2");
    if (std::size_t(folds) > pos.size() || std::size_t(folds) > neg.size())
        throw util::Error("cross_validate: fold count exceeds class size");
    util::Rng rng(seed);
    rng.shuffle(pos);
    rng.shuffle(neg);
    std::vector<int> assignment(labels.size(), -1);
    for (std::size_t i = 0; i < pos.size(); ++i) assignment[pos[i]] = int(i % folds);
    for (std::size_t i = 0; i < neg.size(); ++i) assignment[neg[i]] = int(i % folds);
    return assignment;
}

inline CvResult cross_validate(const corpus::LabeledDataset& dataset, int folds,
                               const TrainParams& params,
                               const features::GroupMask& mask,
                               const features::FeatureResources& resources,
                               std::uint64_t seed) {
    const std::size_t n = dataset.examples.size();
    if (n == 0) throw util::Error("cross_validate: empty dataset");

    std::vector<int> labels(n);
    std::vector<features::RawFeatures> raws(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = corpus::is_troll(dataset.examples[i].label) ? 1 : -1;
        raws[i] = features::extract_raw(dataset.examples[i], mask, resources);
    }

    CvResult result;
    result.gold = labels;
    result.assignments = stratified_folds(labels, folds, seed);
    std::uint64_t fh = 0xcbf29ce484222325ull;
    for (int a : result.assignments) fh = util::fnv1a64_u64(std::uint64_t(a), fh);
    result.fold_hash = fh;

    result.predictions.assign(n, -1);
    for (int f = 0; f < folds; ++f) {
        std::vector<features::RawFeatures> train_raws;
        std::vector<int> train_labels;
        std::vector<std::size_t> held_out;
        for (std::size_t i = 0; i < n; ++i) {
            if (result.assignments[i] == f) {
                held_out.push_back(i);
            } else {
                train_raws.push_back(raws[i]);
                train_labels.push_back(labels[i]);
            }
        }
        auto [registry, scaler] = features::fit_registry(train_raws);
        std::vector<Example> train;
        train.reserve(train_raws.size());
        for (std::size_t i = 0; i < train_raws.size(); ++i)
            train.emplace_back(features::transform(train_raws[i], registry, scaler),
                               train_labels[i]);
        FoldResult fold;
        fold.registry_hash = detail::registry_hash(registry);
        fold.scaler_hash = detail::scaler_hash(scaler);
        fold.n_columns = registry.n_columns;
        const Model model = train_lr(train, params, registry, scaler);
        std::vector<int> fold_pred, fold_gold;
        for (std::size_t i : held_out) {
            const auto x = features::transform(raws[i], model.registry, model.scaler);
            const int label = predict(model, x).label;
            result.predictions[i] = label;
            fold_pred.push_back(label);
            fold_gold.push_back(labels[i]);
        }
        fold.metrics = compute_metrics(fold_pred, fold_gold);
        result.folds.push_back(std::move(fold));
    }
    result.pooled = compute_metrics(result.predictions, result.gold);
    return result;
}

// ---------------------------------------------------------------------------
// Model files: versioned JSON with the registry in column order, scaler
// stats, weights, and an FNV-1a content hash checked on load.

inline constexpr int kModelFormatVersion = 1;

inline nlohmann::json model_to_json(const Model& model) {
    nlohmann::json j;
    j["format_version"] = kModelFormatVersion;
    j["params"] = {{"C", model.params.C},
                   {"tol", model.params.tol},
                   {"max_iter", model.params.max_iter},
                   {"seed", model.params.seed}};
    nlohmann::json reg = nlohmann::json::array();
    for (const auto& key : model.registry.ordered_keys())
        reg.push_back({features::group_name(key.group), key.name});
    j["registry"] = std::move(reg);
    j["scaler"] = {{"min", model.scaler.min_v}, {"max", model.scaler.max_v}};
    j["weights"] = model.weights;
    j["intercept"] = model.intercept;
    j["converged"] = model.converged;
    j["iterations"] = model.iterations;
    j["content_hash"] = util::hex64(util::fnv1a64(j.dump()));
    return j;
}

inline void save_model(const Model& model, const std::string& path) {
    util::write_file(path, model_to_json(model).dump(2) + "\n");
}

inline Model model_from_json(nlohmann::json j, const std::string& origin) {
    if (!j.contains("format_version") ||
        j["format_version"].get<int>() != kModelFormatVersion)
        throw util::Error(origin + ": unsupported model format version");
    if (j.contains("content_hash")) {
        const std::string stored = j["content_hash"].get<std::string>();
        j.erase("content_hash");
        const std::string recomputed = util::hex64(util::fnv1a64(j.dump()));
        if (stored != recomputed)
            throw util::Error(origin + ": content hash mismatch (corrupt model file)");
    }
    Model model;
    const auto& p = j.at("params");
    model.params.C = p.at("C").get<double>();
    model.params.tol = p.at("tol").get<double>();
    model.params.max_iter = p.at("max_iter").get<int>();
    model.params.seed = p.at("seed").get<std::uint64_t>();
    for (const auto& pair : j.at("registry")) {
        const std::string gname = pair.at(0).get<std::string>();
        auto g = features::group_from_name(gname);
        if (!g) throw util::Error(origin + ": unknown feature group '" + gname + "'");
        model.registry.index.emplace(
            features::FeatureKey{*g, pair.at(1).get<std::string>()},
            model.registry.n_columns++);
    }
    model.scaler.min_v = j.at("scaler").at("min").get<std::vector<double>>();
    model.scaler.max_v = j.at("scaler").at("max").get<std::vector<double>>();
    model.weights = j.at("weights").get<std::vector<double>>();
    model.intercept = j.at("intercept").get<double>();
    model.converged = j.value("converged", true);
    model.iterations = j.value("iterations", 0);
    if (model.weights.size() != model.registry.n_columns ||
        model.scaler.min_v.size() != model.registry.n_columns ||
        model.scaler.max_v.size() != model.registry.n_columns)
        throw util::Error(origin + ": weight/scaler/registry size mismatch");
    for (double w : model.weights)
        if (!std::isfinite(w)) throw util::Error(origin + ": non-finite weight");
    return model;
}

inline Model load_model(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(util::read_file(path));
    } catch (const std::exception& e) {
        throw util::Error(path + ": " + e.what());
    }
    return model_from_json(std::move(j), path);
}

}  // namespace trolldet::learn
