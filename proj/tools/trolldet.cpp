// Command-line front end. Each subcommand binds one pipeline stage; every
// written artifact gets a <name>.manifest.json recording the command, the
// FNV-1a hashes of its inputs, the effective configuration, and the seed, so
// re-runs are checkable end to end.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <set>

#include "CLI11.hpp"
#include "trolldet/corpus.hpp"
#include "trolldet/embeddings.hpp"
#include "trolldet/experiments.hpp"
#include "trolldet/features.hpp"
#include "trolldet/learn.hpp"
#include "trolldet/lexicons.hpp"
#include "trolldet/textproc.hpp"
#include "trolldet/util.hpp"

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace trolldet;

constexpr const char* kResourceDirEnv = "TROLLDET_RESOURCE_DIR";

// Missing relative paths are retried under $TROLLDET_RESOURCE_DIR.
std::string resolve_path(const std::string& path) {
    if (path.empty() || fs::exists(path)) return path;
    if (const char* base = std::getenv(kResourceDirEnv)) {
        if (fs::path(path).is_relative()) {
            const fs::path candidate = fs::path(base) / path;
            if (fs::exists(candidate)) return candidate.string();
        }
    }
    return path;
}

void write_manifest(const std::string& artifact_path, const std::string& command,
                    const std::vector<std::string>& inputs, json config,
                    std::uint64_t seed) {
    json manifest;
    manifest["command"] = command;
    json in = json::object();
    for (const auto& p : inputs)
        if (!p.empty()) in[p] = util::hex64(util::fnv1a64_file(p));
    manifest["inputs"] = std::move(in);
    manifest["config"] = std::move(config);
    manifest["seed"] = seed;
    util::write_file(artifact_path + ".manifest.json", manifest.dump(2) + "\n");
}

// Prints 1.0 rather than 1 so scores always read as reals.
std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    std::string s = buf;
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

json metrics_to_json(const learn::Metrics& m) {
    return {{"accuracy", m.accuracy},
            {"precision", m.precision},
            {"recall", m.recall},
            {"f1", m.f1}};
}

// ---------------------------------------------------------------------------
// Feature resources shared by train/evaluate/ablate/user-experiment/score.

struct ResourceOpts {
    std::string stopwords, stem_rules, emoticons, clusters, pos_dict;
    std::string sent_polarity, sent_emotions, sent_opinion;
    std::vector<std::string> bad_words, mentions, gazetteers;
};

void add_resource_flags(CLI::App* sc, ResourceOpts& r) {
    sc->add_option("--stopwords", r.stopwords, "stopword list (bow_no_stop)");
    sc->add_option("--stem-rules", r.stem_rules, "suffix rewrite rules (bow_stems)");
    sc->add_option("--emoticons", r.emoticons, "emoticon patterns (emoticons)");
    sc->add_option("--clusters", r.clusters,
                   "word->cluster TSV from `cluster` (w2v_clusters)");
    sc->add_option("--sentiment-polarity", r.sent_polarity,
                   "polarity lexicon, positive|negative categories (sentiment)");
    sc->add_option("--sentiment-emotions", r.sent_emotions,
                   "emotion-category lexicon (sentiment)");
    sc->add_option("--sentiment-opinion", r.sent_opinion,
                   "opinion lexicon, positive|negative categories (sentiment)");
    sc->add_option("--bad-words", r.bad_words,
                   "offensive-word lexicon, repeatable (bad_words)");
    sc->add_option("--mentions", r.mentions,
                   "mention lexicon, repeatable (mentions)");
    sc->add_option("--gazetteers", r.gazetteers,
                   "named-entity gazetteer, repeatable (ne)");
    sc->add_option("--pos-dict", r.pos_dict,
                   "word<TAB>tag dictionary for comments without pos_tags");
}

struct LoadedResources {
    lexicons::Lexicon stopwords, emoticons;
    textproc::StemRules stem_rules;
    embeddings::ClusterModel clusters;
    lexicons::SentimentResources sentiment;
    std::vector<lexicons::Lexicon> bad_words, mentions, gazetteers;
    std::map<std::string, std::string> pos_dict;
    features::FeatureResources view;
    std::vector<std::string> input_paths;  // resolved, for the manifest
};

lexicons::Lexicon load_lex(const std::string& path, lexicons::LexiconKind kind,
                           std::vector<std::string>& inputs) {
    const std::string resolved = resolve_path(path);
    inputs.push_back(resolved);
    auto result = lexicons::load_lexicon(
        resolved, kind, fs::path(resolved).stem().string());
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    return std::move(result.lexicon);
}

std::unique_ptr<LoadedResources> load_resources(const ResourceOpts& r) {
    auto res = std::make_unique<LoadedResources>();
    auto& in = res->input_paths;
    if (!r.stopwords.empty()) {
        res->stopwords = load_lex(r.stopwords, lexicons::LexiconKind::words, in);
        res->view.stopwords = &res->stopwords;
    }
    if (!r.stem_rules.empty()) {
        const std::string p = resolve_path(r.stem_rules);
        in.push_back(p);
        res->stem_rules = textproc::load_stem_rules(p);
        res->view.stem_rules = &res->stem_rules;
    }
    if (!r.emoticons.empty()) {
        res->emoticons = load_lex(r.emoticons, lexicons::LexiconKind::emoticons, in);
        res->view.emoticons = &res->emoticons;
    }
    if (!r.clusters.empty()) {
        const std::string p = resolve_path(r.clusters);
        in.push_back(p);
        res->clusters = embeddings::load_clusters(p);
        res->view.clusters = &res->clusters;
    }
    const int sentiment_parts = int(!r.sent_polarity.empty()) +
                                int(!r.sent_emotions.empty()) +
                                int(!r.sent_opinion.empty());
    if (sentiment_parts == 3) {
        res->sentiment.polarity =
            load_lex(r.sent_polarity, lexicons::LexiconKind::words, in);
        res->sentiment.emotions =
            load_lex(r.sent_emotions, lexicons::LexiconKind::words, in);
        res->sentiment.opinion =
            load_lex(r.sent_opinion, lexicons::LexiconKind::words, in);
        res->sentiment.validate();
        res->view.sentiment = &res->sentiment;
    } else if (sentiment_parts != 0) {
        throw util::Error(
            "sentiment needs all of --sentiment-polarity, --sentiment-emotions, "
            "--sentiment-opinion");
    }
    for (const auto& p : r.bad_words)
        res->bad_words.push_back(load_lex(p, lexicons::LexiconKind::words, in));
    if (!res->bad_words.empty()) res->view.bad_words = &res->bad_words;
    for (const auto& p : r.mentions)
        res->mentions.push_back(load_lex(p, lexicons::LexiconKind::words, in));
    if (!res->mentions.empty()) res->view.mentions = &res->mentions;
    for (const auto& p : r.gazetteers)
        res->gazetteers.push_back(load_lex(p, lexicons::LexiconKind::words, in));
    if (!res->gazetteers.empty()) res->view.gazetteers = &res->gazetteers;
    if (!r.pos_dict.empty()) {
        const std::string p = resolve_path(r.pos_dict);
        in.push_back(p);
        res->pos_dict = features::load_pos_dictionary(p);
        res->view.pos_dictionary = &res->pos_dict;
    }
    return res;
}

json resource_config(const ResourceOpts& r) {
    return {{"stopwords", r.stopwords},
            {"stem_rules", r.stem_rules},
            {"emoticons", r.emoticons},
            {"clusters", r.clusters},
            {"sentiment_polarity", r.sent_polarity},
            {"sentiment_emotions", r.sent_emotions},
            {"sentiment_opinion", r.sent_opinion},
            {"bad_words", r.bad_words},
            {"mentions", r.mentions},
            {"gazetteers", r.gazetteers},
            {"pos_dict", r.pos_dict}};
}

// "Label=group+group;Label2=..." -> combo specs.
std::vector<experiments::ComboSpec> parse_combos(const std::string& spec) {
    std::vector<experiments::ComboSpec> combos;
    for (auto& part : util::split(spec, ';')) {
        const std::string entry{util::trim(part)};
        if (entry.empty()) continue;
        const auto eq = entry.find('=');
        if (eq == std::string::npos)
            throw util::Error("combo '" + entry + "' must be Label=group+group+...");
        experiments::ComboSpec combo;
        combo.label = std::string{util::trim(entry.substr(0, eq))};
        for (auto& g : util::split(entry.substr(eq + 1), '+')) {
            const std::string name{util::trim(g)};
            if (name.empty()) continue;
            auto group = features::group_from_name(name);
            if (!group)
                throw util::Error("combo '" + combo.label +
                                  "': unknown feature group '" + name + "'");
            combo.groups.insert(*group);
        }
        if (combo.label.empty() || combo.groups.empty())
            throw util::Error("combo '" + entry + "' needs a label and groups");
        combos.push_back(std::move(combo));
    }
    return combos;
}

std::vector<std::pair<corpus::Comment, bool>> label_replies(
    const std::vector<corpus::Comment>& comments,
    const std::vector<corpus::AccusationCandidate>& candidates) {
    // A mined candidate counts as an accusation unless its annotator
    // majority says otherwise.
    std::set<std::string> accusation_ids;
    for (const auto& c : candidates) {
        std::size_t yes = 0;
        for (bool b : c.annotator_decisions) yes += b;
        if (c.annotator_decisions.empty() || 2 * yes >= c.annotator_decisions.size())
            accusation_ids.insert(c.accusation_comment_id);
    }
    std::set<std::string> ids;
    for (const auto& c : comments) ids.insert(c.id);
    std::vector<std::pair<corpus::Comment, bool>> replies;
    for (const auto& c : comments)
        if (c.parent_id && ids.count(*c.parent_id))
            replies.emplace_back(c, accusation_ids.count(c.id) != 0);
    return replies;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"troll comment detection pipeline"};
    app.require_subcommand(1);
    app.set_config("--config", "", "INI file; [subcommand] sections hold flags");
    app.get_config_formatter_base()->valueSeparator('=');

    std::string error_prefix = "error: ";

    // ---- ingest ----
    struct IngestOpts {
        std::string in, out, format = "jsonl";
        bool strict = false;
    };
    auto ingest = std::make_shared<IngestOpts>();
    {
        auto* sc = app.add_subcommand("ingest", "Validate and normalize a comment file");
        sc->add_option("--in", ingest->in, "input comments (jsonl or csv)")->required();
        sc->add_option("--format", ingest->format, "jsonl|csv")
            ->check(CLI::IsMember({"jsonl", "csv"}));
        sc->add_flag("--strict", ingest->strict, "abort on the first malformed record");
        sc->add_option("--out", ingest->out, "output comments.jsonl")->required();
        sc->callback([ingest] {
            const auto format = ingest->format == "csv" ? corpus::IngestFormat::csv
                                                        : corpus::IngestFormat::jsonl;
            const auto result =
                corpus::load_comments(ingest->in, format, ingest->strict);
            for (const auto& issue : result.issues)
                std::cerr << ingest->in << ":" << issue.line << ": skipped: "
                          << issue.message << "\n";
            corpus::write_comments_jsonl(result.comments, ingest->out);
            write_manifest(ingest->out, "ingest", {ingest->in},
                           {{"format", ingest->format}, {"strict", ingest->strict}},
                           0);
            std::cout << result.comments.size() << " comments written, "
                      << result.issues.size() << " skipped\n";
        });
    }

    // ---- mine-accusations ----
    struct MineOpts {
        std::string in, triggers, out;
    };
    auto mine = std::make_shared<MineOpts>();
    {
        auto* sc = app.add_subcommand("mine-accusations",
                                      "Find replies whose text matches trigger stems");
        sc->add_option("--in", mine->in, "comments.jsonl")->required();
        sc->add_option("--triggers", mine->triggers, "trigger stem lexicon")->required();
        sc->add_option("--out", mine->out, "candidates.jsonl")->required();
        sc->callback([mine] {
            const auto comments =
                corpus::load_comments(mine->in, corpus::IngestFormat::jsonl, true);
            const std::string triggers_path = resolve_path(mine->triggers);
            auto triggers = lexicons::load_lexicon(
                triggers_path, lexicons::LexiconKind::words, "triggers");
            for (const auto& w : triggers.warnings) std::cerr << "warning: " << w << "\n";
            const auto result =
                corpus::mine_accusations(comments.comments, triggers.lexicon);
            for (const auto& id : result.dangling_reply_ids)
                std::cerr << "warning: reply " << id
                          << " skipped (parent not in corpus)\n";
            corpus::write_candidates_jsonl(result.candidates, mine->out);
            write_manifest(mine->out, "mine-accusations", {mine->in, triggers_path},
                           {{"triggers", mine->triggers}}, 0);
            std::cout << result.candidates.size() << " candidates, "
                      << result.dangling_reply_ids.size() << " dangling replies\n";
        });
    }

    // ---- kappa ----
    struct KappaOpts {
        std::string a, b;
    };
    auto kappa = std::make_shared<KappaOpts>();
    {
        auto* sc = app.add_subcommand(
            "kappa", "Cohen's kappa between two label files (one label per line)");
        sc->add_option("a", kappa->a, "first label file")->required();
        sc->add_option("b", kappa->b, "second label file")->required();
        sc->callback([kappa] {
            auto read_labels = [](const std::string& path) {
                std::vector<std::string> labels;
                for (const auto& line : util::read_lines(path))
                    if (!util::trim(line).empty())
                        labels.push_back(std::string{util::trim(line)});
                return labels;
            };
            std::cout << format_real(corpus::cohen_kappa(read_labels(kappa->a),
                                                         read_labels(kappa->b)))
                      << "\n";
        });
    }

    // ---- pair ----
    struct PairOpts {
        std::string trolls, comments, stats, accused, out;
        std::uint64_t seed = 42;
    };
    auto pair = std::make_shared<PairOpts>();
    {
        auto* sc = app.add_subcommand(
            "pair", "Draw one same-publication non-troll partner per troll comment");
        sc->add_option("--trolls", pair->trolls,
                       "labeled troll comments (jsonl with label field)")
            ->required();
        sc->add_option("--comments", pair->comments, "full comment pool (jsonl)")
            ->required();
        sc->add_option("--stats", pair->stats, "user_stats.jsonl")->required();
        sc->add_option("--accused", pair->accused,
                       "extra accused user ids, one per line (optional)");
        sc->add_option("--seed", pair->seed, "sampling seed");
        sc->add_option("--out", pair->out, "balanced dataset.jsonl")->required();
        sc->callback([pair] {
            const auto trolls = corpus::read_dataset_jsonl(pair->trolls);
            const auto pool =
                corpus::load_comments(pair->comments, corpus::IngestFormat::jsonl, true);
            const auto stats = corpus::read_user_stats_jsonl(pair->stats);
            std::set<std::string> accused;
            for (const auto& s : stats)
                if (s.accusation_mentions > 0) accused.insert(s.user_id);
            std::vector<std::pair<corpus::Comment, corpus::Label>> troll_pairs;
            for (const auto& e : trolls.examples) {
                if (!corpus::is_troll(e.label))
                    throw util::Error("pair: --trolls contains a non_troll example: " +
                                      e.comment.id);
                accused.insert(e.comment.user_id);
                troll_pairs.emplace_back(e.comment, e.label);
            }
            std::vector<std::string> inputs = {pair->trolls, pair->comments,
                                               pair->stats};
            if (!pair->accused.empty()) {
                inputs.push_back(pair->accused);
                for (const auto& line : util::read_lines(pair->accused, true))
                    if (!util::trim(line).empty())
                        accused.insert(std::string{util::trim(line)});
            }
            const auto dataset = corpus::build_pairs(troll_pairs, pool.comments,
                                                     stats, accused, pair->seed);
            for (const auto& id : dataset.dropped_troll_ids)
                std::cerr << "warning: troll comment " << id
                          << " dropped (no eligible partner)\n";
            corpus::write_dataset_jsonl(dataset, pair->out);
            write_manifest(pair->out, "pair", inputs,
                           {{"accused", pair->accused}}, pair->seed);
            std::cout << dataset.examples.size() << " examples ("
                      << dataset.positives() << " troll / " << dataset.negatives()
                      << " non-troll), " << dataset.dropped_troll_ids.size()
                      << " trolls dropped\n";
        });
    }

    // ---- train-embeddings ----
    struct EmbedOpts {
        std::string in, out;
        embeddings::SkipgramParams params;
    };
    auto embed = std::make_shared<EmbedOpts>();
    {
        auto* sc = app.add_subcommand("train-embeddings",
                                      "Skip-gram word vectors from a text corpus");
        sc->add_option("--in", embed->in, "text corpus, one sentence per line")
            ->required();
        sc->add_option("--dim", embed->params.dim, "vector dimensionality");
        sc->add_option("--window", embed->params.window, "max context window");
        sc->add_option("--negatives", embed->params.negatives, "negative samples");
        sc->add_option("--min-count", embed->params.min_count, "min word frequency");
        sc->add_option("--epochs", embed->params.epochs, "training epochs");
        sc->add_option("--learning-rate", embed->params.learning_rate,
                       "initial learning rate");
        sc->add_option("--seed", embed->params.seed, "rng seed");
        sc->add_option("--out", embed->out, "vector file")->required();
        sc->callback([embed] {
            std::vector<std::vector<std::string>> sentences;
            for (const auto& line : util::read_lines(embed->in)) {
                const auto tl = textproc::tokenize(line);
                if (tl.tokens.empty()) continue;
                std::vector<std::string> sent;
                sent.reserve(tl.tokens.size());
                for (const auto& t : tl.tokens) sent.push_back(utf8::lower(t));
                sentences.push_back(std::move(sent));
            }
            const auto table = embeddings::train_skipgram(sentences, embed->params);
            embeddings::save_vectors(table, embed->out);
            write_manifest(embed->out, "train-embeddings", {embed->in},
                           {{"dim", embed->params.dim},
                            {"window", embed->params.window},
                            {"negatives", embed->params.negatives},
                            {"min_count", embed->params.min_count},
                            {"epochs", embed->params.epochs},
                            {"learning_rate", embed->params.learning_rate}},
                           embed->params.seed);
            std::cout << table.vocab_size() << " vectors of dim " << table.dim()
                      << "\n";
        });
    }

    // ---- cluster ----
    struct ClusterOpts {
        std::string vectors, out;
        std::size_t k = 0;
        std::uint64_t seed = 42;
        int max_iter = 100;
        double tol = 1e-6;
    };
    auto clust = std::make_shared<ClusterOpts>();
    {
        auto* sc = app.add_subcommand("cluster", "K-means over a word-vector file");
        sc->add_option("--vectors", clust->vectors, "vector file")->required();
        sc->add_option("--k", clust->k, "number of clusters")->required();
        sc->add_option("--seed", clust->seed, "rng seed");
        sc->add_option("--max-iter", clust->max_iter, "iteration cap");
        sc->add_option("--tol", clust->tol, "centroid-shift stop threshold");
        sc->add_option("--out", clust->out, "word<TAB>cluster output")->required();
        sc->callback([clust] {
            const std::string vectors_path = resolve_path(clust->vectors);
            auto loaded = embeddings::load_vectors(vectors_path);
            for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << "\n";
            const auto model = embeddings::kmeans(loaded.table, clust->k, clust->seed,
                                                  clust->max_iter, clust->tol);
            embeddings::save_clusters(model, clust->out);
            write_manifest(clust->out, "cluster", {vectors_path},
                           {{"k", clust->k},
                            {"max_iter", clust->max_iter},
                            {"tol", clust->tol}},
                           clust->seed);
            std::cout << model.k << " clusters, " << model.iterations
                      << " iterations, objective "
                      << format_real(model.objective_history.empty()
                                         ? 0.0
                                         : model.objective_history.back())
                      << "\n";
        });
    }

    // ---- train ----
    struct TrainOpts {
        std::string data, out, mask = "all";
        learn::TrainParams params;
        ResourceOpts res;
    };
    auto train = std::make_shared<TrainOpts>();
    {
        auto* sc = app.add_subcommand("train", "Fit a logistic-regression model");
        sc->add_option("--data", train->data, "labeled dataset.jsonl")->required();
        sc->add_option("--mask", train->mask, "comma-separated feature groups or 'all'");
        sc->add_option("--C", train->params.C, "loss weight");
        sc->add_option("--tol", train->params.tol, "gradient-norm stop");
        sc->add_option("--max-iter", train->params.max_iter, "iteration cap");
        sc->add_option("--seed", train->params.seed, "seed recorded in the model");
        add_resource_flags(sc, train->res);
        sc->add_option("--out", train->out, "model.json")->required();
        sc->callback([train] {
            const auto dataset = corpus::read_dataset_jsonl(train->data);
            const auto mask = features::parse_mask(train->mask);
            const auto res = load_resources(train->res);
            std::vector<features::RawFeatures> raws;
            std::vector<int> labels;
            for (const auto& e : dataset.examples) {
                raws.push_back(features::extract_raw(e, mask, res->view));
                labels.push_back(corpus::is_troll(e.label) ? 1 : -1);
            }
            auto [registry, scaler] = features::fit_registry(raws);
            std::vector<learn::Example> examples;
            for (std::size_t i = 0; i < raws.size(); ++i)
                examples.emplace_back(features::transform(raws[i], registry, scaler),
                                      labels[i]);
            const auto model =
                learn::train_lr(examples, train->params, registry, scaler);
            learn::save_model(model, train->out);
            std::vector<int> predicted;
            for (const auto& [x, y] : examples)
                predicted.push_back(learn::predict(model, x).label);
            const auto m = learn::compute_metrics(predicted, labels);
            std::vector<std::string> inputs = {train->data};
            inputs.insert(inputs.end(), res->input_paths.begin(),
                          res->input_paths.end());
            json config = resource_config(train->res);
            config["mask"] = train->mask;
            config["C"] = train->params.C;
            config["tol"] = train->params.tol;
            config["max_iter"] = train->params.max_iter;
            write_manifest(train->out, "train", inputs, config, train->params.seed);
            std::cout << registry.n_columns << " features, "
                      << (model.converged ? "converged" : "iteration cap hit")
                      << " after " << model.iterations
                      << " iterations, train accuracy " << format_real(m.accuracy)
                      << "\n";
            if (!model.converged)
                std::cerr << "warning: optimizer hit max_iter before reaching tol\n";
        });
    }

    // ---- evaluate ----
    struct EvalOpts {
        std::string data, model, out;
        ResourceOpts res;
    };
    auto eval = std::make_shared<EvalOpts>();
    {
        auto* sc = app.add_subcommand("evaluate",
                                      "Metrics of a saved model on a labeled dataset");
        sc->add_option("--data", eval->data, "labeled dataset.jsonl")->required();
        sc->add_option("--model", eval->model, "model.json")->required();
        add_resource_flags(sc, eval->res);
        sc->add_option("--out", eval->out, "metrics.json (optional)");
        sc->callback([eval] {
            const auto dataset = corpus::read_dataset_jsonl(eval->data);
            const auto model = learn::load_model(eval->model);
            const auto mask = model.registry.groups();
            const auto res = load_resources(eval->res);
            std::vector<int> predicted, gold;
            for (const auto& e : dataset.examples) {
                const auto raw = features::extract_raw(e, mask, res->view);
                const auto x =
                    features::transform(raw, model.registry, model.scaler);
                predicted.push_back(learn::predict(model, x).label);
                gold.push_back(corpus::is_troll(e.label) ? 1 : -1);
            }
            const auto metrics = learn::compute_metrics(predicted, gold);
            const json out = metrics_to_json(metrics);
            std::cout << out.dump(2) << "\n";
            if (!eval->out.empty()) {
                util::write_file(eval->out, out.dump(2) + "\n");
                std::vector<std::string> inputs = {eval->data, eval->model};
                inputs.insert(inputs.end(), res->input_paths.begin(),
                              res->input_paths.end());
                write_manifest(eval->out, "evaluate", inputs,
                               resource_config(eval->res), model.params.seed);
            }
        });
    }

    // ---- ablate ----
    struct AblateOpts {
        std::string data, out, md, csv, mode = "leave-one-out", mask = "all";
        std::string combos, title;
        int folds = 10;
        std::uint64_t seed = 42;
        learn::TrainParams params;
        ResourceOpts res;
    };
    auto ablate = std::make_shared<AblateOpts>();
    {
        auto* sc = app.add_subcommand("ablate",
                                      "Cross-validated feature-group experiments");
        sc->add_option("--data", ablate->data, "balanced dataset.jsonl")->required();
        sc->add_option("--mode", ablate->mode, "all|leave-one-out|single-group|group-combo")
            ->check(CLI::IsMember({"all", "leave-one-out", "single-group", "group-combo"}));
        sc->add_option("--mask", ablate->mask, "base feature groups (default all)");
        sc->add_option("--combos", ablate->combos,
                       "group-combo rows: 'Label=group+group;Label2=...'");
        sc->add_option("--title", ablate->title, "table title (default: data file name)");
        sc->add_option("--folds", ablate->folds, "cross-validation folds");
        sc->add_option("--seed", ablate->seed, "fold-assignment seed");
        sc->add_option("--C", ablate->params.C, "loss weight");
        sc->add_option("--tol", ablate->params.tol, "gradient-norm stop");
        sc->add_option("--max-iter", ablate->params.max_iter, "iteration cap");
        add_resource_flags(sc, ablate->res);
        sc->add_option("--out", ablate->out, "tables.json")->required();
        sc->add_option("--md", ablate->md, "also render markdown here");
        sc->add_option("--csv", ablate->csv, "also render csv here");
        sc->callback([ablate] {
            const auto dataset = corpus::read_dataset_jsonl(ablate->data);
            const auto res = load_resources(ablate->res);
            experiments::ExperimentConfig config;
            config.dataset_id = ablate->title.empty()
                                    ? fs::path(ablate->data).stem().string()
                                    : ablate->title;
            const auto mode = experiments::mode_from_name(ablate->mode);
            if (!mode) throw util::Error("unknown mode: " + ablate->mode);
            config.mode = *mode;
            config.base_mask = features::parse_mask(ablate->mask);
            config.combos = parse_combos(ablate->combos);
            config.folds = ablate->folds;
            config.seed = ablate->seed;
            config.train = ablate->params;
            config.train.seed = ablate->seed;
            const auto table = experiments::run_ablation(dataset, config, res->view);
            experiments::write_tables_json({table}, ablate->out);
            if (!ablate->md.empty())
                experiments::emit_report({table}, experiments::ReportFormat::markdown,
                                         ablate->md);
            if (!ablate->csv.empty())
                experiments::emit_report({table}, experiments::ReportFormat::csv,
                                         ablate->csv);
            std::vector<std::string> inputs = {ablate->data};
            inputs.insert(inputs.end(), res->input_paths.begin(),
                          res->input_paths.end());
            json config_json = resource_config(ablate->res);
            config_json["mode"] = ablate->mode;
            config_json["mask"] = ablate->mask;
            config_json["combos"] = ablate->combos;
            config_json["folds"] = ablate->folds;
            config_json["C"] = ablate->params.C;
            write_manifest(ablate->out, "ablate", inputs, config_json, ablate->seed);
            std::cout << table.rows.size() << " rows -> " << ablate->out << "\n";
        });
    }

    // ---- user-experiment ----
    struct UserOpts {
        std::string comments, stats, out, md, csv, mask = "all", title;
        std::vector<int> thresholds = {5, 10, 15, 20};
        int folds = 10;
        std::uint64_t seed = 42;
        learn::TrainParams params;
        ResourceOpts res;
    };
    auto user = std::make_shared<UserOpts>();
    {
        auto* sc = app.add_subcommand(
            "user-experiment", "Accused-user classification by minimum mentions");
        sc->add_option("--comments", user->comments, "comments.jsonl")->required();
        sc->add_option("--stats", user->stats, "user_stats.jsonl")->required();
        sc->add_option("--thresholds", user->thresholds,
                       "ascending minimum-mention thresholds")
            ->delimiter(',');
        sc->add_option("--mask", user->mask, "feature groups (default all)");
        sc->add_option("--title", user->title, "table title");
        sc->add_option("--folds", user->folds, "cross-validation folds");
        sc->add_option("--seed", user->seed, "seed");
        sc->add_option("--C", user->params.C, "loss weight");
        sc->add_option("--tol", user->params.tol, "gradient-norm stop");
        sc->add_option("--max-iter", user->params.max_iter, "iteration cap");
        add_resource_flags(sc, user->res);
        sc->add_option("--out", user->out, "tables.json")->required();
        sc->add_option("--md", user->md, "also render markdown here");
        sc->add_option("--csv", user->csv, "also render csv here");
        sc->callback([user] {
            const auto comments =
                corpus::load_comments(user->comments, corpus::IngestFormat::jsonl, true);
            const auto stats = corpus::read_user_stats_jsonl(user->stats);
            const auto res = load_resources(user->res);
            experiments::ExperimentConfig config;
            config.dataset_id = user->title.empty()
                                    ? fs::path(user->comments).stem().string()
                                    : user->title;
            config.mode = experiments::Mode::user_level;
            config.base_mask = features::parse_mask(user->mask);
            config.folds = user->folds;
            config.seed = user->seed;
            config.train = user->params;
            config.train.seed = user->seed;
            const auto table = experiments::run_user_experiment(
                comments.comments, stats, user->thresholds, config, res->view);
            for (const auto& row : table.rows)
                if (row.empty)
                    std::cerr << "warning: threshold " << row.label
                              << " has too few users; row left empty\n";
            experiments::write_tables_json({table}, user->out);
            if (!user->md.empty())
                experiments::emit_report({table}, experiments::ReportFormat::markdown,
                                         user->md);
            if (!user->csv.empty())
                experiments::emit_report({table}, experiments::ReportFormat::csv,
                                         user->csv);
            std::vector<std::string> inputs = {user->comments, user->stats};
            inputs.insert(inputs.end(), res->input_paths.begin(),
                          res->input_paths.end());
            json config_json = resource_config(user->res);
            config_json["thresholds"] = user->thresholds;
            config_json["folds"] = user->folds;
            config_json["mask"] = user->mask;
            write_manifest(user->out, "user-experiment", inputs, config_json,
                           user->seed);
            std::cout << table.rows.size() << " thresholds -> " << user->out << "\n";
        });
    }

    // ---- accusation-detector ----
    struct AccuOpts {
        std::string comments, candidates, out;
        int folds = 10;
        std::uint64_t seed = 42;
        learn::TrainParams params;
    };
    auto accu = std::make_shared<AccuOpts>();
    {
        auto* sc = app.add_subcommand(
            "accusation-detector",
            "Cross-validated bag-of-words detector for accusation replies");
        sc->add_option("--comments", accu->comments, "comments.jsonl")->required();
        sc->add_option("--candidates", accu->candidates, "candidates.jsonl")->required();
        sc->add_option("--folds", accu->folds, "cross-validation folds");
        sc->add_option("--seed", accu->seed, "seed");
        sc->add_option("--C", accu->params.C, "loss weight");
        sc->add_option("--tol", accu->params.tol, "gradient-norm stop");
        sc->add_option("--max-iter", accu->params.max_iter, "iteration cap");
        sc->add_option("--out", accu->out, "metrics.json (optional)");
        sc->callback([accu] {
            const auto comments =
                corpus::load_comments(accu->comments, corpus::IngestFormat::jsonl, true);
            const auto candidates = corpus::read_candidates_jsonl(accu->candidates);
            const auto replies = label_replies(comments.comments, candidates);
            experiments::ExperimentConfig config;
            config.folds = accu->folds;
            config.seed = accu->seed;
            config.train = accu->params;
            config.train.seed = accu->seed;
            const auto cv = experiments::run_accusation_detector(replies, config);
            const json out = metrics_to_json(cv.pooled);
            std::cout << out.dump(2) << "\n";
            if (!accu->out.empty()) {
                util::write_file(accu->out, out.dump(2) + "\n");
                write_manifest(accu->out, "accusation-detector",
                               {accu->comments, accu->candidates},
                               {{"folds", accu->folds}}, accu->seed);
            }
        });
    }

    // ---- report ----
    struct ReportOpts {
        std::string tables, format = "markdown", out;
    };
    auto report = std::make_shared<ReportOpts>();
    {
        auto* sc = app.add_subcommand("report", "Render saved tables.json");
        sc->add_option("--tables", report->tables, "tables.json")->required();
        sc->add_option("--format", report->format, "markdown|csv")
            ->check(CLI::IsMember({"markdown", "csv"}));
        sc->add_option("--out", report->out, "output file")->required();
        sc->callback([report] {
            const auto tables = experiments::read_tables_json(report->tables);
            experiments::emit_report(tables,
                                     report->format == "csv"
                                         ? experiments::ReportFormat::csv
                                         : experiments::ReportFormat::markdown,
                                     report->out);
            write_manifest(report->out, "report", {report->tables},
                           {{"format", report->format}}, 0);
            std::cout << tables.size() << " tables -> " << report->out << "\n";
        });
    }

    // ---- score ----
    struct ScoreOpts {
        std::string in, model, out, dump;
        ResourceOpts res;
    };
    auto score = std::make_shared<ScoreOpts>();
    {
        auto* sc = app.add_subcommand("score",
                                      "Append model probabilities to comments");
        sc->add_option("--model", score->model, "model.json")->required();
        sc->add_option("--in", score->in, "comments.jsonl")->required();
        add_resource_flags(sc, score->res);
        sc->add_option("--out", score->out, "scored jsonl")->required();
        sc->add_option("--dump-features", score->dump,
                       "also write raw features as jsonl here");
        sc->callback([score] {
            const auto model = learn::load_model(score->model);
            const auto mask = model.registry.groups();
            const auto res = load_resources(score->res);
            const auto loaded =
                corpus::load_comments(score->in, corpus::IngestFormat::jsonl, true);
            std::string out, dump;
            for (const auto& c : loaded.comments) {
                const auto raw = features::extract_raw(c, mask, res->view, nullptr);
                if (!score->dump.empty()) dump += features::dump_raw_jsonl(c.id, raw);
                const auto x = features::transform(raw, model.registry, model.scaler);
                const auto p = learn::predict(model, x);
                json j = corpus::comment_to_json(c);
                j["probability"] = p.probability;
                j["predicted_label"] = p.label == 1 ? "troll" : "non_troll";
                out += j.dump();
                out += '\n';
            }
            util::write_file(score->out, out);
            if (!score->dump.empty()) util::write_file(score->dump, dump);
            std::vector<std::string> inputs = {score->in, score->model};
            inputs.insert(inputs.end(), res->input_paths.begin(),
                          res->input_paths.end());
            write_manifest(score->out, "score", inputs, resource_config(score->res),
                           model.params.seed);
            std::cout << loaded.comments.size() << " comments scored\n";
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << error_prefix << e.what() << "\n";
        return 1;
    }
    return 0;
}
