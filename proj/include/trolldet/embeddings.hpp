#pragma once

// Word embeddings at desk scale: a skip-gram negative-sampling trainer, a
// text vector-file loader, k-means clustering with k-means++ seeding, and
// cosine neighbor lookup.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "trolldet/util.hpp"

namespace trolldet::embeddings {

class EmbeddingTable {
  public:
    EmbeddingTable() = default;
    EmbeddingTable(std::size_t dim) : dim_(dim) {}

    std::size_t dim() const { return dim_; }
    std::size_t vocab_size() const { return words_.size(); }

    // Insertion keeps first-come index order; duplicate words overwrite.
    void put(const std::string& word, std::vector<double> vec) {
        if (vec.size() != dim_) throw util::Error("vector dim mismatch for " + word);
        auto it = index_.find(word);
        if (it != index_.end()) {
            std::copy(vec.begin(), vec.end(), data_.begin() + it->second * dim_);
            return;
        }
        index_.emplace(word, words_.size());
        words_.push_back(word);
        data_.insert(data_.end(), vec.begin(), vec.end());
    }

    bool contains(const std::string& word) const { return index_.count(word) > 0; }

    const double* vector(const std::string& word) const {
        auto it = index_.find(word);
        if (it == index_.end()) throw util::Error("word not in vocabulary: " + word);
        return data_.data() + it->second * dim_;
    }

    const double* vector(std::size_t i) const { return data_.data() + i * dim_; }
    const std::string& word(std::size_t i) const { return words_[i]; }
    const std::vector<std::string>& words() const { return words_; }

  private:
    std::size_t dim_ = 0;
    std::map<std::string, std::size_t> index_;
    std::vector<std::string> words_;
    std::vector<double> data_;  // row-major vocab_size x dim
};

inline double cosine(const double* a, const double* b, std::size_t dim) {
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < dim; ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0 || nb == 0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

// ---------------------------------------------------------------------------
// Skip-gram with negative sampling, single-threaded and deterministic for a
// fixed seed. Hyperparameter defaults are desk-scale; all are configurable.

struct SkipgramParams {
    std::size_t dim = 100;
    int window = 5;
    int negatives = 5;
    int min_count = 5;
    int epochs = 1;
    double learning_rate = 0.025;
    std::uint64_t seed = 1;
};

inline EmbeddingTable train_skipgram(
    const std::vector<std::vector<std::string>>& sentences,
    const SkipgramParams& params) {
    if (params.dim < 1 || params.window < 1 || params.negatives < 1 ||
        params.min_count < 1 || params.epochs < 1 || params.learning_rate <= 0)
        throw util::Error("train_skipgram: params must be positive");

    // Vocabulary: count, filter by min_count, order by (-count, word) so the
    // index layout is deterministic.
    std::map<std::string, std::int64_t> counts;
    for (const auto& s : sentences)
        for (const auto& w : s) counts[w]++;
    std::vector<std::pair<std::string, std::int64_t>> vocab;
    for (const auto& [w, c] : counts)
        if (c >= params.min_count) vocab.emplace_back(w, c);
    std::sort(vocab.begin(), vocab.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    std::map<std::string, std::size_t> word_id;
    for (std::size_t i = 0; i < vocab.size(); ++i) word_id.emplace(vocab[i].first, i);

    // Sentences mapped to ids, dropping out-of-vocabulary tokens.
    std::vector<std::vector<std::size_t>> corpus;
    std::size_t total_tokens = 0;
    bool trainable = false;
    for (const auto& s : sentences) {
        std::vector<std::size_t> ids;
        for (const auto& w : s) {
            auto it = word_id.find(w);
            if (it != word_id.end()) ids.push_back(it->second);
        }
        total_tokens += ids.size();
        if (ids.size() >= 2) trainable = true;
        if (!ids.empty()) corpus.push_back(std::move(ids));
    }
    if (!trainable)
        throw util::Error("train_skipgram: corpus smaller than one window");

    const std::size_t V = vocab.size(), D = params.dim;

    // Negative-sampling table over unigram^0.75.
    const std::size_t table_size = std::max<std::size_t>(V, 1u << 17);
    std::vector<std::uint32_t> neg_table(table_size);
    {
        double z = 0;
        for (const auto& [w, c] : vocab) z += std::pow(double(c), 0.75);
        std::size_t i = 0;
        double cum = std::pow(double(vocab[0].second), 0.75) / z;
        for (std::size_t t = 0; t < table_size; ++t) {
            neg_table[t] = static_cast<std::uint32_t>(i);
            if (double(t + 1) / double(table_size) > cum && i + 1 < V) {
                ++i;
                cum += std::pow(double(vocab[i].second), 0.75) / z;
            }
        }
    }

    util::Rng rng(params.seed);
    std::vector<double> in(V * D), out(V * D, 0.0);
    for (auto& v : in) v = (rng.uniform() - 0.5) / double(D);

    auto sigmoid = [](double x) {
        if (x > 30) return 1.0;
        if (x < -30) return 0.0;
        return 1.0 / (1.0 + std::exp(-x));
    };

    const std::int64_t total_steps =
        std::int64_t(params.epochs) * std::int64_t(total_tokens);
    std::int64_t step = 0;
    std::vector<double> grad_center(D);
    for (int epoch = 0; epoch < params.epochs; ++epoch) {
        for (const auto& sent : corpus) {
            for (std::size_t pos = 0; pos < sent.size(); ++pos, ++step) {
                const double alpha =
                    params.learning_rate *
                    std::max(1e-4, 1.0 - double(step) / double(total_steps));
                const std::size_t center = sent[pos];
                const int b = 1 + static_cast<int>(rng.below(params.window));
                for (int off = -b; off <= b; ++off) {
                    if (off == 0) continue;
                    const std::int64_t cpos = std::int64_t(pos) + off;
                    if (cpos < 0 || cpos >= std::int64_t(sent.size())) continue;
                    const std::size_t context = sent[cpos];
                    double* vc = in.data() + center * D;
                    std::fill(grad_center.begin(), grad_center.end(), 0.0);
                    for (int k = 0; k <= params.negatives; ++k) {
                        std::size_t target;
                        double label;
                        if (k == 0) {
                            target = context;
                            label = 1.0;
                        } else {
                            target = neg_table[rng.below(table_size)];
                            if (target == context) continue;
                            label = 0.0;
                        }
                        double* vt = out.data() + target * D;
                        double dot = 0;
                        for (std::size_t d = 0; d < D; ++d) dot += vc[d] * vt[d];
                        const double g = alpha * (label - sigmoid(dot));
                        for (std::size_t d = 0; d < D; ++d) {
                            grad_center[d] += g * vt[d];
                            vt[d] += g * vc[d];
                        }
                    }
                    for (std::size_t d = 0; d < D; ++d) vc[d] += grad_center[d];
                }
            }
        }
    }

    EmbeddingTable table(D);
    for (std::size_t i = 0; i < V; ++i) {
        std::vector<double> v(in.begin() + i * D, in.begin() + (i + 1) * D);
        table.put(vocab[i].first, std::move(v));
    }
    return table;
}

// ---------------------------------------------------------------------------
// Vector file IO: `word v1 v2 ... vd` per line, optional `vocab dim` header.

struct VectorLoadResult {
    EmbeddingTable table;
    std::vector<std::string> warnings;
};

inline VectorLoadResult load_vectors(const std::string& path) {
    std::ifstream input(path);
    if (!input) throw util::Error("cannot open vector file: " + path);
    VectorLoadResult res;
    std::string line;
    std::size_t line_no = 0, dim = 0;
    bool first_data_row = true;
    while (std::getline(input, line)) {
        ++line_no;
        if (util::trim(line).empty()) continue;
        std::istringstream ss(line);
        std::string word;
        ss >> word;
        std::vector<double> vals;
        double v;
        while (ss >> v) vals.push_back(v);
        if (line_no == 1 && vals.size() == 1) {
            // `vocab dim` header: two integers, the first parsed as the word
            const char* p = word.c_str();
            char* end = nullptr;
            std::strtol(p, &end, 10);
            if (end && *end == '\0') continue;
        }
        if (first_data_row) {
            dim = vals.size();
            if (dim == 0)
                throw util::Error(path + ":" + std::to_string(line_no) +
                                  ": no vector values");
            res.table = EmbeddingTable(dim);
            first_data_row = false;
        }
        if (vals.size() != dim)
            throw util::Error(path + ":" + std::to_string(line_no) + ": row '" +
                              word + "' has " + std::to_string(vals.size()) +
                              " values, expected " + std::to_string(dim));
        if (res.table.contains(word))
            res.warnings.push_back("duplicate word '" + word + "' at line " +
                                   std::to_string(line_no) + ", last wins");
        res.table.put(word, std::move(vals));
    }
    if (res.table.vocab_size() == 0) throw util::Error("empty vector file: " + path);
    return res;
}

inline void save_vectors(const EmbeddingTable& table, const std::string& path) {
    std::ostringstream out;
    out << table.vocab_size() << ' ' << table.dim() << '\n';
    out.precision(17);
    for (std::size_t i = 0; i < table.vocab_size(); ++i) {
        out << table.word(i);
        const double* v = table.vector(i);
        for (std::size_t d = 0; d < table.dim(); ++d) out << ' ' << v[d];
        out << '\n';
    }
    util::write_file(path, out.str());
}

// ---------------------------------------------------------------------------
// k-means over the embedding vocabulary: seeded k-means++ initialization,
// Lloyd iterations, farthest-point reseeding of empty clusters. The
// objective history (within-cluster sum of squares after each assignment)
// is recorded so monotonicity is checkable.

struct ClusterModel {
    std::size_t k = 0;
    std::size_t dim = 0;
    std::vector<double> centroids;  // row-major k x dim
    std::map<std::string, std::uint32_t> assignment;
    std::vector<double> objective_history;
    int iterations = 0;
};

namespace detail {
inline double sq_dist(const double* a, const double* b, std::size_t dim) {
    double s = 0;
    for (std::size_t i = 0; i < dim; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}
}  // namespace detail

inline ClusterModel kmeans(const EmbeddingTable& table, std::size_t k,
                           std::uint64_t seed, int max_iter = 100,
                           double tol = 1e-6) {
    const std::size_t n = table.vocab_size(), dim = table.dim();
    if (k < 1 || k > n)
        throw util::Error("kmeans: k must be in [1, vocab_size], got " +
                          std::to_string(k));

    ClusterModel model;
    model.k = k;
    model.dim = dim;
    model.centroids.resize(k * dim);
    util::Rng rng(seed);

    // k-means++ seeding: first centroid uniform, then D^2-weighted picks.
    std::vector<double> d2(n, std::numeric_limits<double>::max());
    {
        std::size_t first = rng.below(n);
        std::copy(table.vector(first), table.vector(first) + dim,
                  model.centroids.begin());
        for (std::size_t c = 1; c < k; ++c) {
            double total = 0;
            const double* prev = model.centroids.data() + (c - 1) * dim;
            for (std::size_t i = 0; i < n; ++i) {
                d2[i] = std::min(d2[i], detail::sq_dist(table.vector(i), prev, dim));
                total += d2[i];
            }
            std::size_t pick = 0;
            if (total > 0) {
                const double r = rng.uniform() * total;
                double cum = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    cum += d2[i];
                    if (cum >= r) {
                        pick = i;
                        break;
                    }
                }
            } else {
                pick = rng.below(n);
            }
            std::copy(table.vector(pick), table.vector(pick) + dim,
                      model.centroids.begin() + c * dim);
        }
    }

    std::vector<std::uint32_t> assign(n, 0);
    std::vector<double> sums(k * dim);
    std::vector<std::size_t> sizes(k);
    for (int iter = 0; iter < max_iter; ++iter) {
        // Assignment step; ties go to the lowest cluster index.
        double objective = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::max();
            std::uint32_t best_c = 0;
            for (std::size_t c = 0; c < k; ++c) {
                const double d = detail::sq_dist(
                    table.vector(i), model.centroids.data() + c * dim, dim);
                if (d < best) {
                    best = d;
                    best_c = static_cast<std::uint32_t>(c);
                }
            }
            assign[i] = best_c;
            objective += best;
        }
        model.objective_history.push_back(objective);
        model.iterations = iter + 1;

        // Update step: means of assigned points.
        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(sizes.begin(), sizes.end(), 0u);
        for (std::size_t i = 0; i < n; ++i) {
            const double* v = table.vector(i);
            double* s = sums.data() + assign[i] * dim;
            for (std::size_t d = 0; d < dim; ++d) s[d] += v[d];
            sizes[assign[i]]++;
        }
        double shift = 0;
        for (std::size_t c = 0; c < k; ++c) {
            double* centroid = model.centroids.data() + c * dim;
            if (sizes[c] == 0) {
                // Reseed an empty cluster to the point farthest from its
                // assigned centroid; that point's cost drops to zero.
                std::size_t far = 0;
                double far_d = -1;
                for (std::size_t i = 0; i < n; ++i) {
                    const double d = detail::sq_dist(
                        table.vector(i),
                        model.centroids.data() + assign[i] * dim, dim);
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                shift += far_d;
                std::copy(table.vector(far), table.vector(far) + dim, centroid);
                continue;
            }
            const double* s = sums.data() + c * dim;
            for (std::size_t d = 0; d < dim; ++d) {
                const double nv = s[d] / double(sizes[c]);
                const double diff = nv - centroid[d];
                shift += diff * diff;
                centroid[d] = nv;
            }
        }
        if (shift < tol) {
            // Final re-assignment so every word ends on its nearest centroid.
            for (std::size_t i = 0; i < n; ++i) {
                double best = std::numeric_limits<double>::max();
                std::uint32_t best_c = 0;
                for (std::size_t c = 0; c < k; ++c) {
                    const double d = detail::sq_dist(
                        table.vector(i), model.centroids.data() + c * dim, dim);
                    if (d < best) {
                        best = d;
                        best_c = static_cast<std::uint32_t>(c);
                    }
                }
                assign[i] = best_c;
            }
            break;
        }
    }
    for (std::size_t i = 0; i < n; ++i) model.assignment[table.word(i)] = assign[i];
    return model;
}

// Top-k neighbors by cosine similarity, excluding the query word; ties break
// lexicographically.
inline std::vector<std::pair<std::string, double>> nearest(
    const EmbeddingTable& table, const std::string& word, std::size_t k) {
    if (!table.contains(word))
        throw util::Error("nearest: word not in vocabulary: " + word);
    const double* q = table.vector(word);
    std::vector<std::pair<std::string, double>> all;
    all.reserve(table.vocab_size());
    for (std::size_t i = 0; i < table.vocab_size(); ++i) {
        if (table.word(i) == word) continue;
        all.emplace_back(table.word(i), cosine(q, table.vector(i), table.dim()));
    }
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    if (all.size() > k) all.resize(k);
    return all;
}

// ---------------------------------------------------------------------------
// ClusterModel IO: `word<TAB>cluster_id` lines plus a `.centroids` sidecar
// holding `k dim` and one centroid per line.

inline void save_clusters(const ClusterModel& model, const std::string& path) {
    std::ostringstream out;
    for (const auto& [word, cid] : model.assignment)
        out << word << '\t' << cid << '\n';
    util::write_file(path, out.str());
    std::ostringstream cent;
    cent.precision(17);
    cent << model.k << ' ' << model.dim << '\n';
    for (std::size_t c = 0; c < model.k; ++c) {
        for (std::size_t d = 0; d < model.dim; ++d) {
            if (d) cent << ' ';
            cent << model.centroids[c * model.dim + d];
        }
        cent << '\n';
    }
    util::write_file(path + ".centroids", cent.str());
}

inline ClusterModel load_clusters(const std::string& path) {
    ClusterModel model;
    std::uint32_t max_cid = 0;
    for (const auto& line : util::read_lines(path, /*skip_comments=*/true)) {
        auto cols = util::split(line, '\t');
        if (cols.size() != 2)
            throw util::Error("malformed cluster line: " + line);
        const std::uint32_t cid =
            static_cast<std::uint32_t>(std::stoul(cols[1]));
        model.assignment[cols[0]] = cid;
        max_cid = std::max(max_cid, cid);
    }
    if (model.assignment.empty())
        throw util::Error("empty cluster file: " + path);
    model.k = max_cid + 1;
    std::ifstream cent(path + ".centroids");
    if (cent) {
        std::string header;
        std::getline(cent, header);
        std::istringstream hs(header);
        hs >> model.k >> model.dim;
        model.centroids.resize(model.k * model.dim);
        for (std::size_t i = 0; i < model.k * model.dim; ++i)
            cent >> model.centroids[i];
    }
    return model;
}

}  // namespace trolldet::embeddings
