#include "crosslex/skipgram.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

namespace crosslex {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log(sigmoid(x)) without overflow for large |x|
double log_sigmoid(double x) {
  if (x >= 0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

struct Vocab {
  std::vector<std::string> words;            // sorted: count desc, word asc
  std::vector<std::int64_t> counts;
  std::unordered_map<std::string, int> ids;
  std::int64_t total = 0;
};

Vocab build_vocab(const TokenizedCorpus& corpus, int min_count) {
  Vocab v;
  std::vector<std::pair<std::string, std::int64_t>> kept;
  for (const auto& [word, count] : corpus.token_counts) {
    if (count >= min_count) kept.emplace_back(word, count);
  }
  if (kept.empty()) {
    throw std::runtime_error("skip-gram training: no token reaches min_count=" +
                             std::to_string(min_count));
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  v.words.reserve(kept.size());
  v.counts.reserve(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    v.words.push_back(kept[i].first);
    v.counts.push_back(kept[i].second);
    v.ids.emplace(kept[i].first, static_cast<int>(i));
    v.total += kept[i].second;
  }
  return v;
}

// Uniform double in [0,1) from the raw engine; avoids distribution objects so
// the byte stream is pinned by the engine alone.
double next_real(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t next_below(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

class NegativeSampler {
 public:
  explicit NegativeSampler(const std::vector<std::int64_t>& counts) {
    cumulative_.reserve(counts.size());
    double acc = 0.0;
    for (auto c : counts) {
      acc += std::pow(static_cast<double>(c), 0.75);
      cumulative_.push_back(acc);
    }
  }

  int sample(std::mt19937_64& rng) const {
    const double r = next_real(rng) * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
    if (it == cumulative_.end()) --it;
    return static_cast<int>(it - cumulative_.begin());
  }

 private:
  std::vector<double> cumulative_;
};

struct Shared {
  std::vector<double> syn0;  // input vectors, V x d
  std::vector<double> syn1;  // output vectors, V x d
  std::atomic<std::int64_t> progress{0};
  std::int64_t total_tokens = 0;
};

void train_range(const std::vector<std::vector<int>>& docs, std::size_t begin, std::size_t end,
                 const TrainConfig& cfg, const NegativeSampler& sampler,
                 const std::vector<double>& keep_prob, Shared& shared, std::uint64_t worker_id) {
  std::seed_seq seq{cfg.seed, worker_id + 1};
  std::mt19937_64 rng(seq);
  const int dim = cfg.dim;
  const double min_lr = cfg.initial_lr / 10000.0;

  std::vector<int> kept;
  std::vector<double> g_center(dim), g_out(dim);
  std::vector<std::vector<double>> g_negs(cfg.negatives, std::vector<double>(dim));
  std::vector<double*> g_neg_ptrs(cfg.negatives);
  std::vector<const double*> neg_ptrs(cfg.negatives);
  for (int i = 0; i < cfg.negatives; ++i) g_neg_ptrs[i] = g_negs[i].data();

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t di = begin; di < end; ++di) {
      const auto& doc = docs[di];
      const std::int64_t seen = shared.progress.fetch_add(static_cast<std::int64_t>(doc.size()));
      double lr = cfg.initial_lr *
                  (1.0 - static_cast<double>(seen) / static_cast<double>(shared.total_tokens + 1));
      lr = std::max(lr, min_lr);

      kept.clear();
      for (int w : doc) {
        if (keep_prob[w] >= 1.0 || next_real(rng) < keep_prob[w]) kept.push_back(w);
      }
      const int n = static_cast<int>(kept.size());
      for (int pos = 0; pos < n; ++pos) {
        const int center = kept[pos];
        const int b = 1 + static_cast<int>(next_below(rng, static_cast<std::uint64_t>(cfg.window)));
        for (int off = -b; off <= b; ++off) {
          if (off == 0) continue;
          const int cpos = pos + off;
          if (cpos < 0 || cpos >= n) continue;
          const int context = kept[cpos];

          double* center_vec = shared.syn0.data() + static_cast<std::ptrdiff_t>(center) * dim;
          double* out_vec = shared.syn1.data() + static_cast<std::ptrdiff_t>(context) * dim;
          int n_negs = 0;
          for (int s = 0; s < cfg.negatives; ++s) {
            const int neg = sampler.sample(rng);
            if (neg == context) continue;  // drawn the positive, drop this sample
            neg_ptrs[n_negs++] = shared.syn1.data() + static_cast<std::ptrdiff_t>(neg) * dim;
          }
          skipgram_ns_grad(center_vec, out_vec, neg_ptrs.data(), n_negs, dim, g_center.data(),
                           g_out.data(), g_neg_ptrs.data());
          for (int j = 0; j < dim; ++j) center_vec[j] -= lr * g_center[j];
          for (int j = 0; j < dim; ++j) out_vec[j] -= lr * g_out[j];
          for (int s = 0; s < n_negs; ++s) {
            double* neg_vec = const_cast<double*>(neg_ptrs[s]);
            for (int j = 0; j < dim; ++j) neg_vec[j] -= lr * g_negs[s][j];
          }
        }
      }
    }
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (dim < 1) throw std::invalid_argument("TrainConfig: dim must be >= 1");
  if (window < 1) throw std::invalid_argument("TrainConfig: window must be >= 1");
  if (negatives < 1) throw std::invalid_argument("TrainConfig: negatives must be >= 1");
  if (min_count < 1) throw std::invalid_argument("TrainConfig: min_count must be >= 1");
  if (epochs < 1) throw std::invalid_argument("TrainConfig: epochs must be >= 1");
  if (!(initial_lr > 0)) throw std::invalid_argument("TrainConfig: initial_lr must be > 0");
  if (workers < 1) throw std::invalid_argument("TrainConfig: workers must be >= 1");
}

double skipgram_ns_loss(const double* center, const double* positive, const double* const* negatives,
                        int n_negs, int dim) {
  double loss = -log_sigmoid(dot(center, positive, dim));
  for (int i = 0; i < n_negs; ++i) {
    loss -= log_sigmoid(-dot(center, negatives[i], dim));
  }
  return loss;
}

void skipgram_ns_grad(const double* center, const double* positive, const double* const* negatives,
                      int n_negs, int dim, double* g_center, double* g_positive,
                      double* const* g_negatives) {
  const double gp = sigmoid(dot(center, positive, dim)) - 1.0;
  for (int j = 0; j < dim; ++j) {
    g_center[j] = gp * positive[j];
    g_positive[j] = gp * center[j];
  }
  for (int i = 0; i < n_negs; ++i) {
    const double gn = sigmoid(dot(center, negatives[i], dim));
    double* g = g_negatives[i];
    for (int j = 0; j < dim; ++j) {
      g[j] = gn * negatives[i][j];
      g_center[j] += gn * negatives[i][j];
    }
  }
}

EmbeddingSpace train(const TokenizedCorpus& corpus, const TrainConfig& config) {
  config.validate();
  if (corpus.documents.empty()) {
    throw std::runtime_error("skip-gram training: corpus is empty");
  }
  const Vocab vocab = build_vocab(corpus, config.min_count);
  const int vsize = static_cast<int>(vocab.words.size());
  const int dim = config.dim;

  // Keep-probability of the frequent-word subsampling, word2vec convention:
  // keep = sqrt(f/t) * t/f + t/f  with f the corpus frequency fraction.
  std::vector<double> keep_prob(vsize, 1.0);
  if (config.subsample_t > 0) {
    for (int i = 0; i < vsize; ++i) {
      const double f = static_cast<double>(vocab.counts[i]) / static_cast<double>(vocab.total);
      const double ratio = config.subsample_t / f;
      keep_prob[i] = std::min(1.0, std::sqrt(ratio) + ratio);
    }
  }

  std::vector<std::vector<int>> docs;
  docs.reserve(corpus.documents.size());
  for (const auto& doc : corpus.documents) {
    std::vector<int> ids;
    ids.reserve(doc.size());
    for (const auto& tok : doc) {
      auto it = vocab.ids.find(tok);
      if (it != vocab.ids.end()) ids.push_back(it->second);
    }
    docs.push_back(std::move(ids));
  }

  Shared shared;
  shared.syn0.resize(static_cast<std::size_t>(vsize) * dim);
  shared.syn1.assign(static_cast<std::size_t>(vsize) * dim, 0.0);
  shared.total_tokens = vocab.total * config.epochs;
  {
    std::mt19937_64 init_rng(config.seed);
    for (auto& w : shared.syn0) w = (next_real(init_rng) - 0.5) / dim;
  }

  const NegativeSampler sampler(vocab.counts);
  const int workers = std::min<int>(config.workers, std::max<std::size_t>(docs.size(), 1));
  if (workers <= 1) {
    train_range(docs, 0, docs.size(), config, sampler, keep_prob, shared, 0);
  } else {
    std::vector<std::thread> threads;
    const std::size_t per = (docs.size() + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(docs.size(), static_cast<std::size_t>(w) * per);
      const std::size_t end = std::min(docs.size(), begin + per);
      threads.emplace_back(train_range, std::cref(docs), begin, end, std::cref(config),
                           std::cref(sampler), std::cref(keep_prob), std::ref(shared),
                           static_cast<std::uint64_t>(w));
    }
    for (auto& t : threads) t.join();
  }

  Matrix vectors(vsize, dim);
  for (int i = 0; i < vsize; ++i) {
    for (int j = 0; j < dim; ++j) {
      vectors(i, j) = shared.syn0[static_cast<std::size_t>(i) * dim + j];
    }
  }
  return EmbeddingSpace::create(corpus.language_tag, vocab.words, std::move(vectors), false);
}

EmbeddingSpace normalize(EmbeddingSpace space) {
  if (space.normalized) return space;
  for (int i = 0; i < space.size(); ++i) {
    const double norm = row_norm(space.row(i), space.dim());
    if (norm == 0.0) {
      throw std::runtime_error("normalize: word '" + space.words[i] + "' has a zero vector");
    }
    space.vectors.row(i) /= norm;
  }
  space.normalized = true;
  return space;
}

}  // namespace crosslex
