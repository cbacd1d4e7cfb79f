#pragma once

#include <cstdint>
#include <string>

#include "crosslex/space.hpp"
#include "crosslex/text.hpp"

namespace crosslex {

struct TrainConfig {
  int dim = 100;
  int window = 5;            // actual window per center is uniform in [1, window]
  int negatives = 5;         // negative samples per positive pair
  int min_count = 5;         // vocabulary frequency floor
  int epochs = 5;
  double initial_lr = 0.025;  // decays linearly to initial_lr/10000
  double subsample_t = 1e-3;  // frequent-word subsampling threshold; <=0 disables
  std::uint64_t seed = 1;
  int workers = 1;           // >1 trains shards with unsynchronized shared updates

  void validate() const;
};

/// Skip-gram with negative sampling. Negatives are drawn from the unigram
/// distribution raised to 0.75. The run is bit-reproducible for workers == 1
/// and a fixed seed; with more workers updates race by design.
EmbeddingSpace train(const TokenizedCorpus& corpus, const TrainConfig& config);

/// Divides every row by its Euclidean norm and sets the normalized flag.
/// Already-normalized spaces are returned unchanged. A zero-norm row raises
/// an error naming the word.
EmbeddingSpace normalize(EmbeddingSpace space);

/// Loss of one training step: center against one positive output and
/// n_negs negative outputs,
///   L = -log s(c.p) - sum_i log s(-c.n_i),  s = logistic sigmoid.
double skipgram_ns_loss(const double* center, const double* positive, const double* const* negatives,
                        int n_negs, int dim);

/// Gradients of skipgram_ns_loss with respect to every participating vector.
/// g_negatives[i] receives the gradient for negatives[i]. This is the exact
/// update rule the trainer applies (param -= lr * grad).
void skipgram_ns_grad(const double* center, const double* positive, const double* const* negatives,
                      int n_negs, int dim, double* g_center, double* g_positive,
                      double* const* g_negatives);

}  // namespace crosslex
