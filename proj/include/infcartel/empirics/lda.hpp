#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace infcartel::empirics {

struct Document {
  std::string id;
  std::vector<std::string> tokens;
};

using Corpus = std::vector<Document>;

/// Vocabulary and length rules applied before fitting, in this order:
/// tokens used by fewer than `min_users` users are dropped; tokens used by
/// more than max_share_num/max_share_den of users are dropped; each
/// document is truncated to its first `max_tokens` surviving tokens; users
/// with fewer than `min_unique` distinct surviving tokens are dropped.
struct PruneConfig {
  std::size_t min_users = 50;
  std::size_t max_share_num = 33;
  std::size_t max_share_den = 100;
  std::size_t max_tokens = 1000;
  std::size_t min_unique = 15;

  /// No pruning at all.
  static PruneConfig none();
};

struct PruneReport {
  std::size_t users_in = 0;
  std::size_t users_out = 0;
  std::size_t vocabulary_in = 0;
  std::size_t dropped_rare = 0;
  std::size_t dropped_common = 0;
  std::size_t truncated_users = 0;
  std::size_t dropped_users = 0;
  std::string summary() const;
};

/// Corpus encoded against a vocabulary.
struct EncodedCorpus {
  std::vector<std::string> vocabulary;
  std::vector<std::string> doc_ids;
  std::vector<std::vector<std::uint32_t>> docs;
  PruneReport report;
};

EncodedCorpus prune_corpus(const Corpus& corpus, const PruneConfig& config);

/// Thrown when pruning leaves nothing to fit.
class EmptyCorpus : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LdaConfig {
  std::size_t k = 6;
  /// Negative means 50/K.
  double alpha = -1.0;
  double beta = 0.01;
  std::size_t iterations = 2000;
  std::size_t burn_in = 500;
  /// Samples after burn-in are averaged every `thin` sweeps.
  std::size_t thin = 10;
  std::uint64_t seed = 1;
  /// Independent chains (seeds derived from `seed`); the chain with the
  /// highest final log-likelihood is kept.
  std::size_t chains = 1;
  std::size_t threads = 1;
  PruneConfig prune{};

  double resolved_alpha() const { return alpha < 0.0 ? 50.0 / static_cast<double>(k) : alpha; }
  void validate() const;
};

struct LdaModel {
  std::size_t k = 0;
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<std::string> vocabulary;
  std::vector<std::string> doc_ids;
  /// K rows over the vocabulary.
  std::vector<std::vector<double>> topic_word;
  /// One row of K per document.
  std::vector<std::vector<double>> doc_topic;
  double log_likelihood = 0.0;
  std::size_t chain = 0;
  PruneReport prune;

  /// Row of doc_topic for `id`; throws std::out_of_range if absent.
  const std::vector<double>& topics_of(const std::string& id) const;
  /// Indices of the `n` most probable words of topic t, ties by index.
  std::vector<std::size_t> top_words(std::size_t t, std::size_t n) const;
};

/// Collapsed Gibbs sampling. Deterministic for a fixed config.
LdaModel lda_fit(const Corpus& corpus, const LdaConfig& config);
LdaModel lda_fit(const EncodedCorpus& corpus, const LdaConfig& config);

/// Mean NPMI over pairs of each topic's `top_n` words. Probabilities come
/// from boolean sliding windows of `window` tokens over each document
/// (out-of-vocabulary tokens removed first; a document shorter than the
/// window is one window). A pair is scored
///   log((P(i,j) + eps) / (P(i) P(j))) / -log(P(i,j) + eps)
/// with eps = 1e-12, so pairs that never co-occur score close to -1. A pair
/// present in every window scores 1; a word absent from every window gives
/// -1. Scores are clamped to [-1, 1].
std::vector<double> npmi_coherence(const LdaModel& model, const Corpus& corpus,
                                   std::size_t top_n = 10, std::size_t window = 5);

/// argmax of a topic row; ties go to the lowest index.
std::size_t main_topic(const std::vector<double>& doc_topic_row);
std::size_t main_topic(const LdaModel& model, const std::string& user);

}  // namespace infcartel::empirics
