#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "infcartel/empirics/regression.hpp"
#include "infcartel/empirics/similarity.hpp"
#include "infcartel/empirics/topics.hpp"

namespace infcartel::empirics {

/// Synthetic authors and commenters on the topic circle. Each author gets
/// an angle alpha ~ Uniform[0, 2pi) and, for every class, commenters at
/// alpha +/- delta with delta drawn as
///   natural:          Uniform[0, atan(gamma)]
///   topic cartel:     Uniform[0, lambda_topic]
///   general / random: Uniform[0, pi]
/// An angle a is embedded as cos(a) u1 + sin(a) u2 + N(0, noise_sigma^2 I),
/// with (u1, u2) a seeded orthonormal pair in R^embed_dim. Topic rows place
/// K topics evenly on the circle with weights proportional to
/// exp(topic_concentration * cos(a - centre)).
struct SynthConfig {
  std::size_t n_authors = 1000;
  /// Indexed by CommenterClass.
  std::array<std::size_t, 4> commenters_per_class{5, 5, 5, 5};
  double gamma = 0.5;
  /// Radians.
  double lambda_topic = 0.7853981633974483;
  std::size_t embed_dim = 16;
  double noise_sigma = 0.05;
  std::size_t topics = 6;
  double topic_concentration = 2.0;
  std::uint64_t seed = 1;

  void validate() const;
};

struct SynthTruth {
  std::vector<double> author_alpha;
  /// Topic distance of each panel row.
  std::vector<double> delta;
  /// Population mean of cos(delta) per class (the noiseless similarity).
  std::array<double, 4> class_mean_similarity{};
};

struct SynthData {
  std::vector<PanelObservation> panel;
  std::vector<EmbeddingVector> embeddings;
  TopicRows topic_rows;
  SynthTruth truth;
};

SynthData synth_generate(const SynthConfig& config);

/// Population mean of cos(delta) for delta ~ Uniform[0, upper].
double mean_cos_uniform(double upper);

}  // namespace infcartel::empirics
