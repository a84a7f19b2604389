#pragma once

#include <span>
#include <string>
#include <vector>

namespace infcartel::empirics {

struct EmbeddingVector {
  std::string id;
  std::vector<double> values;
};

/// dot(u, v) / (|u| |v|), clamped to [-1, 1]. Throws std::domain_error on a
/// zero vector or mismatched dimensions.
double cosine_similarity(std::span<const double> u, std::span<const double> v);
double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v);

/// Componentwise mean of a user's post embeddings. Throws std::domain_error
/// on empty input or mismatched dimensions.
EmbeddingVector user_embedding(const std::string& id, const std::vector<EmbeddingVector>& posts);

}  // namespace infcartel::empirics
