#include "infcartel/empirics/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace infcartel::empirics {

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size())
    throw std::domain_error("cosine_similarity: dimension mismatch (" + std::to_string(u.size()) +
                            " vs " + std::to_string(v.size()) + ")");
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0.0 || vv == 0.0) throw std::domain_error("cosine_similarity: zero vector");
  return std::clamp(dot / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v) {
  try {
    return cosine_similarity(std::span<const double>(u.values), std::span<const double>(v.values));
  } catch (const std::domain_error& e) {
    throw std::domain_error(std::string(e.what()) + " for ids '" + u.id + "', '" + v.id + "'");
  }
}

EmbeddingVector user_embedding(const std::string& id, const std::vector<EmbeddingVector>& posts) {
  if (posts.empty()) throw std::domain_error("user_embedding: user '" + id + "' has no posts");
  const std::size_t d = posts.front().values.size();
  EmbeddingVector mean{id, std::vector<double>(d, 0.0)};
  for (const auto& p : posts) {
    if (p.values.size() != d) throw std::domain_error("user_embedding: dimension mismatch in post '" + p.id + "'");
    for (std::size_t i = 0; i < d; ++i) mean.values[i] += p.values[i];
  }
  for (double& x : mean.values) x /= static_cast<double>(posts.size());
  return mean;
}

}  // namespace infcartel::empirics
