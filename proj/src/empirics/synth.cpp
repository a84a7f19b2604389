#include "infcartel/empirics/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "infcartel/model.hpp"
#include "infcartel/random.hpp"

namespace infcartel::empirics {

namespace {

constexpr std::array<CommenterClass, 4> kClasses{CommenterClass::Natural, CommenterClass::GeneralCartel,
                                                 CommenterClass::TopicCartel, CommenterClass::RandomUser};

struct Frame {
  std::vector<double> u1, u2;
};

Frame orthonormal_frame(std::size_t d, RandomStream& rng) {
  auto gaussian = [&] {
    std::vector<double> v(d);
    for (double& x : v) x = rng.normal();
    return v;
  };
  auto norm = [](const std::vector<double>& v) {
    double s = 0.0;
    for (const double x : v) s += x * x;
    return std::sqrt(s);
  };
  Frame f;
  do {
    f.u1 = gaussian();
  } while (norm(f.u1) < 1e-8);
  const double n1 = norm(f.u1);
  for (double& x : f.u1) x /= n1;
  while (true) {
    f.u2 = gaussian();
    double dot = 0.0;
    for (std::size_t i = 0; i < d; ++i) dot += f.u1[i] * f.u2[i];
    for (std::size_t i = 0; i < d; ++i) f.u2[i] -= dot * f.u1[i];
    const double n2 = norm(f.u2);
    if (n2 < 1e-8) continue;
    for (double& x : f.u2) x /= n2;
    return f;
  }
}

std::vector<double> embed(double angle, const Frame& frame, double sigma, RandomStream& rng) {
  const double c = std::cos(angle), s = std::sin(angle);
  std::vector<double> v(frame.u1.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = c * frame.u1[i] + s * frame.u2[i];
  if (sigma > 0.0)
    for (double& x : v) x += sigma * rng.normal();
  return v;
}

std::vector<double> topic_row(double angle, std::size_t k, double concentration) {
  std::vector<double> w(k);
  double total = 0.0;
  for (std::size_t t = 0; t < k; ++t) {
    const double centre = 2.0 * kPi * static_cast<double>(t) / static_cast<double>(k);
    w[t] = std::exp(concentration * std::cos(angle - centre));
    total += w[t];
  }
  for (double& x : w) x /= total;
  return w;
}

double delta_upper(CommenterClass c, const SynthConfig& config) {
  switch (c) {
    case CommenterClass::Natural: return std::atan(config.gamma);
    case CommenterClass::TopicCartel: return config.lambda_topic;
    case CommenterClass::GeneralCartel:
    case CommenterClass::RandomUser: return kPi;
  }
  return kPi;
}

}  // namespace

void SynthConfig::validate() const {
  if (n_authors < 1) throw std::invalid_argument("synth: n_authors must be >= 1");
  if (embed_dim < 2) throw std::invalid_argument("synth: embed_dim must be >= 2");
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("synth: gamma must lie in (0, 1)");
  if (!(lambda_topic > 0.0 && lambda_topic <= kPi))
    throw std::invalid_argument("synth: topic requirement must lie in (0, 180] degrees");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma))
    throw std::invalid_argument("synth: noise_sigma must be a finite non-negative number");
  if (topics < 1) throw std::invalid_argument("synth: topics must be >= 1");
  if (!std::isfinite(topic_concentration)) throw std::invalid_argument("synth: topic_concentration must be finite");
}

double mean_cos_uniform(double upper) {
  if (!(upper > 0.0)) throw std::domain_error("mean_cos_uniform: upper bound must be positive");
  return std::sin(upper) / upper;
}

SynthData synth_generate(const SynthConfig& config) {
  config.validate();
  const RandomStream root(config.seed);
  RandomStream frame_rng = root.split(0);
  const Frame frame = orthonormal_frame(config.embed_dim, frame_rng);

  SynthData out;
  for (const CommenterClass c : kClasses)
    out.truth.class_mean_similarity[static_cast<std::size_t>(c)] = mean_cos_uniform(delta_upper(c, config));

  for (std::size_t a = 0; a < config.n_authors; ++a) {
    RandomStream rng = root.split(a + 1);
    const std::string author = "a" + std::to_string(a);
    const double alpha = rng.uniform(0.0, 2.0 * kPi);
    out.truth.author_alpha.push_back(alpha);
    const EmbeddingVector author_vec{author, embed(alpha, frame, config.noise_sigma, rng)};
    out.embeddings.push_back(author_vec);
    out.topic_rows.emplace(author, topic_row(alpha, config.topics, config.topic_concentration));

    for (const CommenterClass c : kClasses) {
      const double upper = delta_upper(c, config);
      for (std::size_t j = 0; j < config.commenters_per_class[static_cast<std::size_t>(c)]; ++j) {
        const double delta = rng.uniform() * upper;
        const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        const double angle = alpha + sign * delta;
        const std::string id = author + "-" + to_string(c) + "-" + std::to_string(j);
        EmbeddingVector vec{id, embed(angle, frame, config.noise_sigma, rng)};
        const double sim = cosine_similarity(author_vec, vec);
        out.panel.push_back(PanelObservation{author, id, c, sim});
        out.truth.delta.push_back(delta);
        out.topic_rows.emplace(id, topic_row(angle, config.topics, config.topic_concentration));
        out.embeddings.push_back(std::move(vec));
      }
    }
  }
  return out;
}

}  // namespace infcartel::empirics
