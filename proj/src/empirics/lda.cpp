#include "infcartel/empirics/lda.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "infcartel/parallel.hpp"
#include "infcartel/random.hpp"

namespace infcartel::empirics {

PruneConfig PruneConfig::none() {
  PruneConfig c;
  c.min_users = 0;
  c.max_share_num = 1;
  c.max_share_den = 1;
  c.max_tokens = static_cast<std::size_t>(-1);
  c.min_unique = 0;
  return c;
}

std::string PruneReport::summary() const {
  return "users in " + std::to_string(users_in) + ", users kept " + std::to_string(users_out) +
         ", vocabulary in " + std::to_string(vocabulary_in) + ", dropped as rare " +
         std::to_string(dropped_rare) + ", dropped as common " + std::to_string(dropped_common) +
         ", users truncated " + std::to_string(truncated_users) + ", users below unique-token minimum " +
         std::to_string(dropped_users);
}

EncodedCorpus prune_corpus(const Corpus& corpus, const PruneConfig& config) {
  if (config.max_share_den == 0) throw std::invalid_argument("prune_corpus: max_share_den must be positive");
  EncodedCorpus out;
  PruneReport& rep = out.report;
  rep.users_in = corpus.size();

  std::unordered_set<std::string> seen_ids;
  std::unordered_map<std::string, std::size_t> df;
  for (const auto& doc : corpus) {
    if (!seen_ids.insert(doc.id).second)
      throw std::invalid_argument("prune_corpus: duplicate document id '" + doc.id + "'");
    std::unordered_set<std::string> uniq(doc.tokens.begin(), doc.tokens.end());
    for (const auto& t : uniq) ++df[t];
  }
  rep.vocabulary_in = df.size();

  const std::size_t n_users = corpus.size();
  std::set<std::string> kept;
  for (const auto& [token, users] : df) {
    if (users < config.min_users) {
      ++rep.dropped_rare;
    } else if (users * config.max_share_den > config.max_share_num * n_users) {
      ++rep.dropped_common;
    } else {
      kept.insert(token);
    }
  }

  std::vector<std::vector<std::string>> surviving;
  std::vector<std::string> ids;
  for (const auto& doc : corpus) {
    std::vector<std::string> toks;
    for (const auto& t : doc.tokens)
      if (kept.count(t)) toks.push_back(t);
    if (toks.size() > config.max_tokens) {
      toks.resize(config.max_tokens);
      ++rep.truncated_users;
    }
    const std::unordered_set<std::string> uniq(toks.begin(), toks.end());
    if (uniq.size() < config.min_unique || toks.empty()) {
      ++rep.dropped_users;
      continue;
    }
    surviving.push_back(std::move(toks));
    ids.push_back(doc.id);
  }

  std::set<std::string> used;
  for (const auto& toks : surviving) used.insert(toks.begin(), toks.end());
  out.vocabulary.assign(used.begin(), used.end());
  std::unordered_map<std::string, std::uint32_t> index;
  for (std::size_t i = 0; i < out.vocabulary.size(); ++i)
    index.emplace(out.vocabulary[i], static_cast<std::uint32_t>(i));
  out.doc_ids = std::move(ids);
  out.docs.reserve(surviving.size());
  for (const auto& toks : surviving) {
    std::vector<std::uint32_t> enc;
    enc.reserve(toks.size());
    for (const auto& t : toks) enc.push_back(index.at(t));
    out.docs.push_back(std::move(enc));
  }
  rep.users_out = out.docs.size();
  return out;
}

void LdaConfig::validate() const {
  if (k < 1) throw std::invalid_argument("lda: K must be >= 1");
  if (!(resolved_alpha() > 0.0)) throw std::invalid_argument("lda: alpha must be positive");
  if (!(beta > 0.0)) throw std::invalid_argument("lda: beta must be positive");
  if (iterations < 1) throw std::invalid_argument("lda: iterations must be >= 1");
  if (burn_in >= iterations) throw std::invalid_argument("lda: burn_in must be smaller than iterations");
  if (thin < 1) throw std::invalid_argument("lda: thin must be >= 1");
  if (chains < 1) throw std::invalid_argument("lda: chains must be >= 1");
}

namespace {

struct Chain {
  std::vector<std::vector<double>> phi;
  std::vector<std::vector<double>> theta;
  double log_likelihood = 0.0;
};

Chain run_chain(const EncodedCorpus& corpus, std::size_t k, double alpha, double beta,
                const LdaConfig& config, RandomStream rng) {
  const std::size_t v = corpus.vocabulary.size();
  const std::size_t d = corpus.docs.size();
  const double vbeta = static_cast<double>(v) * beta;

  std::vector<std::uint32_t> nkw(k * v, 0);
  std::vector<std::uint32_t> nk(k, 0);
  std::vector<std::uint32_t> ndk(d * k, 0);
  std::vector<std::vector<std::uint32_t>> z(d);
  for (std::size_t doc = 0; doc < d; ++doc) {
    z[doc].resize(corpus.docs[doc].size());
    for (std::size_t i = 0; i < z[doc].size(); ++i) {
      const auto t = static_cast<std::uint32_t>(rng.below(k));
      const std::uint32_t w = corpus.docs[doc][i];
      z[doc][i] = t;
      ++nkw[t * v + w];
      ++nk[t];
      ++ndk[doc * k + t];
    }
  }

  Chain out;
  out.phi.assign(k, std::vector<double>(v, 0.0));
  out.theta.assign(d, std::vector<double>(k, 0.0));
  std::vector<double> cumulative(k);

  for (std::size_t it = 0; it < config.iterations; ++it) {
    for (std::size_t doc = 0; doc < d; ++doc) {
      const auto& words = corpus.docs[doc];
      std::uint32_t* nd = &ndk[doc * k];
      for (std::size_t i = 0; i < words.size(); ++i) {
        const std::uint32_t w = words[i];
        const std::uint32_t old = z[doc][i];
        --nkw[old * v + w];
        --nk[old];
        --nd[old];
        double total = 0.0;
        for (std::size_t t = 0; t < k; ++t) {
          total += (nd[t] + alpha) * (nkw[t * v + w] + beta) / (nk[t] + vbeta);
          cumulative[t] = total;
        }
        const double u = rng.uniform() * total;
        std::size_t t = 0;
        while (t + 1 < k && cumulative[t] <= u) ++t;
        z[doc][i] = static_cast<std::uint32_t>(t);
        ++nkw[t * v + w];
        ++nk[t];
        ++nd[t];
      }
    }
    if (it >= config.burn_in && (it - config.burn_in) % config.thin == 0) {
      for (std::size_t t = 0; t < k; ++t)
        for (std::size_t w = 0; w < v; ++w)
          out.phi[t][w] += (nkw[t * v + w] + beta) / (nk[t] + vbeta);
      for (std::size_t doc = 0; doc < d; ++doc) {
        const double len = static_cast<double>(corpus.docs[doc].size());
        for (std::size_t t = 0; t < k; ++t)
          out.theta[doc][t] += (ndk[doc * k + t] + alpha) / (len + static_cast<double>(k) * alpha);
      }
    }
  }

  auto normalize = [](std::vector<double>& row) {
    const double s = std::accumulate(row.begin(), row.end(), 0.0);
    for (double& x : row) x /= s;
  };
  for (auto& row : out.phi) normalize(row);
  for (auto& row : out.theta) normalize(row);

  double ll = 0.0;
  for (std::size_t t = 0; t < k; ++t) {
    ll += std::lgamma(vbeta) - std::lgamma(nk[t] + vbeta);
    for (std::size_t w = 0; w < v; ++w) ll += std::lgamma(nkw[t * v + w] + beta) - std::lgamma(beta);
  }
  out.log_likelihood = ll;
  return out;
}

}  // namespace

LdaModel lda_fit(const EncodedCorpus& corpus, const LdaConfig& config) {
  config.validate();
  if (corpus.docs.empty() || corpus.vocabulary.empty())
    throw EmptyCorpus("lda: corpus is empty after pruning (" + corpus.report.summary() + ")");
  const double alpha = config.resolved_alpha();

  const RandomStream root(config.seed);
  std::vector<Chain> chains(config.chains);
  parallel_for(chains.size(), static_cast<unsigned>(config.threads), [&](std::size_t c) {
    chains[c] = run_chain(corpus, config.k, alpha, config.beta, config, root.split(c));
  });
  std::size_t best = 0;
  for (std::size_t c = 1; c < chains.size(); ++c)
    if (chains[c].log_likelihood > chains[best].log_likelihood) best = c;

  LdaModel model;
  model.k = config.k;
  model.alpha = alpha;
  model.beta = config.beta;
  model.vocabulary = corpus.vocabulary;
  model.doc_ids = corpus.doc_ids;
  model.topic_word = std::move(chains[best].phi);
  model.doc_topic = std::move(chains[best].theta);
  model.log_likelihood = chains[best].log_likelihood;
  model.chain = best;
  model.prune = corpus.report;
  return model;
}

LdaModel lda_fit(const Corpus& corpus, const LdaConfig& config) {
  config.validate();
  return lda_fit(prune_corpus(corpus, config.prune), config);
}

const std::vector<double>& LdaModel::topics_of(const std::string& id) const {
  const auto it = std::find(doc_ids.begin(), doc_ids.end(), id);
  if (it == doc_ids.end()) throw std::out_of_range("lda model has no document '" + id + "'");
  return doc_topic[static_cast<std::size_t>(it - doc_ids.begin())];
}

std::vector<std::size_t> LdaModel::top_words(std::size_t t, std::size_t n) const {
  const auto& row = topic_word.at(t);
  std::vector<std::size_t> idx(row.size());
  std::iota(idx.begin(), idx.end(), 0);
  n = std::min(n, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n), idx.end(),
                    [&](std::size_t a, std::size_t b) { return row[a] > row[b] || (row[a] == row[b] && a < b); });
  idx.resize(n);
  return idx;
}

std::vector<double> npmi_coherence(const LdaModel& model, const Corpus& corpus, std::size_t top_n,
                                   std::size_t window) {
  if (top_n < 2) throw std::invalid_argument("npmi_coherence: top_n must be >= 2");
  if (window < 1) throw std::invalid_argument("npmi_coherence: window must be >= 1");
  constexpr double eps = 1e-12;

  std::vector<std::vector<std::size_t>> tops(model.k);
  std::unordered_map<std::string, std::size_t> slot;
  std::vector<std::string> words;
  for (std::size_t t = 0; t < model.k; ++t) {
    for (const std::size_t w : model.top_words(t, top_n)) {
      const auto [it, added] = slot.try_emplace(model.vocabulary[w], words.size());
      if (added) words.push_back(model.vocabulary[w]);
      tops[t].push_back(it->second);
    }
  }
  const std::unordered_set<std::string> vocab(model.vocabulary.begin(), model.vocabulary.end());
  const std::size_t m = words.size();

  std::vector<double> single(m, 0.0);
  std::vector<double> joint(m * m, 0.0);
  double n_windows = 0.0;
  std::vector<char> present(m);
  std::vector<std::size_t> hits;
  for (const auto& doc : corpus) {
    // Slot of each in-vocabulary token, or m when it is not a top word.
    std::vector<std::size_t> seq;
    for (const auto& tok : doc.tokens) {
      if (!vocab.count(tok)) continue;
      const auto it = slot.find(tok);
      seq.push_back(it == slot.end() ? m : it->second);
    }
    if (seq.empty()) continue;
    const std::size_t count = seq.size() <= window ? 1 : seq.size() - window + 1;
    const std::size_t width = std::min(window, seq.size());
    for (std::size_t s = 0; s < count; ++s) {
      std::fill(present.begin(), present.end(), 0);
      hits.clear();
      for (std::size_t j = s; j < s + width; ++j) {
        const std::size_t w = seq[j];
        if (w < m && !present[w]) {
          present[w] = 1;
          hits.push_back(w);
        }
      }
      for (const std::size_t a : hits) {
        single[a] += 1.0;
        for (const std::size_t b : hits) joint[a * m + b] += 1.0;
      }
      n_windows += 1.0;
    }
  }

  std::vector<double> out(model.k, 0.0);
  for (std::size_t t = 0; t < model.k; ++t) {
    const auto& top = tops[t];
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < top.size(); ++a) {
      for (std::size_t b = a + 1; b < top.size(); ++b) {
        ++pairs;
        const double pi = n_windows > 0 ? single[top[a]] / n_windows : 0.0;
        const double pj = n_windows > 0 ? single[top[b]] / n_windows : 0.0;
        const double pij = n_windows > 0 ? joint[top[a] * m + top[b]] / n_windows : 0.0;
        double score;
        if (pi == 0.0 || pj == 0.0) {
          score = -1.0;
        } else if (pij >= 1.0) {
          score = 1.0;
        } else {
          score = std::log((pij + eps) / (pi * pj)) / -std::log(pij + eps);
        }
        sum += std::clamp(score, -1.0, 1.0);
      }
    }
    out[t] = pairs > 0 ? sum / static_cast<double>(pairs) : 0.0;
  }
  return out;
}

std::size_t main_topic(const std::vector<double>& row) {
  if (row.empty()) throw std::invalid_argument("main_topic: empty topic row");
  std::size_t best = 0;
  for (std::size_t t = 1; t < row.size(); ++t)
    if (row[t] > row[best]) best = t;
  return best;
}

std::size_t main_topic(const LdaModel& model, const std::string& user) {
  return main_topic(model.topics_of(user));
}

}  // namespace infcartel::empirics
