#include "infcartel/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "infcartel/advertising.hpp"
#include "infcartel/equilibrium.hpp"
#include "infcartel/parallel.hpp"

namespace infcartel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct RepResult {
  double engagement_rate = kNaN;
  double welfare = kNaN;
  double member_payoff = kNaN;
  double share = kNaN;
  double price = kNaN;
  double r_bar = kNaN;
  int iterations = 0;
};

// Replication i always draws from root.split(i); results land in slot i, so
// the report does not depend on how many threads ran.
std::vector<RepResult> run_replications(const SimConfig& config,
                                        const std::function<RepResult(RandomStream&)>& body) {
  const RandomStream root(config.seed);
  std::vector<RepResult> results(config.replications);
  parallel_for(results.size(), config.threads, [&](std::size_t i) {
    RandomStream stream = root.split(i);
    results[i] = body(stream);
  });
  return results;
}

template <class Field>
Stat collect(const std::vector<RepResult>& reps, Field field) {
  std::vector<double> values;
  values.reserve(reps.size());
  for (const auto& r : reps) values.push_back(field(r));
  return summarize(values);
}

SimReport assemble(const SimConfig& config, std::string kind, const std::vector<RepResult>& reps) {
  SimReport report;
  report.kind = std::move(kind);
  report.engagement_rate = collect(reps, [](const RepResult& r) { return r.engagement_rate; });
  report.welfare_per_player = collect(reps, [](const RepResult& r) { return r.welfare; });
  report.member_payoff = collect(reps, [](const RepResult& r) { return r.member_payoff; });
  report.membership_share = collect(reps, [](const RepResult& r) { return r.share; });
  report.realized_price = collect(reps, [](const RepResult& r) { return r.price; });
  report.fixed_point_r_bar = collect(reps, [](const RepResult& r) { return r.r_bar; });
  for (const auto& r : reps) report.iterations = std::max(report.iterations, r.iterations);
  report.replications = config.replications;
  report.n_players = config.n_players;
  report.seed = config.seed;
  return report;
}

std::vector<PlayerType> sample_sequence(RandomStream& stream, std::size_t n) {
  std::vector<PlayerType> players(n);
  for (auto& p : players) p = sample_player(stream);
  return players;
}

// Sorted reaches of eligible players with prefix sums, so that the sample
// mean reach below any threshold costs one binary search.
class ReachIndex {
 public:
  ReachIndex(const std::vector<PlayerType>& players, double floor) : floor_(floor) {
    for (const auto& p : players)
      if (p.reach >= floor) sorted_.push_back(p.reach);
    std::sort(sorted_.begin(), sorted_.end());
    prefix_.resize(sorted_.size() + 1, 0.0);
    for (std::size_t i = 0; i < sorted_.size(); ++i) prefix_[i + 1] = prefix_[i] + sorted_[i];
  }

  std::size_t count_below(double threshold) const {
    return static_cast<std::size_t>(std::upper_bound(sorted_.begin(), sorted_.end(), threshold) -
                                    sorted_.begin());
  }

  /// Sample mean reach of eligible players with reach <= threshold. An empty
  /// set falls back to the entry floor, the limit of the truncated mean.
  double mean_below(double threshold) const {
    const std::size_t k = count_below(threshold);
    return k == 0 ? floor_ : prefix_[k] / static_cast<double>(k);
  }

  double mean_all() const { return mean_below(kInf); }

  /// Smallest r >= floor with slope * mean_below(r) <= r. The sampled best
  /// response is a step function, so near the crossing there can be several
  /// roots a fraction of a sample spacing apart; this picks one canonically.
  double smallest_root(double slope) const {
    double lo = floor_;
    for (std::size_t k = 0; k <= sorted_.size(); ++k) {
      const double f = slope * (k == 0 ? floor_ : prefix_[k] / static_cast<double>(k));
      const double hi = k < sorted_.size() ? sorted_[k] : kInf;
      const double r = std::max(lo, f);
      if (r < hi) return r;
      lo = hi;
    }
    return kInf;
  }

 private:
  double floor_;
  std::vector<double> sorted_;
  std::vector<double> prefix_;
};

struct FixedPoint {
  double r_bar = kNaN;
  int iterations = 0;
};

FixedPoint solve_threshold(const ReachIndex& index, const PayoffCoefficients& coef,
                           const SimConfig& config) {
  // Payoff nondecreasing in own reach: every eligible player joins.
  if (coef.own_reach >= 0.0) {
    if (coef.member_reach * index.mean_all() >= 0.0) return {kInf, 0};
    return {config.agreement->min_reach(), 0};
  }
  const auto best_response = [&](double r) {
    return coef.member_reach * index.mean_below(r) / (-coef.own_reach);
  };
  double r = config.r_bar_start;
  double step = 1.0;
  double last_delta = 0.0;
  for (int it = 1; it <= config.max_iterations; ++it) {
    const double target = best_response(r);
    const double delta = target - r;
    if (std::abs(delta) < config.tolerance)
      return {std::min(target, index.smallest_root(coef.member_reach / -coef.own_reach)), it};
    if (config.damp_on_oscillation && last_delta != 0.0 && (delta > 0.0) != (last_delta > 0.0))
      step = 0.5;
    r += step * delta;
    last_delta = delta;
  }
  throw ConvergenceError("simulate_cartel_entry: threshold iteration did not converge", r);
}

}  // namespace

Stat summarize(const std::vector<double>& values) {
  if (values.empty()) return {kNaN, kNaN};
  const bool all_inf = std::all_of(values.begin(), values.end(),
                                   [](double x) { return std::isinf(x) && x > 0.0; });
  if (all_inf) return {kInf, 0.0};
  const numeric::Estimate e = numeric::estimate(values);
  return {e.mean, e.std_error};
}

void SimConfig::validate() const {
  if (n_players < 2) throw std::invalid_argument("SimConfig: n_players must be >= 2");
  if (replications < 1) throw std::invalid_argument("SimConfig: replications must be >= 1");
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("SimConfig: gamma must lie in (0, 1)");
  if (!(v >= 0.0)) throw std::invalid_argument("SimConfig: v must be >= 0");
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("SimConfig: epsilon must lie in [0, 1]");
  if (!(tolerance > 0.0)) throw std::invalid_argument("SimConfig: tolerance must be positive");
  if (max_iterations < 1) throw std::invalid_argument("SimConfig: max_iterations must be >= 1");
}

SimReport simulate_natural(const SimConfig& config) {
  config.validate();
  const EngagementRule rule = equilibrium_rule(config.gamma);
  const auto reps = run_replications(config, [&](RandomStream& stream) {
    const auto players = sample_sequence(stream, config.n_players);
    const std::size_t n = players.size();
    std::vector<TopicDistance> delta(n);
    std::vector<char> engaged(n, 0);
    std::size_t engagements = 0;
    double welfare = 0.0;
    double cos_sum = 0.0;
    for (std::size_t t = 1; t < n; ++t) {
      delta[t] = topic_distance(players[t].alpha, players[t - 1].alpha);
      engaged[t] = rule.engages(delta[t]);
      welfare += engagement_welfare(engaged[t], players[t].reach, delta[t]);
      if (engaged[t]) {
        ++engagements;
        cos_sum += std::cos(delta[t].radians());
      }
    }
    double payoff = 0.0;
    for (std::size_t t = 1; t + 1 < n; ++t)
      payoff += player_payoff(engaged[t], engaged[t + 1], players[t], delta[t], delta[t + 1],
                              players[t + 1].reach, config.gamma);
    RepResult r;
    r.engagement_rate = static_cast<double>(engagements) / static_cast<double>(n - 1);
    r.welfare = welfare / static_cast<double>(n - 1);
    r.member_payoff = n > 2 ? payoff / static_cast<double>(n - 2) : 0.0;
    r.share = 0.0;
    r.price = engagements > 0 ? config.v * cos_sum / static_cast<double>(engagements) : 0.0;
    return r;
  });
  return assemble(config, "natural", reps);
}

SimReport simulate_cartel_entry(const SimConfig& config) {
  config.validate();
  if (!config.agreement) throw std::invalid_argument("simulate_cartel_entry: agreement required");
  const CartelAgreement& agreement = *config.agreement;
  const MarketParams params{config.gamma, config.v, config.epsilon};
  const PayoffCoefficients coef = cartel_ad_coefficients(agreement, params);
  const double ad_price = price_engagement(params, agreement.requirement()).p_engagement;
  const double requirement = agreement.requirement();
  const double floor = agreement.min_reach();

  const auto reps = run_replications(config, [&](RandomStream& stream) {
    const auto players = sample_sequence(stream, config.n_players);
    const ReachIndex index(players, floor);
    const FixedPoint fp = solve_threshold(index, coef, config);

    std::vector<const PlayerType*> members;
    for (const auto& p : players)
      if (p.reach >= floor && p.reach <= fp.r_bar) members.push_back(&p);
    const std::size_t m = members.size();

    RepResult r;
    r.r_bar = fp.r_bar;
    r.iterations = fp.iterations;
    r.share = static_cast<double>(m) / static_cast<double>(players.size());
    r.engagement_rate = 0.0;
    r.member_payoff = 0.0;
    r.welfare = 0.0;
    r.price = 0.0;
    if (m < 3) return r;

    std::vector<TopicDistance> delta(m);
    std::vector<char> engaged(m, 0);
    std::size_t engagements = 0;
    double cos_sum = 0.0;
    for (std::size_t k = 1; k < m; ++k) {
      delta[k] = topic_distance(members[k]->alpha, members[k - 1]->alpha);
      engaged[k] = delta[k].radians() <= requirement;
      if (engaged[k]) {
        ++engagements;
        cos_sum += std::cos(delta[k].radians());
      }
    }
    double total = 0.0;
    double engagement_only = 0.0;
    for (std::size_t k = 1; k + 1 < m; ++k) {
      const double u = player_payoff(engaged[k], engaged[k + 1], *members[k], delta[k],
                                     delta[k + 1], members[k + 1]->reach, config.gamma);
      const double ad = engaged[k + 1] ? (1.0 - config.gamma) * members[k + 1]->reach * ad_price : 0.0;
      engagement_only += u;
      total += u + ad;
    }
    const double interior = static_cast<double>(m - 2);
    r.engagement_rate = static_cast<double>(engagements) / static_cast<double>(m - 1);
    r.member_payoff = total / interior;
    r.welfare = r.share * engagement_only / interior;
    r.price = engagements > 0 ? config.v * cos_sum / static_cast<double>(engagements) : 0.0;
    return r;
  });
  return assemble(config, "cartel", reps);
}

SimReport simulate_market(const SimConfig& config) {
  config.validate();
  if (!config.agreement) throw std::invalid_argument("simulate_market: agreement required");
  const EngagementRule natural = equilibrium_rule(config.gamma);
  const double requirement = config.agreement->requirement();
  const auto reps = run_replications(config, [&](RandomStream& stream) {
    // Two independent sequences: non-members following the equilibrium rule
    // and cartel members following the agreement.
    double nat_sum = 0.0, cart_sum = 0.0;
    std::size_t nat_n = 0, cart_n = 0;
    PlayerType prev = sample_player(stream);
    for (std::size_t t = 1; t < config.n_players; ++t) {
      const PlayerType cur = sample_player(stream);
      const TopicDistance d = topic_distance(cur.alpha, prev.alpha);
      if (natural.engages(d)) {
        nat_sum += std::cos(d.radians());
        ++nat_n;
      }
      prev = cur;
    }
    prev = sample_player(stream);
    for (std::size_t t = 1; t < config.n_players; ++t) {
      const PlayerType cur = sample_player(stream);
      const TopicDistance d = topic_distance(cur.alpha, prev.alpha);
      if (d.radians() <= requirement) {
        cart_sum += std::cos(d.radians());
        ++cart_n;
      }
      prev = cur;
    }
    const double nat_q = nat_n ? nat_sum / static_cast<double>(nat_n) : 0.0;
    const double cart_q = cart_n ? cart_sum / static_cast<double>(cart_n) : 0.0;
    RepResult r;
    r.price = config.v * ((1.0 - config.epsilon) * nat_q + config.epsilon * cart_q);
    const double nat_rate = static_cast<double>(nat_n) / static_cast<double>(config.n_players - 1);
    const double cart_rate = static_cast<double>(cart_n) / static_cast<double>(config.n_players - 1);
    r.engagement_rate = (1.0 - config.epsilon) * nat_rate + config.epsilon * cart_rate;
    r.share = config.epsilon;
    return r;
  });
  return assemble(config, "market", reps);
}

Stat estimate_member_payoff(double reach, const CartelAgreement& agreement, double gamma,
                            double r_bar, std::size_t draws, std::size_t replications,
                            std::uint64_t seed) {
  if (!(reach >= 1.0)) throw std::domain_error("estimate_member_payoff: reach must be >= 1");
  if (draws < 1 || replications < 1)
    throw std::invalid_argument("estimate_member_payoff: draws and replications must be positive");
  const double requirement = agreement.requirement();
  const double floor = agreement.min_reach();
  const RandomStream root(seed);
  std::vector<double> means;
  means.reserve(replications);
  const PlayerType own{0.0, reach};
  for (std::size_t rep = 0; rep < replications; ++rep) {
    RandomStream stream = root.split(rep);
    double sum = 0.0;
    for (std::size_t i = 0; i < draws; ++i) {
      const double a_prev = 2.0 * kPi * stream.uniform();
      const double a_own = 2.0 * kPi * stream.uniform();
      const double a_next = 2.0 * kPi * stream.uniform();
      const double next_reach = sample_truncated_reach(stream, floor, r_bar);
      const TopicDistance d_prev = topic_distance(a_own, a_prev);
      const TopicDistance d_next = topic_distance(a_next, a_own);
      sum += player_payoff(d_prev.radians() <= requirement, d_next.radians() <= requirement,
                           own, d_prev, d_next, next_reach, gamma);
    }
    means.push_back(sum / static_cast<double>(draws));
  }
  return summarize(means);
}

std::vector<WelfareGridRow> welfare_grid(const std::vector<double>& gammas,
                                         const std::vector<double>& lambdas,
                                         const SimConfig& base) {
  std::vector<WelfareGridRow> rows;
  rows.reserve(gammas.size() * lambdas.size());
  std::uint64_t cell = 0;
  for (const double gamma : gammas) {
    for (const double lambda : lambdas) {
      SimConfig cfg = base;
      cfg.gamma = gamma;
      cfg.v = 0.0;
      const double floor = base.agreement ? base.agreement->min_reach() : 1.0;
      cfg.agreement = CartelAgreement::from_lambda(lambda, floor);
      cfg.seed = RandomStream(base.seed).split(cell++).next_u64();
      const SimReport rep = simulate_cartel_entry(cfg);
      WelfareGridRow row;
      row.gamma = gamma;
      row.lambda = lambda;
      row.W_analytic = welfare_W(lambda, gamma, floor);
      row.V_analytic = mean_member_payoff_V(lambda, gamma, floor);
      row.W_mc = kPayoffScale * rep.welfare_per_player.mean;
      row.W_stderr = kPayoffScale * rep.welfare_per_player.std_error;
      row.V_mc = kPayoffScale * rep.member_payoff.mean;
      row.V_stderr = kPayoffScale * rep.member_payoff.std_error;
      row.membership_share = rep.membership_share.mean;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace infcartel
