#include "infcartel/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace infcartel {

std::uint64_t RandomStream::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("RandomStream::below: n must be positive");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % n;
}

double RandomStream::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

PlayerType PlayerType::make(double alpha, double reach) {
  if (!(alpha >= 0.0 && alpha < 2.0 * kPi))
    throw std::domain_error("PlayerType: alpha must lie in [0, 2pi), got " + std::to_string(alpha));
  if (!(reach >= 1.0))
    throw std::domain_error("PlayerType: reach must be >= 1, got " + std::to_string(reach));
  return PlayerType{alpha, reach};
}

TopicDistance::TopicDistance(double radians) : delta_(radians) {
  if (!(radians >= 0.0 && radians <= kPi))
    throw std::domain_error("TopicDistance must lie in [0, pi], got " + std::to_string(radians));
}

MarketParams MarketParams::make(double gamma, double v, double epsilon) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::domain_error("MarketParams: gamma must lie in (0, 1)");
  if (!(v >= 0.0)) throw std::domain_error("MarketParams: v must be >= 0");
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw std::domain_error("MarketParams: epsilon must lie in [0, 1]");
  return MarketParams{gamma, v, epsilon};
}

double reach_from_uniform(double u) {
  if (!(u >= 0.0 && u < 1.0)) throw std::domain_error("reach_from_uniform: u must lie in [0, 1)");
  return 1.0 / std::sqrt(1.0 - u);
}

double reach_cdf(double reach) {
  if (reach <= 1.0) return 0.0;
  return 1.0 - 1.0 / (reach * reach);
}

double truncated_mean_reach(double lo, double hi) {
  if (!(lo >= 1.0 && hi >= lo))
    throw std::domain_error("truncated_mean_reach: need 1 <= lo <= hi");
  if (hi == lo) return lo;
  const double inv_hi = std::isinf(hi) ? 0.0 : 1.0 / hi;
  return 2.0 / (1.0 / lo + inv_hi);
}

double reach_mass(double lo, double hi) {
  if (hi <= lo) return 0.0;
  const double inv_hi2 = std::isinf(hi) ? 0.0 : 1.0 / (hi * hi);
  return 1.0 / (lo * lo) - inv_hi2;
}

PlayerType sample_player(RandomStream& stream) {
  const double alpha = 2.0 * kPi * stream.uniform();
  const double reach = reach_from_uniform(stream.uniform());
  return PlayerType{alpha, reach};
}

double sample_truncated_reach(RandomStream& stream, double lo, double hi) {
  // Invert F(R) = (lo^-2 - R^-2) / (lo^-2 - hi^-2) on [lo, hi].
  const double a = 1.0 / (lo * lo);
  const double b = std::isinf(hi) ? 0.0 : 1.0 / (hi * hi);
  const double u = stream.uniform();
  const double inv_r2 = a - u * (a - b);
  return 1.0 / std::sqrt(inv_r2);
}

TopicDistance topic_distance(double a1, double a2) {
  const double d = std::abs(a1 - a2);
  double delta = std::min(d, 2.0 * kPi - d);
  // Inputs in [0, 2pi) keep delta in range up to rounding.
  if (delta < 0.0) delta = 0.0;
  if (delta > kPi) delta = kPi;
  return TopicDistance(delta);
}

double engagement_cost(TopicDistance delta) {
  const double d = delta.radians();
  return d <= kPi / 2.0 ? std::sin(d) : 1.0;
}

double engagement_welfare(bool engage, double reach, TopicDistance delta) {
  if (!engage) return 0.0;
  return reach * (std::cos(delta.radians()) - engagement_cost(delta));
}

double player_payoff(bool engage, bool next_engages, const PlayerType& own,
                     TopicDistance delta_prev, TopicDistance delta_next,
                     double next_reach, double gamma) {
  double u = 0.0;
  if (engage)
    u += gamma * own.reach * std::cos(delta_prev.radians()) - own.reach * engagement_cost(delta_prev);
  if (next_engages) u += (1.0 - gamma) * next_reach * std::cos(delta_next.radians());
  return u;
}

}  // namespace infcartel
