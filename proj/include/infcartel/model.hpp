#pragma once

#include <numbers>

#include "infcartel/random.hpp"

namespace infcartel {

inline constexpr double kPi = std::numbers::pi;

// Angles are radians everywhere inside the library. Degrees only appear at
// the CLI and file boundaries, and only through these two functions.
constexpr double deg_to_rad(double degrees) { return degrees * kPi / 180.0; }
constexpr double rad_to_deg(double radians) { return radians * 180.0 / kPi; }

/// A player's (topic, reach) type. `alpha` is an angle on the topic circle in
/// [0, 2*pi), `reach` is the audience size, at least 1.
struct PlayerType {
  double alpha = 0.0;
  double reach = 1.0;

  /// Validating constructor; throws std::domain_error on a bad type.
  static PlayerType make(double alpha, double reach);
};

/// Shortest arc between two topics, in [0, pi].
class TopicDistance {
 public:
  TopicDistance() = default;
  /// Throws std::domain_error unless 0 <= radians <= pi.
  explicit TopicDistance(double radians);

  double radians() const { return delta_; }
  double degrees() const { return rad_to_deg(delta_); }

 private:
  double delta_ = 0.0;
};

/// Advertising-market parameters: internalized share gamma in (0,1),
/// marginal engagement value v >= 0, cartel share of engagement epsilon in
/// [0,1].
struct MarketParams {
  double gamma = 0.5;
  double v = 0.0;
  double epsilon = 0.0;

  static MarketParams make(double gamma, double v, double epsilon);
};

/// Maps u in [0,1) to a reach with density 2 R^-3 on [1, inf).
double reach_from_uniform(double u);

/// CDF of the reach distribution, 1 - R^-2.
double reach_cdf(double reach);

/// E[R | lo <= R <= hi] under density 2 R^-3; `hi` may be +inf.
double truncated_mean_reach(double lo, double hi);

/// Pr(lo <= R <= hi).
double reach_mass(double lo, double hi);

PlayerType sample_player(RandomStream& stream);

/// Sample a reach conditional on lo <= R <= hi by inverting the truncated CDF.
double sample_truncated_reach(RandomStream& stream, double lo, double hi);

TopicDistance topic_distance(double a1, double a2);

/// sin(delta) up to 90 degrees, 1 beyond.
double engagement_cost(TopicDistance delta);

/// Social welfare of one engagement decision: engage * R (cos delta - C(delta)).
double engagement_welfare(bool engage, double reach, TopicDistance delta);

/// Payoff of player t given own action, the follower's action, the distance
/// to the predecessor (delta_prev) and the follower's distance and reach.
double player_payoff(bool engage, bool next_engages, const PlayerType& own,
                     TopicDistance delta_prev, TopicDistance delta_next,
                     double next_reach, double gamma);

}  // namespace infcartel
