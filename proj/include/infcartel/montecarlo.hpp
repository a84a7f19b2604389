#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "infcartel/cartel.hpp"
#include "infcartel/numeric.hpp"

namespace infcartel {

struct SimConfig {
  std::size_t n_players = 100000;  // per replication
  double gamma = 0.5;
  double v = 0.0;
  double epsilon = 0.0;
  std::optional<CartelAgreement> agreement;
  std::uint64_t seed = 1;
  std::size_t replications = 10;
  unsigned threads = 1;

  // Entry fixed point.
  double r_bar_start = 2.0;
  double tolerance = 1e-9;
  int max_iterations = 10000;
  /// Halve the step once successive updates change sign.
  bool damp_on_oscillation = true;

  /// Throws std::invalid_argument on n_players < 2, replications < 1, or
  /// parameters outside their domains.
  void validate() const;
};

/// Mean across replications and its standard error.
struct Stat {
  double mean = 0.0;
  double std_error = 0.0;
};

struct SimReport {
  std::string kind;
  Stat engagement_rate;
  Stat welfare_per_player;
  /// Natural runs: mean realized payoff per player. Entry runs: mean realized
  /// payoff of interior cartel members.
  Stat member_payoff;
  Stat membership_share;
  Stat realized_price;
  /// +inf when every eligible player joins; NaN for runs without a cartel.
  Stat fixed_point_r_bar;
  /// Largest number of best-response iterations any replication needed.
  int iterations = 0;
  std::size_t replications = 0;
  std::size_t n_players = 0;
  std::uint64_t seed = 0;
};

/// Thrown when the best-response iteration does not settle.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_iterate)
      : std::runtime_error(what), last_iterate_(last_iterate) {}
  double last_iterate() const { return last_iterate_; }

 private:
  double last_iterate_;
};

/// Players engage iff delta <= arctan(gamma). The first player of each
/// sequence has no predecessor and is excluded.
SimReport simulate_natural(const SimConfig& config);

/// Best-response iteration on the membership threshold using sampled reaches,
/// then realized payoffs along the simulated member subsequence. Uses the
/// advertising-augmented payoff when v > 0.
SimReport simulate_cartel_entry(const SimConfig& config);

/// Natural and cartel engagement events mixed in proportion (1-eps, eps);
/// realized price is v times the blended mean match quality.
SimReport simulate_market(const SimConfig& config);

/// Monte Carlo mean of the realized cartel payoff of a player with fixed
/// `reach`, next member's reach drawn from [min_reach, r_bar]. Expectation
/// units; multiply by kPayoffScale to compare with cartel_member_payoff.
Stat estimate_member_payoff(double reach, const CartelAgreement& agreement, double gamma,
                            double r_bar, std::size_t draws, std::size_t replications,
                            std::uint64_t seed);

struct WelfareGridRow {
  double gamma = 0.0;
  double lambda = 0.0;
  double W_analytic = 0.0;
  double W_mc = 0.0;
  double W_stderr = 0.0;
  double V_analytic = 0.0;
  double V_mc = 0.0;
  double V_stderr = 0.0;
  double membership_share = 0.0;
};

/// Analytic W and V against entry simulations over a (gamma, lambda) grid.
/// MC values are rescaled by kPayoffScale.
std::vector<WelfareGridRow> welfare_grid(const std::vector<double>& gammas,
                                         const std::vector<double>& lambdas,
                                         const SimConfig& base);

Stat summarize(const std::vector<double>& values);

}  // namespace infcartel
