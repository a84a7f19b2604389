#pragma once

#include <optional>
#include <string_view>

#include "infcartel/model.hpp"

namespace infcartel {

/// Conversion factor between closed-form cartel quantities and per-member
/// statistical expectations. The closed forms integrate topic distance with
/// weight 2 instead of the uniform density 1/pi, so they equal 2*pi times the
/// expectation. Multiply a Monte Carlo mean by this before comparing.
inline constexpr double kPayoffScale = 2.0 * kPi;

/// Engagement requirement Lambda in (0, pi] plus an optional minimum reach.
/// lambda = tan(Lambda / 2) is cached; Lambda = 90 degrees maps to exactly 1
/// and Lambda = 180 degrees to +inf.
class CartelAgreement {
 public:
  static CartelAgreement from_radians(double requirement, double min_reach = 1.0);
  static CartelAgreement from_degrees(double degrees, double min_reach = 1.0);
  static CartelAgreement from_lambda(double lambda, double min_reach = 1.0);

  /// Lambda, radians.
  double requirement() const { return requirement_; }
  double requirement_degrees() const { return rad_to_deg(requirement_); }
  double lambda() const { return lambda_; }
  double min_reach() const { return min_reach_; }

  CartelAgreement with_min_reach(double min_reach) const;

 private:
  CartelAgreement(double requirement, double lambda, double min_reach)
      : requirement_(requirement), lambda_(lambda), min_reach_(min_reach) {}

  double requirement_;
  double lambda_;
  double min_reach_;
};

/// u_cartel(R) = own_reach * R + member_reach * E[R of next member], in
/// closed-form units (see kPayoffScale).
struct PayoffCoefficients {
  double own_reach = 0.0;
  double member_reach = 0.0;

  double payoff(double reach, double expected_member_reach) const {
    return own_reach * reach + member_reach * expected_member_reach;
  }
};

/// Closed form for Lambda <= 90 degrees, adaptive quadrature of the defining
/// integrals beyond.
PayoffCoefficients cartel_payoff_coefficients(const CartelAgreement& agreement, double gamma);

/// Always by quadrature, any Lambda.
PayoffCoefficients cartel_payoff_coefficients_quadrature(const CartelAgreement& agreement,
                                                         double gamma);

/// Expected payoff of joining for a player with `reach`. Throws
/// std::domain_error if reach < 1.
double cartel_member_payoff(double reach, const CartelAgreement& agreement, double gamma,
                            double expected_member_reach);

enum class EntryKind { AllJoin, ThresholdJoin, NobodyJoins };

std::string_view to_string(EntryKind kind);

struct EntryOutcome {
  EntryKind kind = EntryKind::NobodyJoins;
  /// Highest reach that joins; set iff kind == ThresholdJoin.
  std::optional<double> r_bar;
};

/// Equilibrium of the entry game without advertising. lambda == gamma counts
/// as AllJoin. With a minimum reach the threshold scales by it.
EntryOutcome entry_equilibrium(const CartelAgreement& agreement, double gamma);

/// Share of all players that join, Pr(min_reach <= R <= r_bar).
double participation_probability(double lambda, double gamma, double min_reach = 1.0);

/// Average payoff over all players (non-members count as zero), lambda in (0, 1].
double welfare_W(double lambda, double gamma, double min_reach = 1.0);

/// Average payoff of a cartel member, lambda in (0, 1].
double mean_member_payoff_V(double lambda, double gamma, double min_reach = 1.0);

/// The internalized-share threshold below which the best cartel excludes
/// high-reach players; cube-root closed form.
double gamma_inc();

/// lambda^4 + lambda^3 + 3 lambda^2 - 7 lambda + 2, whose root in (0,1) is gamma_inc.
double gamma_inc_quartic(double lambda);

/// Cubic whose sign equals the sign of W'(lambda) on the partial-participation branch.
double welfare_slope_cubic(double lambda, double gamma);

/// First-best requirement sqrt(2) - 1 (Lambda = 45 degrees).
double first_best_lambda();

/// Welfare-maximizing lambda for a given gamma in (0,1).
double optimal_lambda(double gamma);

struct EntryEffects {
  double V = 0.0;
  double W = 0.0;
  /// +inf for AllJoin, equal to min_reach when nobody joins.
  double r_bar = 0.0;
  double participation = 0.0;
  EntryKind kind = EntryKind::NobodyJoins;
};

/// V, W and the threshold under the agreement's minimum reach.
EntryEffects entry_requirement_effects(const CartelAgreement& agreement, double gamma);

}  // namespace infcartel
