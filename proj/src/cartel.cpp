#include "infcartel/cartel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "infcartel/numeric.hpp"

namespace infcartel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_gamma(double gamma, const char* where) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::domain_error(std::string(where) + ": gamma must lie in (0, 1)");
}

void check_lambda(double lambda, const char* where) {
  if (!(lambda > 0.0 && lambda <= 1.0))
    throw std::domain_error(std::string(where) + ": lambda must lie in (0, 1]");
}

void check_min_reach(double min_reach) {
  if (!(min_reach >= 1.0)) throw std::domain_error("CartelAgreement: min_reach must be >= 1");
}

}  // namespace

CartelAgreement CartelAgreement::from_radians(double requirement, double min_reach) {
  if (!(requirement > 0.0 && requirement <= kPi))
    throw std::domain_error("CartelAgreement: requirement must lie in (0, pi]");
  check_min_reach(min_reach);
  double lambda = std::tan(0.5 * requirement);
  if (std::abs(requirement - kPi / 2.0) <= 1e-15) lambda = 1.0;
  if (requirement == kPi) lambda = kInf;
  return CartelAgreement(requirement, lambda, min_reach);
}

CartelAgreement CartelAgreement::from_degrees(double degrees, double min_reach) {
  if (degrees == 180.0) return from_radians(kPi, min_reach);
  if (degrees == 90.0) return from_radians(kPi / 2.0, min_reach);
  return from_radians(deg_to_rad(degrees), min_reach);
}

CartelAgreement CartelAgreement::from_lambda(double lambda, double min_reach) {
  if (!(lambda > 0.0)) throw std::domain_error("CartelAgreement: lambda must be positive");
  check_min_reach(min_reach);
  const double requirement = std::isinf(lambda) ? kPi : 2.0 * std::atan(lambda);
  return CartelAgreement(requirement, lambda, min_reach);
}

CartelAgreement CartelAgreement::with_min_reach(double min_reach) const {
  check_min_reach(min_reach);
  return CartelAgreement(requirement_, lambda_, min_reach);
}

PayoffCoefficients cartel_payoff_coefficients(const CartelAgreement& agreement, double gamma) {
  check_gamma(gamma, "cartel_payoff_coefficients");
  if (agreement.requirement() > kPi / 2.0)
    return cartel_payoff_coefficients_quadrature(agreement, gamma);
  const double l = agreement.lambda();
  const double scale = 4.0 * l / (l * l + 1.0);
  return PayoffCoefficients{-scale * (l - gamma), scale * (1.0 - gamma)};
}

PayoffCoefficients cartel_payoff_coefficients_quadrature(const CartelAgreement& agreement,
                                                         double gamma) {
  check_gamma(gamma, "cartel_payoff_coefficients_quadrature");
  const double top = agreement.requirement();
  const auto own = [gamma](double d) {
    return gamma * std::cos(d) - engagement_cost(TopicDistance(std::min(d, kPi)));
  };
  const auto benefit = [](double d) { return std::cos(d); };
  // The cost has a kink at 90 degrees; integrate the pieces separately.
  double own_integral = 0.0;
  double benefit_integral = 0.0;
  const double kink = std::min(top, kPi / 2.0);
  own_integral += numeric::integrate(own, 0.0, kink, 1e-12);
  benefit_integral += numeric::integrate(benefit, 0.0, kink, 1e-12);
  if (top > kink) {
    own_integral += numeric::integrate(own, kink, top, 1e-12);
    benefit_integral += numeric::integrate(benefit, kink, top, 1e-12);
  }
  return PayoffCoefficients{2.0 * own_integral, 2.0 * (1.0 - gamma) * benefit_integral};
}

double cartel_member_payoff(double reach, const CartelAgreement& agreement, double gamma,
                            double expected_member_reach) {
  if (!(reach >= 1.0)) throw std::domain_error("cartel_member_payoff: reach must be >= 1");
  return cartel_payoff_coefficients(agreement, gamma).payoff(reach, expected_member_reach);
}

std::string_view to_string(EntryKind kind) {
  switch (kind) {
    case EntryKind::AllJoin: return "all_join";
    case EntryKind::ThresholdJoin: return "threshold_join";
    case EntryKind::NobodyJoins: return "nobody_joins";
  }
  return "unknown";
}

EntryOutcome entry_equilibrium(const CartelAgreement& agreement, double gamma) {
  check_gamma(gamma, "entry_equilibrium");
  const double l = agreement.lambda();
  if (l <= gamma) return EntryOutcome{EntryKind::AllJoin, std::nullopt};
  if (l < 1.0)
    return EntryOutcome{EntryKind::ThresholdJoin,
                        (2.0 - gamma - l) / (l - gamma) * agreement.min_reach()};
  return EntryOutcome{EntryKind::NobodyJoins, std::nullopt};
}

double participation_probability(double lambda, double gamma, double min_reach) {
  check_gamma(gamma, "participation_probability");
  if (!(lambda > 0.0)) throw std::domain_error("participation_probability: lambda must be positive");
  check_min_reach(min_reach);
  const double eligible = 1.0 / (min_reach * min_reach);
  if (lambda <= gamma) return eligible;
  if (lambda >= 1.0) return 0.0;
  const double s = 2.0 - gamma - lambda;
  return 4.0 * (1.0 - gamma) * (1.0 - lambda) / (s * s) * eligible;
}

double welfare_W(double lambda, double gamma, double min_reach) {
  check_lambda(lambda, "welfare_W");
  check_gamma(gamma, "welfare_W");
  check_min_reach(min_reach);
  const double l2 = lambda * lambda + 1.0;
  if (lambda <= gamma) return 8.0 * lambda * (1.0 - lambda) / l2 / min_reach;
  const double one_minus = 1.0 - lambda;
  return 16.0 * lambda * one_minus * one_minus / (l2 * (2.0 - gamma - lambda)) / min_reach;
}

double mean_member_payoff_V(double lambda, double gamma, double min_reach) {
  check_lambda(lambda, "mean_member_payoff_V");
  check_gamma(gamma, "mean_member_payoff_V");
  check_min_reach(min_reach);
  const double base = 4.0 * lambda * (1.0 - lambda) / (lambda * lambda + 1.0);
  if (lambda <= gamma) return 2.0 * base * min_reach;
  return base * (2.0 - gamma - lambda) / (1.0 - gamma) * min_reach;
}

double gamma_inc() {
  const double c = std::cbrt(64.0 + 9.0 * std::sqrt(67.0));
  return (-2.0 - 11.0 / c + c) / 3.0;
}

double gamma_inc_quartic(double lambda) {
  const double l = lambda;
  return (((l + 1.0) * l + 3.0) * l - 7.0) * l + 2.0;
}

double welfare_slope_cubic(double lambda, double gamma) {
  const double l = lambda;
  return gamma * l * l * l + gamma * l * l + 3.0 * gamma * l - gamma - 6.0 * l + 2.0;
}

double first_best_lambda() { return std::sqrt(2.0) - 1.0; }

double optimal_lambda(double gamma) {
  check_gamma(gamma, "optimal_lambda");
  if (gamma >= first_best_lambda()) return first_best_lambda();
  if (gamma >= gamma_inc()) return gamma;
  constexpr double lo = 1e-9;
  constexpr double hi = 1.0 - 1e-9;
  const auto w = [gamma](double l) { return welfare_slope_cubic(l, gamma); };
  if (!(w(lo) > 0.0 && w(hi) < 0.0))
    throw std::logic_error("optimal_lambda: welfare slope does not change sign on (0, 1)");
  return numeric::bisect(w, lo, hi, 1e-13).root;
}

EntryEffects entry_requirement_effects(const CartelAgreement& agreement, double gamma) {
  check_gamma(gamma, "entry_requirement_effects");
  const EntryOutcome outcome = entry_equilibrium(agreement, gamma);
  const double lambda = agreement.lambda();
  const double floor = agreement.min_reach();
  EntryEffects fx;
  fx.kind = outcome.kind;
  switch (outcome.kind) {
    case EntryKind::AllJoin:
      fx.r_bar = kInf;
      break;
    case EntryKind::ThresholdJoin:
      fx.r_bar = *outcome.r_bar;
      break;
    case EntryKind::NobodyJoins:
      fx.r_bar = floor;
      return fx;
  }
  fx.V = mean_member_payoff_V(lambda, gamma, floor);
  fx.W = welfare_W(lambda, gamma, floor);
  fx.participation = participation_probability(lambda, gamma, floor);
  return fx;
}

}  // namespace infcartel
