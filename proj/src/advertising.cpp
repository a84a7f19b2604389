#include "infcartel/advertising.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace infcartel {

double price_natural(double gamma, double v) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::domain_error("price_natural: gamma must lie in (0, 1]");
  if (!(v >= 0.0)) throw std::domain_error("price_natural: v must be >= 0");
  const double threshold = std::atan(gamma);
  return v * gamma / (threshold * std::sqrt(gamma * gamma + 1.0));
}

double price_cartel(double requirement, double v) {
  if (!(requirement > 0.0 && requirement <= kPi))
    throw std::domain_error("price_cartel: requirement must lie in (0, pi]");
  if (!(v >= 0.0)) throw std::domain_error("price_cartel: v must be >= 0");
  if (requirement == kPi) return 0.0;
  return v * std::sin(requirement) / requirement;
}

PriceQuote price_engagement(const MarketParams& params, double requirement) {
  PriceQuote q;
  q.p_natural = price_natural(params.gamma, params.v);
  q.p_cartel = price_cartel(requirement, params.v);
  q.p_engagement = (1.0 - params.epsilon) * q.p_natural + params.epsilon * q.p_cartel;
  return q;
}

PayoffCoefficients cartel_ad_coefficients(const CartelAgreement& agreement,
                                          const MarketParams& params) {
  const PayoffCoefficients base = cartel_payoff_coefficients(agreement, params.gamma);
  const double p = price_engagement(params, agreement.requirement()).p_engagement;
  const double ad = agreement.requirement() / kPi * (1.0 - params.gamma) * p;
  return PayoffCoefficients{base.own_reach / kPayoffScale, base.member_reach / kPayoffScale + ad};
}

double cartel_ad_payoff(double reach, const CartelAgreement& agreement,
                        const MarketParams& params, double expected_member_reach) {
  if (!(reach >= 1.0)) throw std::domain_error("cartel_ad_payoff: reach must be >= 1");
  return cartel_ad_coefficients(agreement, params).payoff(reach, expected_member_reach);
}

double min_v_for_sustained_cartel(const CartelAgreement& agreement, double gamma, double epsilon,
                                  double r_bar_target) {
  if (!(r_bar_target > 1.0)) throw std::domain_error("min_v_for_sustained_cartel: r_bar_target must exceed 1");
  if (!(r_bar_target >= agreement.min_reach()))
    throw std::domain_error("min_v_for_sustained_cartel: r_bar_target below the entry requirement");
  const MarketParams unit = MarketParams::make(gamma, 1.0, epsilon);
  const double member_mean = truncated_mean_reach(agreement.min_reach(), r_bar_target);
  const double base =
      cartel_member_payoff(r_bar_target, agreement, gamma, member_mean) / kPayoffScale;
  const double p = price_engagement(unit, agreement.requirement()).p_engagement;
  const double slope = agreement.requirement() / kPi * (1.0 - gamma) * member_mean * p;
  if (!(slope > 0.0))
    throw std::domain_error("min_v_for_sustained_cartel: advertising term is zero, no finite v");
  // payoff(v) = base + slope * v is affine and increasing in v.
  return std::max(0.0, -base / slope);
}

double advertising_factor(double gamma, double epsilon, double requirement) {
  const MarketParams unit = MarketParams::make(gamma, 1.0, epsilon);
  return requirement / kPi * price_engagement(unit, requirement).p_engagement;
}

TighteningGain tightening_gain_sign(double gamma, double epsilon) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::domain_error("tightening_gain_sign: gamma must lie in (0, 1)");
  if (!(epsilon >= 0.0 && epsilon <= 1.0))
    throw std::domain_error("tightening_gain_sign: epsilon must lie in [0, 1]");
  TighteningGain g;
  const double root = std::atan(gamma) * std::sqrt(gamma * gamma + 1.0);
  g.epsilon_star = gamma / (gamma + root);
  g.prefers_tighter = epsilon > g.epsilon_star;
  // d/dLambda [(Lambda/pi)((1-eps) s + eps sin(Lambda)/Lambda)] at pi.
  const double s = price_natural(gamma, 1.0);
  g.slope_at_pi = ((1.0 - epsilon) * s - epsilon) / kPi;
  return g;
}

double expected_uniform_cost() {
  // (1/pi) (int_0^{pi/2} sin + int_{pi/2}^{pi} 1) = (1 + pi/2) / pi
  return (1.0 + kPi / 2.0) / kPi;
}

GeneralCartelEffects welfare_effects_of_general_cartel(const MarketParams& params) {
  GeneralCartelEffects fx;
  const PriceQuote q = price_engagement(params, kPi);
  fx.social_welfare_delta = -params.epsilon * expected_uniform_cost();
  fx.outsider_price_delta = q.p_engagement - q.p_natural;
  // Value of a unit of engagement is p_natural for natural and 0 for
  // general-cartel engagement; every advertiser pays p_engagement.
  fx.natural_match_profit = q.p_natural - q.p_engagement;
  fx.cartel_match_profit = q.p_cartel - q.p_engagement;
  fx.advertiser_expected_profit =
      (1.0 - params.epsilon) * fx.natural_match_profit + params.epsilon * fx.cartel_match_profit;
  return fx;
}

}  // namespace infcartel
