#pragma once

#include "infcartel/cartel.hpp"
#include "infcartel/model.hpp"

namespace infcartel {

/// Engagement prices, all in the same value units as v.
struct PriceQuote {
  double p_natural = 0.0;
  double p_cartel = 0.0;
  double p_engagement = 0.0;
};

/// v * E[cos delta | delta <= arctan gamma] = v gamma / (arctan(gamma) sqrt(gamma^2 + 1)).
double price_natural(double gamma, double v);

/// v * E[cos delta | delta <= Lambda] = v sin(Lambda) / Lambda.
double price_cartel(double requirement, double v);

/// Blend (1 - epsilon) p_natural + epsilon p_cartel.
PriceQuote price_engagement(const MarketParams& params, double requirement);

/// u_cartel converted to expectation units plus the advertising term
/// (Lambda / pi) (1 - gamma) E[R | cartel] p_engagement.
double cartel_ad_payoff(double reach, const CartelAgreement& agreement,
                        const MarketParams& params, double expected_member_reach);

/// Coefficients of cartel_ad_payoff as an affine function of own reach:
/// payoff(R) = own_reach * R + member_reach * E[R | cartel]. Both in
/// expectation units, with advertising folded into member_reach.
PayoffCoefficients cartel_ad_coefficients(const CartelAgreement& agreement,
                                          const MarketParams& params);

/// Smallest v >= 0 at which a player with reach r_bar_target is indifferent
/// about joining, with E[R | cartel] the mean over [min_reach, r_bar_target].
/// Returns 0 when that player already joins without advertising. Throws
/// std::domain_error when the advertising term vanishes (epsilon = 1 with
/// Lambda = pi) and advertising cannot help.
double min_v_for_sustained_cartel(const CartelAgreement& agreement, double gamma, double epsilon,
                                  double r_bar_target);

struct TighteningGain {
  double epsilon_star = 0.0;
  bool prefers_tighter = false;
  /// d/dLambda of (Lambda / pi) * p_engagement / v at Lambda = pi.
  double slope_at_pi = 0.0;
};

/// Whether members of a general cartel gain from slightly lowering Lambda.
TighteningGain tightening_gain_sign(double gamma, double epsilon);

/// (Lambda / pi) * p_engagement(Lambda) / v, the per-member advertising
/// factor whose slope decides tightening.
double advertising_factor(double gamma, double epsilon, double requirement);

struct GeneralCartelEffects {
  /// Expected welfare change per unit of engagement mass and unit reach.
  double social_welfare_delta = 0.0;
  /// p_engagement - p_natural.
  double outsider_price_delta = 0.0;
  /// Expected advertiser profit, zero under competitive pricing.
  double advertiser_expected_profit = 0.0;
  /// Profit of an advertiser matched with natural engagement, per unit.
  double natural_match_profit = 0.0;
  /// Profit of an advertiser matched with cartel engagement, per unit.
  double cartel_match_profit = 0.0;
};

/// Welfare effects of a general cartel (Lambda = pi) with share epsilon.
GeneralCartelEffects welfare_effects_of_general_cartel(const MarketParams& params);

/// E[C(delta)] for delta uniform on [0, pi].
double expected_uniform_cost();

}  // namespace infcartel
