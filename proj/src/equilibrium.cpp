#include "infcartel/equilibrium.hpp"

#include <cmath>
#include <stdexcept>

namespace infcartel {

std::string_view to_string(RuleKind kind) {
  switch (kind) {
    case RuleKind::Equilibrium: return "equilibrium";
    case RuleKind::SocialOptimum: return "social_optimum";
    case RuleKind::Cartel: return "cartel";
  }
  return "unknown";
}

EngagementRule equilibrium_rule(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::domain_error("equilibrium_rule: gamma must lie in (0, 1)");
  return equilibrium_rule_unchecked(gamma);
}

EngagementRule equilibrium_rule_unchecked(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw std::domain_error("equilibrium_rule_unchecked: gamma must lie in [0, 1]");
  return EngagementRule{std::atan(gamma), RuleKind::Equilibrium};
}

EngagementRule social_optimum_rule() { return EngagementRule{kPi / 4.0, RuleKind::SocialOptimum}; }

double engagement_probability(const EngagementRule& rule) { return rule.threshold / kPi; }

bool individually_optimal(double gamma, TopicDistance delta) {
  return gamma * std::cos(delta.radians()) >= engagement_cost(delta);
}

bool socially_optimal(TopicDistance delta) {
  return std::cos(delta.radians()) >= engagement_cost(delta);
}

}  // namespace infcartel
