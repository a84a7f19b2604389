#pragma once

#include <string_view>

#include "infcartel/model.hpp"

namespace infcartel {

enum class RuleKind { Equilibrium, SocialOptimum, Cartel };

std::string_view to_string(RuleKind kind);

/// Engage iff the topic distance is at most `threshold` (ties engage).
struct EngagementRule {
  double threshold = 0.0;
  RuleKind kind = RuleKind::Equilibrium;

  bool engages(TopicDistance delta) const { return delta.radians() <= threshold; }
};

/// Non-cooperative equilibrium: engage iff delta <= arctan(gamma).
/// Throws std::domain_error unless 0 < gamma < 1.
EngagementRule equilibrium_rule(double gamma);

/// Same rule without the open-interval check; accepts gamma in [0, 1]. Meant
/// for boundary probes (gamma = 1 reproduces the social optimum).
EngagementRule equilibrium_rule_unchecked(double gamma);

/// Social optimum: engage iff delta <= 45 degrees.
EngagementRule social_optimum_rule();

/// Probability of engaging when the distance is uniform on [0, pi].
double engagement_probability(const EngagementRule& rule);

/// Whether engaging is individually rational: gamma cos(delta) >= C(delta).
bool individually_optimal(double gamma, TopicDistance delta);

/// Whether engaging is socially optimal: cos(delta) >= C(delta).
bool socially_optimal(TopicDistance delta);

}  // namespace infcartel
