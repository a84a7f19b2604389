#include <cmath>
#include <limits>
#include <memory>

#include "cli.hpp"
#include "infcartel/advertising.hpp"
#include "infcartel/cartel.hpp"
#include "infcartel/equilibrium.hpp"
#include "infcartel/montecarlo.hpp"

namespace infcartel::cli {

namespace {

// Cartel terms shared by several commands. Angles in degrees.
struct AgreementArgs {
  double requirement_deg = 45.0;
  double lambda = 0.0;
  double min_reach = 1.0;

  void attach(CLI::App* sub) {
    auto* req = sub->add_option("--requirement", requirement_deg, "Engagement requirement, degrees in (0, 180]");
    sub->add_option("--lambda", lambda, "Requirement as tan(requirement/2); overrides --requirement")
        ->excludes(req);
    sub->add_option("--min-reach", min_reach, "Minimum reach to join, at least 1");
  }
  CartelAgreement agreement() const {
    return lambda > 0.0 ? CartelAgreement::from_lambda(lambda, min_reach)
                        : CartelAgreement::from_degrees(requirement_deg, min_reach);
  }
};

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json stat_row(const std::string& name, const Stat& s) {
  return Json::array({name, s.mean, s.std_error});
}

void add_equilibrium(CLI::App& app, Registry& reg) {
  auto gammas = std::make_shared<std::vector<double>>(std::vector<double>{0.5});
  auto* sub = app.add_subcommand("equilibrium", "Natural and socially optimal engagement thresholds");
  sub->add_option("--gamma", *gammas, "Internalized share(s) in (0, 1)")->delimiter(',');
  reg.add(sub, [gammas] {
    Result r{"equilibrium", {{"gamma", "threshold_deg", "engagement_probability", "social_threshold_deg",
                              "social_engagement_probability"}}};
    const EngagementRule social = social_optimum_rule();
    for (double g : *gammas) {
      const EngagementRule rule = equilibrium_rule(g);
      r.table.add({g, rad_to_deg(rule.threshold), engagement_probability(rule), rad_to_deg(social.threshold),
                   engagement_probability(social)});
    }
    return r;
  });
}

void add_cartel(CLI::App& app, Registry& reg) {
  struct Args {
    std::vector<double> gammas{0.5};
    AgreementArgs agreement;
  };
  auto a = std::make_shared<Args>();
  auto* sub = app.add_subcommand("cartel", "Entry equilibrium and payoffs of a cartel agreement");
  sub->add_option("--gamma", a->gammas, "Internalized share(s) in (0, 1)")->delimiter(',');
  a->agreement.attach(sub);
  reg.add(sub, [a] {
    Result r{"cartel", {{"gamma", "requirement_deg", "lambda", "min_reach", "entry", "r_bar", "participation",
                         "coef_own_reach", "coef_member_reach", "W", "V"}}};
    const CartelAgreement ag = a->agreement.agreement();
    for (double g : a->gammas) {
      const EntryOutcome e = entry_equilibrium(ag, g);
      const PayoffCoefficients coef = cartel_payoff_coefficients(ag, g);
      const bool in_domain = ag.lambda() <= 1.0;
      r.table.add({g, ag.requirement_degrees(), number_or_null(ag.lambda()), ag.min_reach(),
                   std::string(to_string(e.kind)), e.r_bar ? Json(*e.r_bar) : Json(nullptr),
                   participation_probability(ag.lambda(), g, ag.min_reach()), coef.own_reach, coef.member_reach,
                   in_domain ? Json(welfare_W(ag.lambda(), g, ag.min_reach())) : Json(nullptr),
                   in_domain ? Json(mean_member_payoff_V(ag.lambda(), g, ag.min_reach())) : Json(nullptr)});
    }
    return r;
  });
}

void add_welfare_curve(CLI::App& app, Registry& reg) {
  struct Args {
    std::vector<double> gammas{0.5, 0.375, 0.1};
    std::vector<double> lambdas;
    double lambda_min = 0.001;
    double lambda_max = 1.0;
    std::size_t points = 1000;
    double min_reach = 1.0;
    std::vector<double> mc_lambdas;
    std::size_t mc_players = 50000;
    std::size_t mc_replications = 20;
    std::uint64_t seed = 1;
    unsigned threads = 1;
  };
  auto a = std::make_shared<Args>();
  auto* sub = app.add_subcommand("welfare-curve", "Welfare and member payoff against the requirement");
  sub->add_option("--gamma", a->gammas, "Internalized share(s) in (0, 1)")->delimiter(',');
  sub->add_option("--lambda", a->lambdas, "Explicit lambda grid in (0, 1]; overrides the even grid")->delimiter(',');
  sub->add_option("--lambda-min", a->lambda_min, "Smallest lambda of the even grid");
  sub->add_option("--lambda-max", a->lambda_max, "Largest lambda of the even grid");
  sub->add_option("--points", a->points, "Points of the even grid");
  sub->add_option("--min-reach", a->min_reach, "Minimum reach to join");
  sub->add_option("--mc-lambda", a->mc_lambdas, "Lambda values for a Monte Carlo overlay")->delimiter(',');
  sub->add_option("--mc-players", a->mc_players, "Players per overlay replication");
  sub->add_option("--mc-replications", a->mc_replications, "Replications per overlay point");
  sub->add_option("--seed", a->seed, "Overlay seed");
  sub->add_option("--threads", a->threads, "Worker threads for the overlay");
  reg.add(sub, [a] {
    std::vector<double> grid = a->lambdas;
    if (grid.empty()) {
      if (!(a->lambda_min > 0.0 && a->lambda_min < a->lambda_max && a->lambda_max <= 1.0) || a->points < 2)
        throw UsageError("welfare-curve: need 0 < lambda-min < lambda-max <= 1 and points >= 2");
      for (std::size_t i = 0; i < a->points; ++i)
        grid.push_back(a->lambda_min + (a->lambda_max - a->lambda_min) * static_cast<double>(i) /
                                           static_cast<double>(a->points - 1));
    }
    for (double l : grid)
      if (!(l > 0.0 && l <= 1.0)) throw UsageError("welfare-curve: lambda grid must lie in (0, 1]");
    for (double l : a->mc_lambdas)
      if (!(l > 0.0 && l <= 1.0)) throw UsageError("welfare-curve: mc-lambda must lie in (0, 1]");
    for (double g : a->gammas)
      if (!(g > 0.0 && g < 1.0)) throw UsageError("welfare-curve: gamma must lie in (0, 1)");

    Result r{"welfare-curve", {{"gamma", "lambda", "marker", "W", "V", "membership_share", "W_mc", "W_se", "V_mc",
                                "V_se"}}};
    const double rl = a->min_reach;
    auto analytic = [&](double g, double l, const std::string& marker) {
      r.table.add({g, l, marker, welfare_W(l, g, rl), mean_member_payoff_V(l, g, rl),
                   participation_probability(l, g, rl), nullptr, nullptr, nullptr, nullptr});
    };
    for (double g : a->gammas) {
      for (double l : grid) analytic(g, l, "");
      analytic(g, first_best_lambda(), "lambda_fb");
      analytic(g, gamma_inc(), "gamma_inc");
      analytic(g, optimal_lambda(g), "lambda_star");
    }
    if (!a->mc_lambdas.empty()) {
      SimConfig base;
      base.n_players = a->mc_players;
      base.replications = a->mc_replications;
      base.seed = a->seed;
      base.threads = a->threads;
      base.agreement = CartelAgreement::from_lambda(0.5, rl);
      for (const auto& m : welfare_grid(a->gammas, a->mc_lambdas, base))
        r.table.add({m.gamma, m.lambda, "mc", m.W_analytic, m.V_analytic, m.membership_share, m.W_mc, m.W_stderr,
                     m.V_mc, m.V_stderr});
    }
    r.metadata = {{"lambda_fb", first_best_lambda()}, {"gamma_inc", gamma_inc()}};
    return r;
  });
}

void add_advertising(CLI::App& app, Registry& reg) {
  struct Args {
    double gamma = 0.5, v = 1.0, epsilon = 0.3;
    AgreementArgs agreement{180.0};
  };
  auto a = std::make_shared<Args>();
  auto* sub = app.add_subcommand("advertising", "Engagement prices and advertising effects");
  sub->add_option("--gamma", a->gamma, "Internalized share in (0, 1)");
  sub->add_option("--v", a->v, "Advertiser value of a perfect match");
  sub->add_option("--epsilon", a->epsilon, "Cartel share of engagement in [0, 1]");
  a->agreement.attach(sub);
  reg.add(sub, [a] {
    const CartelAgreement ag = a->agreement.agreement();
    const MarketParams params = MarketParams::make(a->gamma, a->v, a->epsilon);
    const PriceQuote q = price_engagement(params, ag.requirement());
    const TighteningGain t = tightening_gain_sign(a->gamma, a->epsilon);
    const GeneralCartelEffects e = welfare_effects_of_general_cartel(params);
    Result r{"advertising", {{"quantity", "value"}}};
    r.table.add({"p_natural", q.p_natural});
    r.table.add({"p_cartel", q.p_cartel});
    r.table.add({"p_engagement", q.p_engagement});
    r.table.add({"advertising_factor", advertising_factor(a->gamma, a->epsilon, ag.requirement())});
    r.table.add({"epsilon_star", t.epsilon_star});
    r.table.add({"prefers_tighter", t.prefers_tighter});
    r.table.add({"slope_at_pi", t.slope_at_pi});
    r.table.add({"general_social_welfare_delta", e.social_welfare_delta});
    r.table.add({"general_outsider_price_delta", e.outsider_price_delta});
    r.table.add({"general_advertiser_expected_profit", e.advertiser_expected_profit});
    r.table.add({"general_natural_match_profit", e.natural_match_profit});
    r.table.add({"general_cartel_match_profit", e.cartel_match_profit});
    return r;
  });
}

void add_min_v(CLI::App& app, Registry& reg) {
  struct Args {
    double gamma = 0.5, epsilon = 0.3, r_bar = 2.0;
    AgreementArgs agreement{180.0};
  };
  auto a = std::make_shared<Args>();
  auto* sub = app.add_subcommand("min-v", "Smallest advertiser value sustaining a membership threshold");
  sub->add_option("--gamma", a->gamma, "Internalized share in (0, 1)");
  sub->add_option("--epsilon", a->epsilon, "Cartel share of engagement in [0, 1]");
  sub->add_option("--r-bar", a->r_bar, "Target membership threshold, above 1");
  a->agreement.attach(sub);
  reg.add(sub, [a] {
    const CartelAgreement ag = a->agreement.agreement();
    Result r{"min-v", {{"gamma", "epsilon", "requirement_deg", "r_bar", "min_v"}}};
    r.table.add({a->gamma, a->epsilon, ag.requirement_degrees(), a->r_bar,
                 number_or_null(min_v_for_sustained_cartel(ag, a->gamma, a->epsilon, a->r_bar))});
    return r;
  });
}

void add_simulate(CLI::App& app, Registry& reg) {
  auto* sim = app.add_subcommand("simulate", "Monte Carlo simulations");
  sim->require_subcommand(1);
  for (const std::string kind : {"natural", "cartel", "market"}) {
    struct Args {
      SimConfig cfg;
      AgreementArgs agreement;
    };
    auto a = std::make_shared<Args>();
    auto* sub = sim->add_subcommand(kind, "Simulate the " + kind + " engagement process");
    sub->add_option("--gamma", a->cfg.gamma, "Internalized share in (0, 1)");
    sub->add_option("--n", a->cfg.n_players, "Players per replication");
    sub->add_option("--replications", a->cfg.replications, "Independent replications");
    sub->add_option("--seed", a->cfg.seed, "Root seed");
    sub->add_option("--threads", a->cfg.threads, "Worker threads; results do not depend on it");
    if (kind != "natural") {
      sub->add_option("--v", a->cfg.v, "Advertiser value");
      a->agreement.attach(sub);
      sub->add_option("--r-bar-start", a->cfg.r_bar_start, "Starting threshold of the best-response iteration");
      sub->add_option("--tolerance", a->cfg.tolerance, "Convergence tolerance");
      sub->add_option("--max-iterations", a->cfg.max_iterations, "Iteration limit");
    }
    if (kind == "market") sub->add_option("--epsilon", a->cfg.epsilon, "Cartel share of engagement");
    reg.add(sub, [a, kind] {
      SimConfig cfg = a->cfg;
      if (kind != "natural") cfg.agreement = a->agreement.agreement();
      const SimReport s = kind == "natural" ? simulate_natural(cfg)
                          : kind == "cartel" ? simulate_cartel_entry(cfg)
                                             : simulate_market(cfg);
      Result r{"simulate-" + kind, {{"statistic", "mean", "std_error"}}};
      r.table.add(stat_row("engagement_rate", s.engagement_rate));
      r.table.add(stat_row("welfare_per_player", s.welfare_per_player));
      r.table.add(stat_row("member_payoff", s.member_payoff));
      r.table.add(stat_row("membership_share", s.membership_share));
      r.table.add(stat_row("realized_price", s.realized_price));
      r.table.add(stat_row("fixed_point_r_bar", s.fixed_point_r_bar));
      r.metadata = {{"kind", s.kind}, {"iterations", s.iterations}, {"replications", s.replications},
                    {"n_players", s.n_players}, {"seed", s.seed}};
      return r;
    });
  }
}

}  // namespace

void add_model_commands(CLI::App& app, Registry& registry) {
  add_equilibrium(app, registry);
  add_cartel(app, registry);
  add_welfare_curve(app, registry);
  add_advertising(app, registry);
  add_min_v(app, registry);
  add_simulate(app, registry);
}

}  // namespace infcartel::cli
