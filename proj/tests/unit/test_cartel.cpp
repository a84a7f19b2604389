#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <limits>

#include "infcartel/cartel.hpp"
#include "infcartel/montecarlo.hpp"
#include "infcartel/numeric.hpp"

using namespace infcartel;

namespace {

const double kInf = std::numeric_limits<double>::infinity();
const double kSqrt2m1 = std::sqrt(2.0) - 1.0;

// Golden-section maximum of W over (lo, hi); independent of the cubic.
double argmax_welfare(double gamma, double lo, double hi) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  for (int i = 0; i < 200; ++i) {
    if (welfare_W(c, gamma) > welfare_W(d, gamma)) {
      b = d;
    } else {
      a = c;
    }
    c = b - phi * (b - a);
    d = a + phi * (b - a);
  }
  return 0.5 * (a + b);
}

}  // namespace

TEST_CASE("agreement construction") {
  const auto a = CartelAgreement::from_degrees(90.0);
  CHECK(a.lambda() == 1.0);
  CHECK(CartelAgreement::from_degrees(180.0).lambda() == kInf);
  const auto b = CartelAgreement::from_radians(1.0, 2.0);
  CHECK(b.lambda() == doctest::Approx(std::tan(0.5)).epsilon(1e-12));
  CHECK(b.min_reach() == 2.0);
  CHECK(CartelAgreement::from_lambda(0.5).requirement() == doctest::Approx(2 * std::atan(0.5)));
  CHECK(b.with_min_reach(3.0).min_reach() == 3.0);
  CHECK_THROWS_AS(CartelAgreement::from_radians(0.0), std::domain_error);
  CHECK_THROWS_AS(CartelAgreement::from_radians(kPi + 0.1), std::domain_error);
  CHECK_THROWS_AS(CartelAgreement::from_radians(1.0, 0.5), std::domain_error);
}

TEST_CASE("cartel member payoff examples") {
  const auto at_gamma = CartelAgreement::from_lambda(0.5);
  CHECK(cartel_member_payoff(3.0, at_gamma, 0.5, 2.0) == doctest::Approx(1.6).epsilon(1e-12));
  CHECK(cartel_member_payoff(1.0, at_gamma, 0.5, 2.0) == doctest::Approx(1.6).epsilon(1e-12));
  const auto right = CartelAgreement::from_degrees(90.0);
  for (double r : {1.0, 2.0, 7.0}) CHECK(cartel_member_payoff(r, right, 0.3, r) == doctest::Approx(0.0).epsilon(1e-12));
  const auto general = CartelAgreement::from_degrees(180.0);
  for (double r : {1.0, 1.5, 2.0, 10.0}) CHECK(cartel_member_payoff(r, general, 0.5, 2.0) < 0.0);
  CHECK_THROWS_AS(cartel_member_payoff(0.9, at_gamma, 0.5, 2.0), std::domain_error);
}

TEST_CASE("closed-form coefficients equal quadrature up to 90 degrees") {
  for (double g : {0.1, 0.5, 0.9})
    for (double deg = 1.0; deg <= 90.0; deg += 1.0) {
      const auto a = CartelAgreement::from_degrees(deg);
      const auto c = cartel_payoff_coefficients(a, g);
      const auto q = cartel_payoff_coefficients_quadrature(a, g);
      REQUIRE(c.own_reach == doctest::Approx(q.own_reach).epsilon(1e-9));
      REQUIRE(c.member_reach == doctest::Approx(q.member_reach).epsilon(1e-9));
    }
}

TEST_CASE("beyond 90 degrees the own-reach coefficient keeps falling") {
  double prev = cartel_payoff_coefficients(CartelAgreement::from_degrees(90.0), 0.5).own_reach;
  for (double deg = 95.0; deg <= 180.0; deg += 5.0) {
    const double now = cartel_payoff_coefficients(CartelAgreement::from_degrees(deg), 0.5).own_reach;
    REQUIRE(now < prev);
    prev = now;
  }
}

TEST_CASE("entry equilibrium") {
  CHECK(entry_equilibrium(CartelAgreement::from_lambda(0.3), 0.5).kind == EntryKind::AllJoin);
  CHECK(entry_equilibrium(CartelAgreement::from_lambda(0.5), 0.5).kind == EntryKind::AllJoin);
  const auto t = entry_equilibrium(CartelAgreement::from_lambda(0.5), 0.1);
  CHECK(t.kind == EntryKind::ThresholdJoin);
  REQUIRE(t.r_bar.has_value());
  CHECK(*t.r_bar == doctest::Approx(3.5).epsilon(1e-12));
  CHECK(entry_equilibrium(CartelAgreement::from_lambda(1.2), 0.1).kind == EntryKind::NobodyJoins);
  CHECK(entry_equilibrium(CartelAgreement::from_degrees(90.0), 0.1).kind == EntryKind::NobodyJoins);
  CHECK(entry_equilibrium(CartelAgreement::from_degrees(180.0), 0.1).kind == EntryKind::NobodyJoins);
  const auto scaled = entry_equilibrium(CartelAgreement::from_lambda(0.5, 2.0), 0.1);
  CHECK(*scaled.r_bar == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(to_string(EntryKind::ThresholdJoin) == "threshold_join");
}

TEST_CASE("threshold is a best response") {
  for (auto [g, l] : {std::pair{0.1, 0.5}, std::pair{0.3, 0.6}, std::pair{0.5, 0.8}}) {
    const auto a = CartelAgreement::from_lambda(l);
    const double r_bar = *entry_equilibrium(a, g).r_bar;
    const double er = truncated_mean_reach(1.0, r_bar);
    CHECK(cartel_member_payoff(r_bar, a, g, er) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(cartel_member_payoff(r_bar * 0.9, a, g, er) > 0.0);
    CHECK(cartel_member_payoff(r_bar * 1.1, a, g, er) < 0.0);
    const Stat at = estimate_member_payoff(r_bar, a, g, r_bar, 20000, 40, 77);
    CHECK(std::abs(at.mean) < 3.0 * at.std_error);
    const Stat below = estimate_member_payoff(1.0, a, g, r_bar, 20000, 40, 78);
    CHECK(below.mean > 3.0 * below.std_error);
    const Stat above = estimate_member_payoff(2.0 * r_bar, a, g, r_bar, 20000, 40, 79);
    CHECK(above.mean < -3.0 * above.std_error);
  }
}

TEST_CASE("welfare curve examples") {
  for (double g : {kSqrt2m1, 0.5, 0.9})
    CHECK(welfare_W(kSqrt2m1, g) == doctest::Approx(4.0 * kSqrt2m1).epsilon(1e-12));
  CHECK(welfare_W(kSqrt2m1, 0.5) == doctest::Approx(1.65685).epsilon(1e-5));
  for (double g : {0.1, 0.5}) CHECK(std::abs(welfare_W(1.0, g)) < 1e-12);
  CHECK(welfare_W(1e-12, 0.5) < 1e-10);
  CHECK(mean_member_payoff_V(0.5, 0.1) == doctest::Approx(1.24444).epsilon(1e-5));
  CHECK(mean_member_payoff_V(0.5, 0.1) == doctest::Approx(0.8 * 1.4 / 0.9).epsilon(1e-12));
  CHECK(std::abs(mean_member_payoff_V(1.0, 0.3)) < 1e-12);
}

TEST_CASE("V exceeds W exactly when some members are excluded") {
  for (double g : {0.1, 0.3, 0.5, 0.8}) {
    for (int i = 1; i <= 1000; ++i) {
      const double l = i / 1000.0;
      const double v = mean_member_payoff_V(l, g), w = welfare_W(l, g);
      if (l <= g) {
        REQUIRE(v == doctest::Approx(w).epsilon(1e-14));
      } else if (l < 1.0) {
        REQUIRE(v > w);
        REQUIRE(w / v == doctest::Approx(participation_probability(l, g)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("welfare continuity and kink at lambda = gamma") {
  for (double g : {0.1, 0.3, 0.5, 0.8}) {
    CAPTURE(g);
    const double h = 1e-6;
    CHECK(welfare_W(g - 1e-12, g) == doctest::Approx(welfare_W(g + 1e-12, g)).epsilon(1e-9));
    const double left = (welfare_W(g, g) - welfare_W(g - h, g)) / h;
    const double right = (welfare_W(g + h, g) - welfare_W(g, g)) / h;
    CHECK(std::isfinite(left));
    CHECK(std::isfinite(right));
    CHECK(std::abs(left - right) > 1e-2);
  }
}

TEST_CASE("gamma_inc") {
  CHECK(gamma_inc() == doctest::Approx(0.3444).epsilon(1e-4 / 0.3444));
  CHECK(std::abs(gamma_inc_quartic(gamma_inc())) < 1e-10);
  CHECK(std::abs(welfare_slope_cubic(gamma_inc(), gamma_inc())) < 1e-10);
  CHECK(gamma_inc() < kSqrt2m1);
  const auto root = numeric::bisect(gamma_inc_quartic, 1e-9, 1.0 - 1e-9, 1e-15);
  CHECK(root.root == doctest::Approx(gamma_inc()).epsilon(1e-12));
}

TEST_CASE("optimal lambda") {
  CHECK(optimal_lambda(0.5) == doctest::Approx(kSqrt2m1).epsilon(1e-12));
  CHECK(optimal_lambda(0.375) == 0.375);
  CHECK(optimal_lambda(0.1) == doctest::Approx(0.3357).epsilon(1e-3));
  CHECK(std::abs(welfare_slope_cubic(optimal_lambda(0.1), 0.1)) < 1e-10);
  CHECK(first_best_lambda() == doctest::Approx(kSqrt2m1).epsilon(1e-15));
  for (double g : {0.05, 0.1, 0.2, 0.3, 0.34, gamma_inc(), 0.375, 0.4, 0.5, 0.8, 0.95}) {
    CAPTURE(g);
    // The peak is at a kink when gamma lies in [gamma_inc, sqrt2 - 1), so the
    // golden-section oracle is compared only up to its bracket accuracy.
    CHECK(optimal_lambda(g) == doctest::Approx(argmax_welfare(g, 1e-6, 1.0)).epsilon(1e-6));
  }
}

TEST_CASE("welfare rises then falls around the optimum") {
  for (double g : {0.1, 0.2, gamma_inc(), 0.375, 0.5, 0.8}) {
    CAPTURE(g);
    const double peak = optimal_lambda(g);
    const int n = 10000;
    for (int i = 1; i < n; ++i) {
      const double a = static_cast<double>(i) / n, b = static_cast<double>(i + 1) / n;
      if (a < peak && peak < b) continue;
      const double diff = welfare_W(b, g) - welfare_W(a, g);
      if (b <= peak) REQUIRE(diff > 0.0);
      if (a >= peak) REQUIRE(diff < 0.0);
    }
  }
}

TEST_CASE("sustainable cartels have nonnegative welfare") {
  for (double g : {0.1, 0.5, 0.9})
    for (int i = 1; i < 1000; ++i) {
      const double l = i / 1000.0;
      REQUIRE(welfare_W(l, g) > 0.0);
      REQUIRE(entry_equilibrium(CartelAgreement::from_lambda(l), g).kind != EntryKind::NobodyJoins);
    }
}

TEST_CASE("entry requirement scaling") {
  for (double g : {0.1, 0.5})
    for (double l : {0.2, 0.45, 0.7})
      for (double rmin : {1.0, 1.5, 2.0, 4.0}) {
        const auto e1 = entry_requirement_effects(CartelAgreement::from_lambda(l, 1.0), g);
        const auto e = entry_requirement_effects(CartelAgreement::from_lambda(l, rmin), g);
        REQUIRE(e.V == doctest::Approx(e1.V * rmin).epsilon(1e-12));
        REQUIRE(e.W * rmin == doctest::Approx(e1.W).epsilon(1e-12));
        if (e.kind == EntryKind::ThresholdJoin) REQUIRE(e.r_bar == doctest::Approx(e1.r_bar * rmin).epsilon(1e-12));
      }
  const auto base = entry_requirement_effects(CartelAgreement::from_lambda(0.45), 0.1);
  CHECK(base.V == doctest::Approx(mean_member_payoff_V(0.45, 0.1)).epsilon(1e-14));
  CHECK(base.W == doctest::Approx(welfare_W(0.45, 0.1)).epsilon(1e-14));
  const auto all = entry_requirement_effects(CartelAgreement::from_lambda(0.3, 2.0), 0.5);
  CHECK(all.kind == EntryKind::AllJoin);
  CHECK(all.r_bar == kInf);
  CHECK(all.participation == doctest::Approx(0.25).epsilon(1e-14));
  const auto none = entry_requirement_effects(CartelAgreement::from_degrees(120.0, 2.0), 0.5);
  CHECK(none.kind == EntryKind::NobodyJoins);
  CHECK(none.V == 0.0);
  CHECK(none.W == 0.0);
  CHECK(none.participation == 0.0);
}
