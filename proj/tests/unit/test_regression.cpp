#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "infcartel/empirics/regression.hpp"
#include "oracles.hpp"

using namespace infcartel;
using namespace infcartel::empirics;

namespace {

const CommenterClass kNat = CommenterClass::Natural;
const CommenterClass kGen = CommenterClass::GeneralCartel;
const CommenterClass kTop = CommenterClass::TopicCartel;
const CommenterClass kRnd = CommenterClass::RandomUser;

}  // namespace

TEST_CASE("two-author example") {
  const std::vector<PanelObservation> panel = {
      {"a", "n1", kNat, 0.8}, {"a", "r1", kRnd, 0.5}, {"b", "n2", kNat, 0.6}, {"b", "r2", kRnd, 0.4}};
  const RegressionResult r = fe_regression(panel);
  CHECK(r.coefficient(kRnd) == doctest::Approx(-0.25).epsilon(1e-14));
  CHECK(std::isnan(r.coefficient(kGen)));
  CHECK(std::isnan(r.coefficient(kTop)));
  CHECK(r.coefficient(kNat) == 0.0);
  CHECK(r.base_mean == doctest::Approx(0.7));
  CHECK(r.class_mean(kRnd) == doctest::Approx(0.45));
  CHECK(r.n_obs == 4);
  CHECK(r.n_authors == 2);
  // Within differences are -0.3 and -0.2; the clustered variance of their
  // mean is CR1 * ((0.05)^2 + (0.05)^2) / 4 with n - k = 3.
  const double cr1 = 2.0 * 3.0 / 3.0;
  CHECK(r.small_sample_factor == doctest::Approx(cr1));
  CHECK(r.std_error(kRnd) == doctest::Approx(std::sqrt(cr1 * 2 * 0.0025 / 4)).epsilon(1e-12));
}

TEST_CASE("author fixed effects absorb author-level shifts") {
  RandomStream rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    auto panel = oracle::random_panel(rng, 10 + rng.below(20));
    const RegressionResult before = fe_regression(panel);
    const double c = rng.uniform(-0.2, 0.2);
    for (auto& o : panel)
      if (o.author_id == "author3") o.similarity += c;
    const RegressionResult after = fe_regression(panel);
    for (std::size_t j = 0; j < 3; ++j) {
      REQUIRE(after.coefficients[j] == doctest::Approx(before.coefficients[j]).epsilon(1e-10));
      REQUIRE(after.std_errors[j] == doctest::Approx(before.std_errors[j]).epsilon(1e-8));
    }

    // Row order does not matter.
    std::reverse(panel.begin(), panel.end());
    const RegressionResult reversed = fe_regression(panel);
    for (std::size_t j = 0; j < 3; ++j)
      REQUIRE(reversed.coefficients[j] == doctest::Approx(after.coefficients[j]).epsilon(1e-10));
  }
}

TEST_CASE("constant outcome within each author gives zero coefficients") {
  RandomStream rng(2);
  auto panel = oracle::random_panel(rng, 30);
  std::map<std::string, double> level;
  for (auto& o : panel) o.similarity = level.try_emplace(o.author_id, rng.uniform(-0.5, 0.9)).first->second;
  const RegressionResult r = fe_regression(panel);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(r.coefficients[j] == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(r.std_errors[j] == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  }
}

TEST_CASE("within estimator equals dummy-variable OLS") {
  RandomStream rng(123);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t authors = 2 + rng.below(trial < 30 ? 48 : 199);
    const auto panel = oracle::random_panel(rng, authors);
    const RegressionResult r = fe_regression(panel);
    const oracle::PanelFit want = oracle::dummy_ols(panel);
    for (std::size_t j = 0; j < 3; ++j) {
      REQUIRE(std::abs(r.coefficients[j] - want.beta[j]) < 1e-8);
      if (authors <= 50) REQUIRE(std::abs(r.std_errors[j] - want.se[j]) < 1e-10);
      REQUIRE(r.std_errors[j] > 0.0);
    }
    REQUIRE(r.n_authors == authors);
  }
}

TEST_CASE("clustered covariance is symmetric and positive semi-definite") {
  RandomStream rng(9);
  const RegressionResult r = fe_regression(oracle::random_panel(rng, 40));
  const auto& v = r.covariance;
  for (std::size_t a = 0; a < 3; ++a) {
    CHECK(v[a][a] == doctest::Approx(r.std_errors[a] * r.std_errors[a]));
    for (std::size_t b = 0; b < 3; ++b) CHECK(v[a][b] == doctest::Approx(v[b][a]).epsilon(1e-12));
  }
  Eigen::Matrix3d m;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) m(a, b) = v[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  CHECK(Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(m).eigenvalues().minCoeff() > -1e-15);
}

TEST_CASE("rank deficiency names the offending column") {
  const std::vector<std::size_t> groups = {0, 0, 0, 1, 1, 1};
  const std::vector<double> y = {0.1, 0.4, 0.2, 0.5, 0.3, 0.9};
  const std::vector<double> a = {1, 0, 0, 0, 1, 0};
  std::vector<double> twice_a = a;
  for (auto& z : twice_a) z *= 2.0;
  try {
    within_regression(groups, y, {a, twice_a}, {"a", "twice_a"});
    FAIL("expected RankDeficiency");
  } catch (const RankDeficiency& e) {
    CHECK(e.column() == "twice_a");
  }
  const std::vector<double> level = {3, 3, 3, 7, 7, 7};
  try {
    within_regression(groups, y, {a, level}, {"a", "level"});
    FAIL("expected RankDeficiency");
  } catch (const RankDeficiency& e) {
    CHECK(e.column() == "level");
  }
  const std::vector<PanelObservation> only_natural = {
      {"a", "1", kNat, 0.1}, {"a", "2", kNat, 0.2}, {"b", "3", kNat, 0.3}, {"b", "4", kNat, 0.5}};
  CHECK_THROWS_AS(fe_regression(only_natural), RankDeficiency);
}

TEST_CASE("panel preconditions") {
  CHECK_THROWS_AS(fe_regression({{"a", "1", kNat, 0.1}, {"a", "2", kRnd, 0.2}}), std::invalid_argument);
  CHECK_THROWS_AS(fe_regression({{"a", "1", kNat, 0.1}, {"a", "2", kRnd, 0.2}, {"b", "3", kNat, 0.3}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(fe_regression({{"a", "1", kNat, 0.1}, {"a", "2", kRnd, 0.2}, {"b", "3", kRnd, 0.3},
                                 {"b", "4", kGen, 0.3}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(fe_regression({{"a", "1", kNat, 1.5}, {"a", "2", kRnd, 0.2}, {"b", "3", kNat, 0.3},
                                 {"b", "4", kRnd, 0.2}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(fe_regression({}), std::invalid_argument);
}

TEST_CASE("normalized value") {
  CHECK(normalized_value(0.8, 0.8, 0.6) == doctest::Approx(1.0));
  CHECK(normalized_value(0.6, 0.8, 0.6) == 0.0);
  CHECK(normalized_value(0.65, 0.8, 0.6) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK_THROWS_AS(normalized_value(0.5, 0.6, 0.6), std::domain_error);
  CHECK_THROWS_AS(normalized_value(0.5, 0.5, 0.6), std::domain_error);
}

TEST_CASE("commenter class names") {
  for (auto c : {kNat, kGen, kTop, kRnd}) CHECK(parse_commenter_class(to_string(c)) == c);
  CHECK(parse_commenter_class("GeneralCartel") == kGen);
  CHECK(parse_commenter_class("RANDOM") == kRnd);
  CHECK_THROWS_AS(parse_commenter_class("bot"), std::invalid_argument);
}
