#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace infcartel::empirics {

enum class CommenterClass { Natural, GeneralCartel, TopicCartel, RandomUser };

std::string to_string(CommenterClass c);
/// Accepts "natural", "general", "topic", "random" (and the full enum names).
CommenterClass parse_commenter_class(const std::string& text);

struct PanelObservation {
  std::string author_id;
  std::string commenter_id;
  CommenterClass commenter_class = CommenterClass::Natural;
  double similarity = 0.0;
};

/// Singular demeaned design. `column` names the regressor found to be
/// collinear with the others (or constant within every author).
class RankDeficiency : public std::runtime_error {
 public:
  RankDeficiency(std::string column, const std::string& what)
      : std::runtime_error(what), column_(std::move(column)) {}
  const std::string& column() const { return column_; }

 private:
  std::string column_;
};

/// Result of a within (author fixed effects) regression. Standard errors are
/// clustered by group with the CR1 factor G/(G-1) * (n-1)/(n-k).
struct WithinResult {
  std::vector<std::string> names;
  std::vector<double> coefficients;
  std::vector<double> std_errors;
  std::vector<std::vector<double>> covariance;
  std::size_t n_obs = 0;
  std::size_t n_groups = 0;
  double small_sample_factor = 0.0;
  double residual_ss = 0.0;
};

/// Generic within estimator: y and each column of `x` are demeaned inside
/// each group, then OLS with cluster-robust errors. `groups[i]` is the group
/// index (0..G-1) of row i. Requires at least two groups.
WithinResult within_regression(std::span<const std::size_t> groups, std::span<const double> y,
                               const std::vector<std::vector<double>>& x,
                               const std::vector<std::string>& names);

inline constexpr std::array<CommenterClass, 3> kRegressorClasses{
    CommenterClass::GeneralCartel, CommenterClass::TopicCartel, CommenterClass::RandomUser};

struct RegressionResult {
  /// Indexed in the order of kRegressorClasses: general, topic, random.
  std::array<double, 3> coefficients{};
  std::array<double, 3> std_errors{};
  std::array<std::array<double, 3>, 3> covariance{};
  double base_mean = 0.0;
  std::size_t n_obs = 0;
  std::size_t n_authors = 0;
  double small_sample_factor = 0.0;

  double coefficient(CommenterClass c) const;
  double std_error(CommenterClass c) const;
  /// Implied mean similarity of a class: base_mean + coefficient.
  double class_mean(CommenterClass c) const;
};

/// Similarity on class indicators (Natural is the omitted base) with author
/// fixed effects. Every author needs at least two observations and at least
/// one Natural commenter; throws std::invalid_argument otherwise. Classes
/// absent from the panel are dropped and reported as NaN; RankDeficiency is
/// thrown when no class besides Natural appears or the remaining indicators
/// are collinear after demeaning.
RegressionResult fe_regression(const std::vector<PanelObservation>& panel);

/// (sim_class - sim_random) / (sim_natural - sim_random). Throws
/// std::domain_error unless sim_natural > sim_random.
double normalized_value(double sim_class, double sim_natural, double sim_random);

}  // namespace infcartel::empirics
