#include "infcartel/empirics/regression.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace infcartel::empirics {

namespace {

constexpr double kRankTol = 1e-10;

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Column of `xd` that is (numerically) a combination of the others, or -1.
Eigen::Index collinear_column(const Eigen::MatrixXd& xd) {
  const Eigen::Index k = xd.cols();
  const double largest = xd.colwise().norm().maxCoeff();
  for (Eigen::Index j = 0; j < k; ++j)
    if (xd.col(j).norm() <= kRankTol * largest) return j;
  for (Eigen::Index j = k; j-- > 0;) {
    const double scale = xd.col(j).norm();
    if (k == 1) break;
    Eigen::MatrixXd rest(xd.rows(), k - 1);
    for (Eigen::Index c = 0, o = 0; c < k; ++c)
      if (c != j) rest.col(o++) = xd.col(c);
    const Eigen::VectorXd fit = rest.colPivHouseholderQr().solve(xd.col(j));
    if ((xd.col(j) - rest * fit).norm() <= kRankTol * scale) return j;
  }
  return -1;
}

}  // namespace

std::string to_string(CommenterClass c) {
  switch (c) {
    case CommenterClass::Natural: return "natural";
    case CommenterClass::GeneralCartel: return "general";
    case CommenterClass::TopicCartel: return "topic";
    case CommenterClass::RandomUser: return "random";
  }
  return "?";
}

CommenterClass parse_commenter_class(const std::string& text) {
  const std::string t = lower(text);
  if (t == "natural") return CommenterClass::Natural;
  if (t == "general" || t == "generalcartel") return CommenterClass::GeneralCartel;
  if (t == "topic" || t == "topiccartel") return CommenterClass::TopicCartel;
  if (t == "random" || t == "randomuser") return CommenterClass::RandomUser;
  throw std::invalid_argument("unknown commenter class '" + text +
                              "' (expected natural, general, topic or random)");
}

WithinResult within_regression(std::span<const std::size_t> groups, std::span<const double> y,
                               const std::vector<std::vector<double>>& x,
                               const std::vector<std::string>& names) {
  const std::size_t n = y.size();
  const std::size_t k = x.size();
  if (groups.size() != n) throw std::invalid_argument("within_regression: groups/y length mismatch");
  if (names.size() != k) throw std::invalid_argument("within_regression: one name per regressor required");
  if (k == 0) throw std::invalid_argument("within_regression: no regressors");
  for (const auto& col : x)
    if (col.size() != n) throw std::invalid_argument("within_regression: regressor length mismatch");

  std::size_t g_count = 0;
  for (const std::size_t g : groups) g_count = std::max(g_count, g + 1);
  std::vector<std::size_t> size(g_count, 0);
  for (const std::size_t g : groups) ++size[g];
  const auto g_nonempty = static_cast<std::size_t>(
      std::count_if(size.begin(), size.end(), [](std::size_t s) { return s > 0; }));
  if (g_nonempty < 2) throw std::invalid_argument("within_regression: at least two groups required");
  if (n <= k) throw std::invalid_argument("within_regression: need more observations than regressors");

  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(g_count),
                                                static_cast<Eigen::Index>(k + 1));
  for (std::size_t i = 0; i < n; ++i) {
    const auto g = static_cast<Eigen::Index>(groups[i]);
    means(g, 0) += y[i];
    for (std::size_t j = 0; j < k; ++j) means(g, static_cast<Eigen::Index>(j + 1)) += x[j][i];
  }
  for (std::size_t g = 0; g < g_count; ++g)
    if (size[g] > 0) means.row(static_cast<Eigen::Index>(g)) /= static_cast<double>(size[g]);

  Eigen::VectorXd yd(static_cast<Eigen::Index>(n));
  Eigen::MatrixXd xd(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < n; ++i) {
    const auto g = static_cast<Eigen::Index>(groups[i]);
    const auto r = static_cast<Eigen::Index>(i);
    yd(r) = y[i] - means(g, 0);
    for (std::size_t j = 0; j < k; ++j)
      xd(r, static_cast<Eigen::Index>(j)) = x[j][i] - means(g, static_cast<Eigen::Index>(j + 1));
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xd.rows(), xd.cols());
  qr.setThreshold(kRankTol);
  qr.compute(xd);
  if (qr.rank() < static_cast<Eigen::Index>(k)) {
    const Eigen::Index bad = collinear_column(xd);
    const std::string col = bad >= 0 ? names[static_cast<std::size_t>(bad)] : names.back();
    throw RankDeficiency(col, "within_regression: rank-deficient design; column '" + col +
                                  "' is collinear after within-group demeaning");
  }

  const Eigen::MatrixXd xtx = xd.transpose() * xd;
  const Eigen::MatrixXd bread = xtx.ldlt().solve(Eigen::MatrixXd::Identity(xtx.rows(), xtx.cols()));
  const Eigen::VectorXd beta = bread * (xd.transpose() * yd);
  const Eigen::VectorXd resid = yd - xd * beta;

  Eigen::MatrixXd scores = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(g_count),
                                                 static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < n; ++i)
    scores.row(static_cast<Eigen::Index>(groups[i])) += resid(static_cast<Eigen::Index>(i)) *
                                                        xd.row(static_cast<Eigen::Index>(i));
  const Eigen::MatrixXd meat = scores.transpose() * scores;

  const double gd = static_cast<double>(g_nonempty);
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  const double factor = gd / (gd - 1.0) * (nd - 1.0) / (nd - kd);
  const Eigen::MatrixXd cov = factor * bread * meat * bread;

  WithinResult out;
  out.names = names;
  out.n_obs = n;
  out.n_groups = g_nonempty;
  out.small_sample_factor = factor;
  out.residual_ss = resid.squaredNorm();
  out.coefficients.resize(k);
  out.std_errors.resize(k);
  out.covariance.assign(k, std::vector<double>(k));
  for (std::size_t a = 0; a < k; ++a) {
    const auto ia = static_cast<Eigen::Index>(a);
    out.coefficients[a] = beta(ia);
    out.std_errors[a] = std::sqrt(std::max(0.0, cov(ia, ia)));
    for (std::size_t b = 0; b < k; ++b) out.covariance[a][b] = cov(ia, static_cast<Eigen::Index>(b));
  }
  return out;
}

double RegressionResult::coefficient(CommenterClass c) const {
  if (c == CommenterClass::Natural) return 0.0;
  return coefficients[static_cast<std::size_t>(c) - 1];
}

double RegressionResult::std_error(CommenterClass c) const {
  if (c == CommenterClass::Natural) return 0.0;
  return std_errors[static_cast<std::size_t>(c) - 1];
}

double RegressionResult::class_mean(CommenterClass c) const { return base_mean + coefficient(c); }

RegressionResult fe_regression(const std::vector<PanelObservation>& panel) {
  std::map<std::string, std::size_t> author_index;
  for (const auto& obs : panel) author_index.try_emplace(obs.author_id, author_index.size());
  if (author_index.size() < 2) throw std::invalid_argument("fe_regression: at least two authors required");

  std::vector<std::size_t> count(author_index.size(), 0);
  std::vector<bool> has_natural(author_index.size(), false);
  std::vector<std::size_t> groups;
  std::vector<double> y;
  std::vector<std::vector<double>> x(3);
  double natural_sum = 0.0;
  std::size_t natural_n = 0;
  groups.reserve(panel.size());
  y.reserve(panel.size());
  for (const auto& obs : panel) {
    if (!(obs.similarity >= -1.0 && obs.similarity <= 1.0))
      throw std::invalid_argument("fe_regression: similarity outside [-1, 1] for author '" +
                                  obs.author_id + "', commenter '" + obs.commenter_id + "'");
    const std::size_t g = author_index.at(obs.author_id);
    ++count[g];
    groups.push_back(g);
    y.push_back(obs.similarity);
    for (std::size_t j = 0; j < 3; ++j) x[j].push_back(obs.commenter_class == kRegressorClasses[j] ? 1.0 : 0.0);
    if (obs.commenter_class == CommenterClass::Natural) {
      has_natural[g] = true;
      natural_sum += obs.similarity;
      ++natural_n;
    }
  }
  for (const auto& [id, g] : author_index) {
    if (count[g] < 2)
      throw std::invalid_argument("fe_regression: author '" + id + "' has fewer than two observations");
    if (!has_natural[g])
      throw std::invalid_argument("fe_regression: author '" + id + "' has no natural commenter");
  }

  // Classes that never appear carry no information and are left out.
  std::vector<std::size_t> present;
  std::vector<std::vector<double>> design;
  std::vector<std::string> names;
  for (std::size_t j = 0; j < 3; ++j) {
    if (std::find(x[j].begin(), x[j].end(), 1.0) == x[j].end()) continue;
    present.push_back(j);
    design.push_back(std::move(x[j]));
    names.push_back(to_string(kRegressorClasses[j]));
  }
  if (present.empty())
    throw RankDeficiency("general", "fe_regression: no commenter class other than natural appears");

  const WithinResult w = within_regression(groups, y, design, names);
  RegressionResult out;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.coefficients.fill(nan);
  out.std_errors.fill(nan);
  for (auto& row : out.covariance) row.fill(nan);
  for (std::size_t a = 0; a < present.size(); ++a) {
    out.coefficients[present[a]] = w.coefficients[a];
    out.std_errors[present[a]] = w.std_errors[a];
    for (std::size_t b = 0; b < present.size(); ++b) out.covariance[present[a]][present[b]] = w.covariance[a][b];
  }
  out.base_mean = natural_sum / static_cast<double>(natural_n);
  out.n_obs = w.n_obs;
  out.n_authors = w.n_groups;
  out.small_sample_factor = w.small_sample_factor;
  return out;
}

double normalized_value(double sim_class, double sim_natural, double sim_random) {
  const double den = sim_natural - sim_random;
  if (!(den > 1e-12))
    throw std::domain_error("normalized_value: natural similarity must exceed random similarity");
  return (sim_class - sim_random) / den;
}

}  // namespace infcartel::empirics
