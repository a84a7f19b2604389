#pragma once

// Reference implementations used only by tests. Each one follows the
// definition literally and deliberately shares no code with the library.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "infcartel/empirics/regression.hpp"
#include "infcartel/pod.hpp"
#include "infcartel/random.hpp"

namespace oracle {

using infcartel::pod::EngagementEvent;
using infcartel::pod::EngagementKind;
using infcartel::pod::PostId;
using infcartel::pod::Submission;
using infcartel::pod::SubmissionLog;
using infcartel::pod::Timestamp;
using infcartel::pod::WindowMode;

// Posts submission i of `log` must engage with, scanning backwards.
inline std::vector<PostId> obligations_at(const SubmissionLog& log, std::size_t i, std::size_t n,
                                          WindowMode mode) {
  std::vector<PostId> out;
  const std::string& me = log[i].member;
  if (mode == WindowMode::DistinctOthers) {
    for (std::size_t j = i; j-- > 0 && out.size() < n;) {
      if (log[j].member == me) continue;
      if (std::find(out.begin(), out.end(), log[j].post) != out.end()) continue;
      out.push_back(log[j].post);
    }
  } else {
    for (std::size_t j = i, seen = 0; j-- > 0 && seen < n; ++seen) {
      if (log[j].member == me) continue;
      if (std::find(out.begin(), out.end(), log[j].post) != out.end()) continue;
      out.push_back(log[j].post);
    }
  }
  return out;
}

struct Obligations {
  std::vector<std::vector<PostId>> per_submission;
  std::map<PostId, std::set<std::string>> by_post;
};

inline Obligations derive(const SubmissionLog& log, std::size_t n, WindowMode mode) {
  Obligations o;
  for (std::size_t i = 0; i < log.size(); ++i) {
    o.per_submission.push_back(obligations_at(log, i, n, mode));
    o.by_post[log[i].post];
    for (const auto& p : o.per_submission.back()) o.by_post[p].insert(log[i].member);
  }
  return o;
}

// Brute-force enforcement replay. Returns indices of deleted submissions
// and the surviving log.
inline std::pair<std::vector<std::size_t>, SubmissionLog> validate(
    const SubmissionLog& log, const std::vector<EngagementEvent>& events, std::size_t n,
    WindowMode mode, std::optional<Timestamp> deadline) {
  std::vector<std::size_t> deleted;
  SubmissionLog kept;
  for (std::size_t i = 0; i < log.size(); ++i) {
    SubmissionLog trial = kept;
    trial.push_back(log[i]);
    const auto targets = obligations_at(trial, trial.size() - 1, n, mode);
    bool ok = true;
    for (const auto& p : targets) {
      Timestamp posted = 0;
      for (const auto& s : kept)
        if (s.post == p) posted = s.timestamp;
      Timestamp lo = posted;
      if (deadline) lo = std::max(lo, log[i].timestamp - *deadline);
      bool like = false, comment = false;
      for (const auto& e : events) {
        if (e.member != log[i].member || e.post != p) continue;
        if (e.timestamp < lo || e.timestamp >= log[i].timestamp) continue;
        (e.kind == EngagementKind::Like ? like : comment) = true;
      }
      ok = ok && like && comment;
    }
    if (ok) {
      kept.push_back(log[i]);
    } else {
      deleted.push_back(i);
    }
  }
  return {deleted, kept};
}

// Random well-formed log: `members` members, each post submitted by one
// owner, occasional re-submissions by that owner, strictly increasing time.
inline SubmissionLog random_log(infcartel::RandomStream& rng, std::size_t size, std::size_t members,
                                double resubmit_prob = 0.1) {
  SubmissionLog log;
  std::vector<std::vector<PostId>> owned(members);
  Timestamp t = static_cast<Timestamp>(rng.below(5));
  std::size_t next_post = 0;
  for (std::size_t i = 0; i < size; ++i) {
    const auto m = static_cast<std::size_t>(rng.below(members));
    PostId post;
    if (!owned[m].empty() && rng.uniform() < resubmit_prob) {
      post = owned[m][static_cast<std::size_t>(rng.below(owned[m].size()))];
    } else {
      post = "p" + std::to_string(next_post++);
      owned[m].push_back(post);
    }
    t += 1 + static_cast<Timestamp>(rng.below(3));
    log.push_back(Submission{"m" + std::to_string(m), post, t});
  }
  return log;
}

struct PanelFit {
  std::vector<double> beta;
  std::vector<double> se;
};

// OLS of similarity on the three class indicators plus one dummy per author
// (no intercept), solved by Householder QR on the full design. Standard
// errors use the cluster sandwich written as a double loop over pairs of
// observations in the same cluster, with the regressors demeaned by author.
inline PanelFit dummy_ols(const std::vector<infcartel::empirics::PanelObservation>& panel) {
  using infcartel::empirics::CommenterClass;
  std::map<std::string, int> author;
  for (const auto& o : panel) author.emplace(o.author_id, static_cast<int>(author.size()));
  const int n = static_cast<int>(panel.size());
  const int g = static_cast<int>(author.size());
  const CommenterClass cls[3] = {CommenterClass::GeneralCartel, CommenterClass::TopicCartel,
                                 CommenterClass::RandomUser};
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, 3 + g);
  Eigen::VectorXd y(n);
  std::vector<int> cluster(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto& o = panel[static_cast<std::size_t>(i)];
    for (int j = 0; j < 3; ++j) x(i, j) = o.commenter_class == cls[j] ? 1.0 : 0.0;
    cluster[static_cast<std::size_t>(i)] = author.at(o.author_id);
    x(i, 3 + cluster[static_cast<std::size_t>(i)]) = 1.0;
    y(i) = o.similarity;
  }
  const Eigen::VectorXd b = x.householderQr().solve(y);
  const Eigen::VectorXd e = y - x * b;

  // Author-demeaned indicators, averaged by explicit loops.
  Eigen::MatrixXd xd(n, 3);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < 3; ++j) {
      double sum = 0.0;
      int count = 0;
      for (int r = 0; r < n; ++r)
        if (cluster[static_cast<std::size_t>(r)] == cluster[static_cast<std::size_t>(i)]) {
          sum += x(r, j);
          ++count;
        }
      xd(i, j) = x(i, j) - sum / count;
    }
  }
  Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
  for (int i = 0; i < n; ++i) a += xd.row(i).transpose() * xd.row(i);
  Eigen::Matrix3d meat = Eigen::Matrix3d::Zero();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (cluster[static_cast<std::size_t>(i)] == cluster[static_cast<std::size_t>(j)])
        meat += e(i) * e(j) * (xd.row(i).transpose() * xd.row(j));
  const Eigen::Matrix3d ainv = a.inverse();
  const double factor =
      static_cast<double>(g) / (g - 1) * static_cast<double>(n - 1) / static_cast<double>(n - 3);
  const Eigen::Matrix3d v = factor * ainv * meat * ainv;

  PanelFit fit;
  for (int j = 0; j < 3; ++j) {
    fit.beta.push_back(b(j));
    fit.se.push_back(std::sqrt(v(j, j)));
  }
  return fit;
}

// Random panel: every author has one or two natural rows plus a random
// number of rows from each other class.
inline std::vector<infcartel::empirics::PanelObservation> random_panel(infcartel::RandomStream& rng,
                                                                       std::size_t authors) {
  using infcartel::empirics::CommenterClass;
  std::vector<infcartel::empirics::PanelObservation> panel;
  const CommenterClass all[4] = {CommenterClass::Natural, CommenterClass::GeneralCartel,
                                 CommenterClass::TopicCartel, CommenterClass::RandomUser};
  for (std::size_t a = 0; a < authors; ++a) {
    const double level = rng.uniform(-0.3, 0.6);
    const std::string id = "author" + std::to_string(a);
    std::size_t c = 0;
    for (int k = 0; k < 4; ++k) {
      // The first two authors carry every class, and nobody is left with a
      // single row, so the within design always has full rank.
      std::size_t rows = k == 0 ? 1 + rng.below(2) : (a < 2 ? 1 : 0) + rng.below(4);
      if (k == 3 && c + rows < 2) rows = 1;
      for (std::size_t r = 0; r < rows; ++r) {
        const double effect = k == 0 ? 0.0 : -0.1 * k;
        double s = level + effect + 0.2 * (rng.uniform() - 0.5);
        s = std::clamp(s, -1.0, 1.0);
        panel.push_back({id, id + "_c" + std::to_string(c++), all[k], s});
      }
    }
  }
  return panel;
}

}  // namespace oracle
