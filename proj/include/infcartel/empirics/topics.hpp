#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "infcartel/empirics/lda.hpp"
#include "infcartel/empirics/regression.hpp"

namespace infcartel::empirics {

/// Mean share of the author's main topic among one class of commenters.
struct TopicMatchCell {
  std::size_t topic = 0;
  CommenterClass commenter_class = CommenterClass::Natural;
  std::size_t n = 0;
  double mean = 0.0;
  /// Standard error of the mean; absent when n < 2.
  std::optional<double> std_error;
  /// 95% normal-approximation interval; absent when n < 2.
  std::optional<double> ci_low;
  std::optional<double> ci_high;
};

struct TopicMatchTable {
  /// Cells with at least one commenter, ordered by (topic, class). Empty
  /// cells are not listed.
  std::vector<TopicMatchCell> cells;
  /// Panel rows skipped because the author or commenter has no topic row.
  std::size_t skipped = 0;

  const TopicMatchCell* find(std::size_t topic, CommenterClass c) const;
};

/// Topic rows keyed by user id.
using TopicRows = std::map<std::string, std::vector<double>>;

TopicRows topic_rows(const LdaModel& model);

/// For each panel row: t = main_topic(author row); the value is the
/// commenter's weight on t. Values are averaged per (t, class).
TopicMatchTable topic_match_table(const TopicRows& rows, const std::vector<PanelObservation>& panel);
TopicMatchTable topic_match_table(const LdaModel& model, const std::vector<PanelObservation>& panel);

}  // namespace infcartel::empirics
