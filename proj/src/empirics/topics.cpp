#include "infcartel/empirics/topics.hpp"

#include <cmath>

#include "infcartel/numeric.hpp"

namespace infcartel::empirics {

namespace {
constexpr double kZ95 = 1.959963984540054;
}

const TopicMatchCell* TopicMatchTable::find(std::size_t topic, CommenterClass c) const {
  for (const auto& cell : cells)
    if (cell.topic == topic && cell.commenter_class == c) return &cell;
  return nullptr;
}

TopicRows topic_rows(const LdaModel& model) {
  TopicRows rows;
  for (std::size_t d = 0; d < model.doc_ids.size(); ++d) rows.emplace(model.doc_ids[d], model.doc_topic[d]);
  return rows;
}

TopicMatchTable topic_match_table(const TopicRows& rows, const std::vector<PanelObservation>& panel) {
  std::map<std::pair<std::size_t, int>, std::vector<double>> groups;
  TopicMatchTable table;
  for (const auto& obs : panel) {
    const auto a = rows.find(obs.author_id);
    const auto c = rows.find(obs.commenter_id);
    if (a == rows.end() || c == rows.end()) {
      ++table.skipped;
      continue;
    }
    const std::size_t t = main_topic(a->second);
    if (t >= c->second.size())
      throw std::invalid_argument("topic_match_table: commenter '" + obs.commenter_id +
                                  "' has fewer topics than author '" + obs.author_id + "'");
    groups[{t, static_cast<int>(obs.commenter_class)}].push_back(c->second[t]);
  }
  for (const auto& [key, values] : groups) {
    TopicMatchCell cell;
    cell.topic = key.first;
    cell.commenter_class = static_cast<CommenterClass>(key.second);
    const numeric::Estimate e = numeric::estimate(values);
    cell.n = e.n;
    cell.mean = e.mean;
    if (e.n >= 2) {
      cell.std_error = e.std_error;
      cell.ci_low = e.mean - kZ95 * e.std_error;
      cell.ci_high = e.mean + kZ95 * e.std_error;
    }
    table.cells.push_back(cell);
  }
  return table;
}

TopicMatchTable topic_match_table(const LdaModel& model, const std::vector<PanelObservation>& panel) {
  return topic_match_table(topic_rows(model), panel);
}

}  // namespace infcartel::empirics
