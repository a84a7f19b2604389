#include "infcartel/pod.hpp"

#include <algorithm>
#include <cctype>
#include <list>
#include <unordered_map>

namespace infcartel::pod {

namespace {

// Interns post ids and tracks, for the accepted prefix of a log, the
// distinct posts in order of their latest submission (move-to-front).
class Window {
 public:
  void accept(const Submission& s) {
    auto [it, inserted] = position_.try_emplace(s.post);
    if (!inserted) recency_.erase(it->second);
    recency_.push_front(Entry{s.post, s.member});
    it->second = recency_.begin();
    latest_[s.post] = s.timestamp;
    positional_.push_back(s);
  }

  std::vector<PostId> obligations(const MemberId& member, std::size_t n, WindowMode mode) const {
    std::vector<PostId> out;
    if (mode == WindowMode::DistinctOthers) {
      for (const Entry& e : recency_) {
        if (out.size() == n) break;
        if (e.owner != member) out.push_back(e.post);
      }
      return out;
    }
    const std::size_t start = positional_.size() > n ? positional_.size() - n : 0;
    for (std::size_t j = positional_.size(); j-- > start;) {
      const Submission& s = positional_[j];
      if (s.member == member) continue;
      if (std::find(out.begin(), out.end(), s.post) == out.end()) out.push_back(s.post);
    }
    return out;
  }

  Timestamp latest(const PostId& post) const { return latest_.at(post); }

 private:
  struct Entry {
    PostId post;
    MemberId owner;
  };
  std::list<Entry> recency_;
  std::unordered_map<PostId, std::list<Entry>::iterator> position_;
  std::unordered_map<PostId, Timestamp> latest_;
  std::vector<Submission> positional_;
};

void add_to_set(ObligationSet& set, const Submission& s, std::vector<PostId> targets) {
  set.by_post.try_emplace(s.post);
  for (const PostId& p : targets) set.by_post[p].insert(s.member);
  set.per_submission.push_back(std::move(targets));
}

// Engagement events keyed by (member, post, kind), timestamps sorted.
class EventIndex {
 public:
  explicit EventIndex(const std::vector<EngagementEvent>& events) {
    for (const auto& e : events) stamps_[key(e.member, e.post, e.kind)].push_back(e.timestamp);
    for (auto& [_, v] : stamps_) std::sort(v.begin(), v.end());
  }

  /// Any event with lo <= t < hi.
  bool any(const MemberId& m, const PostId& p, EngagementKind kind, Timestamp lo,
           Timestamp hi) const {
    const auto it = stamps_.find(key(m, p, kind));
    if (it == stamps_.end()) return false;
    const auto first = std::lower_bound(it->second.begin(), it->second.end(), lo);
    return first != it->second.end() && *first < hi;
  }

 private:
  static std::string key(const MemberId& m, const PostId& p, EngagementKind kind) {
    std::string k;
    k.reserve(m.size() + p.size() + 3);
    k += m;
    k += '\x1f';
    k += p;
    k += '\x1f';
    k += kind == EngagementKind::Like ? 'L' : 'C';
    return k;
  }
  std::unordered_map<std::string, std::vector<Timestamp>> stamps_;
};

}  // namespace

std::size_t ObligationSet::total() const {
  std::size_t n = 0;
  for (const auto& [_, members] : by_post) n += members.size();
  return n;
}

void check_log(const SubmissionLog& log) {
  std::unordered_map<PostId, MemberId> owner;
  for (std::size_t i = 0; i < log.size(); ++i) {
    const Submission& s = log[i];
    if (i > 0) {
      const Submission& prev = log[i - 1];
      if (s.timestamp == prev.timestamp && s.member == prev.member && s.post == prev.post)
        throw MalformedLog("submission " + std::to_string(i + 1) + ": duplicate of submission " +
                           std::to_string(i) + " (member " + s.member + ", post " + s.post + ")");
      if (s.timestamp <= prev.timestamp)
        throw MalformedLog("submission " + std::to_string(i + 1) +
                           ": timestamps must be strictly increasing");
    }
    const auto [it, inserted] = owner.try_emplace(s.post, s.member);
    if (!inserted && it->second != s.member)
      throw MalformedLog("submission " + std::to_string(i + 1) + ": post " + s.post +
                         " already submitted by member " + it->second);
  }
}

ObligationSet derive_obligations(const SubmissionLog& log, std::size_t n, WindowMode mode) {
  if (n < 1) throw std::invalid_argument("derive_obligations: N must be >= 1");
  check_log(log);
  ObligationSet set;
  set.per_submission.reserve(log.size());
  Window window;
  for (const Submission& s : log) {
    add_to_set(set, s, window.obligations(s.member, n, mode));
    window.accept(s);
  }
  return set;
}

ValidationResult validate(const SubmissionLog& log, const std::vector<EngagementEvent>& events,
                          const ValidationOptions& options) {
  if (options.n < 1) throw std::invalid_argument("validate: N must be >= 1");
  if (options.deadline_window && *options.deadline_window < 0)
    throw std::invalid_argument("validate: deadline_window must be non-negative");
  check_log(log);
  const EventIndex index(events);
  ValidationResult result;
  Window window;
  for (std::size_t i = 0; i < log.size(); ++i) {
    const Submission& s = log[i];
    std::vector<PostId> targets = window.obligations(s.member, options.n, options.mode);
    std::vector<PostId> missing;
    for (const PostId& p : targets) {
      Timestamp lo = window.latest(p);
      if (options.deadline_window) lo = std::max(lo, s.timestamp - *options.deadline_window);
      const bool liked = index.any(s.member, p, EngagementKind::Like, lo, s.timestamp);
      const bool commented = index.any(s.member, p, EngagementKind::Comment, lo, s.timestamp);
      if (!(liked && commented)) missing.push_back(p);
    }
    if (!missing.empty()) {
      result.violations.push_back(Violation{i, s.member, s.post, std::move(missing)});
      continue;
    }
    add_to_set(result.obligations, s, std::move(targets));
    window.accept(s);
    result.purged_log.push_back(s);
  }
  return result;
}

std::map<PostId, std::size_t> direct_engagement_count(const ObligationSet& obligations) {
  std::map<PostId, std::size_t> counts;
  for (const auto& [post, members] : obligations.by_post) counts[post] = members.size();
  return counts;
}

std::string to_string(EngagementKind kind) {
  return kind == EngagementKind::Like ? "like" : "comment";
}

EngagementKind parse_engagement_kind(const std::string& text) {
  std::string t;
  for (const char c : text) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (t == "like") return EngagementKind::Like;
  if (t == "comment") return EngagementKind::Comment;
  throw std::invalid_argument("unknown engagement kind '" + text + "' (expected like or comment)");
}

std::string to_string(WindowMode mode) {
  return mode == WindowMode::DistinctOthers ? "distinct" : "positional";
}

WindowMode parse_window_mode(const std::string& text) {
  if (text == "distinct") return WindowMode::DistinctOthers;
  if (text == "positional") return WindowMode::Positional;
  throw std::invalid_argument("unknown window mode '" + text + "' (expected distinct or positional)");
}

}  // namespace infcartel::pod
