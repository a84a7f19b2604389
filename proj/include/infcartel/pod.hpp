#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace infcartel::pod {

using MemberId = std::string;
using PostId = std::string;
using Timestamp = std::int64_t;

struct Submission {
  MemberId member;
  PostId post;
  Timestamp timestamp = 0;

  bool operator==(const Submission&) const = default;
};

using SubmissionLog = std::vector<Submission>;

enum class EngagementKind { Like, Comment };

struct EngagementEvent {
  MemberId member;
  PostId post;
  Timestamp timestamp = 0;
  EngagementKind kind = EngagementKind::Like;
};

/// How the look-back window over earlier submissions is built.
enum class WindowMode {
  /// The N most recent distinct posts by other members.
  DistinctOthers,
  /// The previous N submissions, own posts and repeats dropped without refill.
  Positional,
};

/// Thrown for logs that break the ordering or ownership rules.
class MalformedLog : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Obligations attached to each submission plus the per-post view.
struct ObligationSet {
  /// per_submission[i] lists the posts submission i must engage with, most
  /// recent first.
  std::vector<std::vector<PostId>> per_submission;
  /// Members obligated to engage with each post. Every post of the log has
  /// an entry, possibly empty.
  std::map<PostId, std::set<MemberId>> by_post;

  std::size_t total() const;
};

/// Checks strictly increasing timestamps, no duplicate (member, post,
/// timestamp) rows and a single owner per post. Throws MalformedLog.
void check_log(const SubmissionLog& log);

ObligationSet derive_obligations(const SubmissionLog& log, std::size_t n = 5,
                                 WindowMode mode = WindowMode::DistinctOthers);

struct ValidationOptions {
  std::size_t n = 5;
  WindowMode mode = WindowMode::DistinctOthers;
  /// How far before the submission an engagement may happen; unset means any
  /// time after the target was submitted.
  std::optional<Timestamp> deadline_window;
};

struct Violation {
  std::size_t submission_index = 0;
  MemberId member;
  PostId post;
  /// Obligated posts missing a like or a comment.
  std::vector<PostId> missing;
};

struct ValidationResult {
  std::vector<Violation> violations;
  SubmissionLog purged_log;
  /// Obligations of the purged log.
  ObligationSet obligations;
};

/// Replays the enforcement bot: submissions are processed in order against
/// the already-accepted log; one whose obligations lack a like or a comment
/// inside the window is deleted, which changes the obligations of everything
/// after it. Validating the purged log again yields no violations.
ValidationResult validate(const SubmissionLog& log, const std::vector<EngagementEvent>& events,
                          const ValidationOptions& options = {});

/// Number of obligated engagers per post.
std::map<PostId, std::size_t> direct_engagement_count(const ObligationSet& obligations);

std::string to_string(EngagementKind kind);
EngagementKind parse_engagement_kind(const std::string& text);
std::string to_string(WindowMode mode);
WindowMode parse_window_mode(const std::string& text);

}  // namespace infcartel::pod
