#include <memory>
#include <set>

#include "cli.hpp"
#include "infcartel/io.hpp"
#include "infcartel/pod.hpp"

namespace infcartel::cli {

namespace {

struct WindowArgs {
  std::string log = "-";
  std::size_t n = 5;
  std::string mode = "distinct";

  void attach(CLI::App* sub) {
    sub->add_option("--log", log, "Submission log CSV (member_id,post_id,timestamp); '-' for stdin");
    sub->add_option("--n", n, "Look-back window size");
    sub->add_option("--mode", mode, "Window mode: distinct or positional");
  }
  pod::SubmissionLog load() const { return io::load_submissions(io::read_csv_path(log)); }
  pod::WindowMode window_mode() const {
    try {
      return pod::parse_window_mode(mode);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
};

Table log_table(const pod::SubmissionLog& log) {
  Table t{{"member_id", "post_id", "timestamp"}};
  for (const auto& s : log) t.add({s.member, s.post, s.timestamp});
  return t;
}

}  // namespace

void add_pod_commands(CLI::App& app, Registry& reg) {
  auto* pod_cmd = app.add_subcommand("pod", "Engagement pod protocol");
  pod_cmd->require_subcommand(1);

  {
    auto a = std::make_shared<WindowArgs>();
    auto* sub = pod_cmd->add_subcommand("obligations", "Posts each submission must engage with");
    a->attach(sub);
    reg.add(sub, [a] {
      const auto log = a->load();
      const auto ob = pod::derive_obligations(log, a->n, a->window_mode());
      Result r{"pod-obligations", {{"submission", "member_id", "post_id", "rank", "obligated_post"}}};
      for (std::size_t i = 0; i < log.size(); ++i)
        for (std::size_t k = 0; k < ob.per_submission[i].size(); ++k)
          r.table.add({i, log[i].member, log[i].post, k + 1, ob.per_submission[i][k]});
      r.metadata = {{"submissions", log.size()}, {"obligations", ob.total()}};
      return r;
    });
  }

  {
    struct Args {
      WindowArgs window;
      std::string events;
      pod::Timestamp deadline = -1;
      std::string purged;
    };
    auto a = std::make_shared<Args>();
    auto* sub = pod_cmd->add_subcommand("validate", "Replay enforcement and list deleted submissions");
    a->window.attach(sub);
    sub->add_option("--events", a->events, "Engagement events CSV (member_id,post_id,timestamp,kind)")->required();
    sub->add_option("--deadline", a->deadline, "Engagement window before a submission, in timestamp units; negative for none");
    sub->add_option("--purged", a->purged, "Also write the purged log here");
    reg.add(sub, [a] {
      const auto log = a->window.load();
      const auto events = io::load_events(io::read_csv_path(a->events));
      pod::ValidationOptions opts;
      opts.n = a->window.n;
      opts.mode = a->window.window_mode();
      if (a->deadline >= 0) opts.deadline_window = a->deadline;
      const auto v = pod::validate(log, events, opts);
      Result r{"pod-violations", {{"submission", "member_id", "post_id", "missing"}}};
      for (const auto& x : v.violations) {
        std::string missing;
        for (const auto& p : x.missing) missing += (missing.empty() ? "" : ";") + p;
        r.table.add({x.submission_index, x.member, x.post, missing});
      }
      r.metadata = {{"submissions", log.size()}, {"kept", v.purged_log.size()}, {"deleted", v.violations.size()}};
      if (!a->purged.empty()) r.side_files.push_back({a->purged, "pod-log", log_table(v.purged_log)});
      return r;
    });
  }

  {
    auto a = std::make_shared<WindowArgs>();
    auto* sub = pod_cmd->add_subcommand("counts", "Obligated engagers per post");
    a->attach(sub);
    reg.add(sub, [a] {
      const auto log = a->load();
      const auto counts = pod::direct_engagement_count(pod::derive_obligations(log, a->n, a->window_mode()));
      Result r{"pod-counts", {{"post_id", "member_id", "count"}}};
      std::set<std::string> seen;
      for (const auto& s : log)
        if (seen.insert(s.post).second) r.table.add({s.post, s.member, counts.at(s.post)});
      return r;
    });
  }
}

}  // namespace infcartel::cli
