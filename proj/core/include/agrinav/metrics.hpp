#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agrinav/episode.hpp"
#include "agrinav/kinematics.hpp"
#include "agrinav/runner.hpp"

namespace agrinav {

// Scores for one finished episode.
//
// completed_subtasks is only judgeable when the episode carries subtask
// boundaries; without them it stays nullopt ("unscored") and the episode is
// excluded from the subtask success-rate aggregation rather than guessed at.
struct EpisodeResult {
  std::string episode_id;
  bool success = false;
  double navigation_error = 0.0;             // metres to the goal at the end
  std::optional<int> completed_subtasks;     // <= total_subtasks
  int total_subtasks = 1;
  SceneClass scene_class = SceneClass::kFarm;
  int subtask_count = 1;                     // episode-intrinsic, for bucketing
  Termination termination = Termination::kStopped;
};

// One aggregation cell (the whole set or one bucket).
struct Aggregate {
  int episodes = 0;
  double success_rate = 0.0;
  double navigation_error_mean = 0.0;
  int scored_episodes = 0;       // episodes with judgeable subtask completion
  double completed_mean = 0.0;   // over scored episodes
  double total_mean = 0.0;       // over scored episodes
  double subtask_success_rate = 0.0;  // completed_mean / total_mean
};

// Disjoint groupings of the result set. Subtask-count buckets follow the
// report layout: the coarse split {=2, >=3} and the fine split {=2, =3,
// >=4}; scenes bucket by scene class.
enum class Partition { kScene, kSubtaskCoarse, kSubtaskFine };

struct AggregateReport {
  Aggregate overall;
  std::map<std::string, Aggregate> buckets;  // key e.g. "scene:farm", "subtask=2"
};

// navigation_error = distance from the final pose to the goal; success means
// inside the success threshold and not aborted. Subtask completions count
// when their doing->done transition was accepted while the agent stood
// within the success threshold of the demonstrated pose at that subtask's
// boundary time.
EpisodeResult score_episode(const EpisodeRun& run, const Episode& episode,
                            const KinematicsConfig& config);

// Means across episodes. The subtask success rate is the ratio of means
// (mean completed / mean total), not the mean of per-episode ratios; the two
// differ and the former is the defined metric.
AggregateReport aggregate(const std::vector<EpisodeResult>& results,
                          const std::vector<Partition>& partitions);

enum class ReportFormat { kTableText, kCsv, kStructured };

ReportFormat report_format_from_name(std::string_view name);  // throws Error(kUsage)

// Deterministic rendering. The subtask success cell prints the
// "completed_mean / total_mean" pair; empty cells print "-". CSV carries
// full double precision and parses back to identical values.
std::string render_report(const AggregateReport& report, ReportFormat format);

}  // namespace agrinav
