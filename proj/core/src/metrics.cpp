#include "agrinav/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "agrinav/error.hpp"
#include "json.hpp"

namespace agrinav {

using nlohmann::json;

EpisodeResult score_episode(const EpisodeRun& run, const Episode& episode,
                            const KinematicsConfig& config) {
  if (run.trajectory.empty()) {
    throw Error(Errc::kInvalidManifest, "run has no trajectory");
  }
  EpisodeResult result;
  result.episode_id = episode.id;
  result.scene_class = episode.scene_class;
  result.termination = run.termination;
  result.total_subtasks = std::max(run.final_list.size(), 1);
  result.subtask_count = episode.subtask_boundaries.empty()
                             ? result.total_subtasks
                             : static_cast<int>(episode.subtask_boundaries.size());

  const Pose final_pose = run.trajectory.back().pose;
  result.navigation_error = position_distance(final_pose, episode.goal_pose);
  result.success = result.navigation_error <= config.success_threshold &&
                   run.termination != Termination::kAborted;

  if (!episode.subtask_boundaries.empty()) {
    int completed = 0;
    for (const auto& record : run.records) {
      if (!record.transition_accepted) continue;
      const auto& transition = record.decision.transition;
      if (transition.is_none() || transition.to() != SubtaskState::kDone) continue;
      const std::size_t index = static_cast<std::size_t>(transition.subtask_id() - 1);
      if (index >= episode.subtask_boundaries.size()) continue;
      const double boundary_time = episode.subtask_boundaries[index].second;
      const Pose expert = ground_truth_pose_at(episode.annotation, config, boundary_time);
      if (position_distance(record.agent_pose_after, expert) <= config.success_threshold) {
        ++completed;
      }
    }
    result.completed_subtasks = std::min(completed, result.total_subtasks);
  }
  return result;
}

namespace {

Aggregate fold(const std::vector<const EpisodeResult*>& results) {
  Aggregate aggregate;
  aggregate.episodes = static_cast<int>(results.size());
  if (results.empty()) return aggregate;
  double successes = 0.0, error_sum = 0.0, completed_sum = 0.0, total_sum = 0.0;
  for (const EpisodeResult* result : results) {
    successes += result->success ? 1.0 : 0.0;
    error_sum += result->navigation_error;
    if (result->completed_subtasks) {
      ++aggregate.scored_episodes;
      completed_sum += *result->completed_subtasks;
      total_sum += result->total_subtasks;
    }
  }
  aggregate.success_rate = successes / static_cast<double>(aggregate.episodes);
  aggregate.navigation_error_mean = error_sum / static_cast<double>(aggregate.episodes);
  if (aggregate.scored_episodes > 0) {
    aggregate.completed_mean = completed_sum / static_cast<double>(aggregate.scored_episodes);
    aggregate.total_mean = total_sum / static_cast<double>(aggregate.scored_episodes);
    aggregate.subtask_success_rate = aggregate.completed_mean / aggregate.total_mean;
  }
  return aggregate;
}

std::vector<std::string> partition_keys(Partition partition,
                                        const std::vector<EpisodeResult>& results) {
  switch (partition) {
    case Partition::kScene: {
      std::vector<std::string> keys;
      for (SceneClass scene : all_scene_classes()) {
        keys.push_back(std::string("scene:") + scene_name(scene));
      }
      return keys;
    }
    case Partition::kSubtaskCoarse: {
      std::vector<std::string> keys;
      for (const auto& result : results) {
        if (result.subtask_count < 2) {
          keys = {"subtask=1", "subtask=2", "subtask>=3"};
          break;
        }
      }
      if (keys.empty()) keys = {"subtask=2", "subtask>=3"};
      return keys;
    }
    case Partition::kSubtaskFine: {
      std::vector<std::string> keys;
      for (const auto& result : results) {
        if (result.subtask_count < 2) {
          keys = {"subtask=1", "subtask=2", "subtask=3", "subtask>=4"};
          break;
        }
      }
      if (keys.empty()) keys = {"subtask=2", "subtask=3", "subtask>=4"};
      return keys;
    }
  }
  return {};
}

std::string bucket_key(Partition partition, const EpisodeResult& result) {
  switch (partition) {
    case Partition::kScene:
      return std::string("scene:") + scene_name(result.scene_class);
    case Partition::kSubtaskCoarse:
      if (result.subtask_count < 2) return "subtask=1";
      return result.subtask_count == 2 ? "subtask=2" : "subtask>=3";
    case Partition::kSubtaskFine:
      if (result.subtask_count < 2) return "subtask=1";
      if (result.subtask_count == 2) return "subtask=2";
      if (result.subtask_count == 3) return "subtask=3";
      return "subtask>=4";
  }
  return "";
}

}  // namespace

AggregateReport aggregate(const std::vector<EpisodeResult>& results,
                          const std::vector<Partition>& partitions) {
  if (results.empty()) {
    throw Error(Errc::kInvalidManifest, "cannot aggregate an empty result set");
  }
  AggregateReport report;
  std::vector<const EpisodeResult*> all;
  all.reserve(results.size());
  for (const auto& result : results) all.push_back(&result);
  report.overall = fold(all);

  for (Partition partition : partitions) {
    std::map<std::string, std::vector<const EpisodeResult*>> groups;
    for (const auto& key : partition_keys(partition, results)) groups[key];
    for (const auto& result : results) {
      groups[bucket_key(partition, result)].push_back(&result);
    }
    for (const auto& [key, members] : groups) {
      report.buckets[key] = fold(members);
    }
  }
  return report;
}

ReportFormat report_format_from_name(std::string_view name) {
  if (name == "table" || name == "table_text" || name == "text") return ReportFormat::kTableText;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json" || name == "structured") return ReportFormat::kStructured;
  throw Error(Errc::kUsage, "unknown report format \"" + std::string(name) + "\"");
}

namespace {

std::string fixed2(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", value);
  return buffer;
}

std::string full_precision(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string subtask_pair_cell(const Aggregate& aggregate) {
  if (aggregate.scored_episodes == 0) return "-";
  return fixed2(aggregate.completed_mean) + " / " + fixed2(aggregate.total_mean);
}

void render_table_row(std::ostringstream& out, const std::string& label,
                      const Aggregate& aggregate) {
  char line[160];
  if (aggregate.episodes == 0) {
    std::snprintf(line, sizeof(line), "%-18s %6s %6s %8s  %s\n", label.c_str(), "-", "-", "-",
                  "-");
  } else {
    std::snprintf(line, sizeof(line), "%-18s %6d %6s %8s  %s\n", label.c_str(),
                  aggregate.episodes, fixed2(aggregate.success_rate).c_str(),
                  fixed2(aggregate.navigation_error_mean).c_str(),
                  subtask_pair_cell(aggregate).c_str());
  }
  out << line;
}

json aggregate_to_json(const Aggregate& aggregate) {
  json doc = {{"episodes", aggregate.episodes},
              {"success_rate", aggregate.success_rate},
              {"navigation_error_mean", aggregate.navigation_error_mean},
              {"scored_episodes", aggregate.scored_episodes}};
  if (aggregate.scored_episodes > 0) {
    doc["completed_mean"] = aggregate.completed_mean;
    doc["total_mean"] = aggregate.total_mean;
    doc["subtask_success_rate"] = aggregate.subtask_success_rate;
  }
  return doc;
}

}  // namespace

std::string render_report(const AggregateReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::kTableText: {
      std::ostringstream out;
      out << "bucket                  n     SR       NE  completed / total\n";
      render_table_row(out, "overall", report.overall);
      for (const auto& [key, aggregate] : report.buckets) {
        render_table_row(out, key, aggregate);
      }
      return out.str();
    }
    case ReportFormat::kCsv: {
      std::ostringstream out;
      out << "bucket,episodes,success_rate,navigation_error_mean,scored_episodes,"
             "completed_mean,total_mean,subtask_success_rate\n";
      auto row = [&out](const std::string& label, const Aggregate& aggregate) {
        out << label << ',' << aggregate.episodes << ','
            << full_precision(aggregate.success_rate) << ','
            << full_precision(aggregate.navigation_error_mean) << ','
            << aggregate.scored_episodes << ',';
        if (aggregate.scored_episodes > 0) {
          out << full_precision(aggregate.completed_mean) << ','
              << full_precision(aggregate.total_mean) << ','
              << full_precision(aggregate.subtask_success_rate) << '\n';
        } else {
          out << "-,-,-\n";
        }
      };
      row("overall", report.overall);
      for (const auto& [key, aggregate] : report.buckets) row(key, aggregate);
      return out.str();
    }
    case ReportFormat::kStructured: {
      json doc;
      doc["overall"] = aggregate_to_json(report.overall);
      doc["buckets"] = json::object();
      for (const auto& [key, aggregate] : report.buckets) {
        doc["buckets"][key] = aggregate_to_json(aggregate);
      }
      return doc.dump(2) + "\n";
    }
  }
  return "";
}

}  // namespace agrinav
