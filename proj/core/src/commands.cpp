#include "agrinav/commands.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include "agrinav/decompose.hpp"
#include "agrinav/episode_io.hpp"
#include "agrinav/error.hpp"
#include "agrinav/http_client.hpp"
#include "agrinav/metrics.hpp"
#include "agrinav/policy.hpp"
#include "agrinav/runner.hpp"
#include "agrinav/synth.hpp"
#include "agrinav/text.hpp"
#include "json.hpp"

namespace agrinav {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::kMissingFile, "cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kMissingFile, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string safe_file_stem(const std::string& id) {
  std::string out = id;
  for (char& c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
    if (!ok) c = '_';
  }
  return out;
}

std::string transition_text(const StateTransition& transition) {
  if (transition.is_none()) return "none";
  return "subtask " + std::to_string(transition.subtask_id()) + ": " +
         subtask_state_name(transition.from()) + " to " + subtask_state_name(transition.to());
}

json result_to_json(const EpisodeResult& result) {
  json doc = {{"episode_id", result.episode_id},
              {"success", result.success},
              {"navigation_error", result.navigation_error},
              {"total_subtasks", result.total_subtasks},
              {"scene_class", scene_name(result.scene_class)},
              {"subtask_count", result.subtask_count},
              {"termination", termination_name(result.termination)}};
  if (result.completed_subtasks) {
    doc["completed_subtasks"] = *result.completed_subtasks;
  } else {
    doc["completed_subtasks"] = nullptr;
  }
  return doc;
}

EpisodeResult result_from_json(const json& doc) {
  EpisodeResult result;
  result.episode_id = doc.at("episode_id").get<std::string>();
  result.success = doc.at("success").get<bool>();
  result.navigation_error = doc.at("navigation_error").get<double>();
  result.total_subtasks = doc.at("total_subtasks").get<int>();
  result.scene_class = scene_from_name(doc.at("scene_class").get<std::string>());
  result.subtask_count = doc.at("subtask_count").get<int>();
  const std::string termination = doc.at("termination").get<std::string>();
  if (termination == "stopped") result.termination = Termination::kStopped;
  else if (termination == "timeout") result.termination = Termination::kTimeout;
  else result.termination = Termination::kAborted;
  if (doc.contains("completed_subtasks") && !doc.at("completed_subtasks").is_null()) {
    result.completed_subtasks = doc.at("completed_subtasks").get<int>();
  }
  return result;
}

std::string run_log_text(const EpisodeRun& run, const std::string& policy_name) {
  std::ostringstream out;
  json plan_line = {{"type", "plan"},
                    {"episode", run.episode_id},
                    {"policy", policy_name},
                    {"subtasks", json::parse(serialize_subtask_list(run.final_list))}};
  out << plan_line.dump() << "\n";
  for (const auto& record : run.records) {
    json line = {{"type", "decision"},
                 {"time", record.time},
                 {"action", action_token(record.decision.action)},
                 {"state_change", transition_text(record.decision.transition)},
                 {"reason", record.decision.rationale},
                 {"pose_after", {record.agent_pose_after.x, record.agent_pose_after.y,
                                 record.agent_pose_after.heading}},
                 {"transition_accepted", record.transition_accepted}};
    if (record.focus_id) line["focus"] = *record.focus_id;
    else line["focus"] = nullptr;
    out << line.dump() << "\n";
  }
  json end_line = {{"type", "end"},
                   {"termination", termination_name(run.termination)},
                   {"violations", run.violations}};
  if (!run.abort_reason.empty()) end_line["abort_reason"] = run.abort_reason;
  out << end_line.dump() << "\n";
  return out.str();
}

struct EvalSetup {
  KinematicsConfig kinematics;
  PromptTemplate decompose_template = default_decompose_template();
  PromptTemplate decision_template = default_decision_template();
  std::shared_ptr<ModelClient> client;  // vlm kinds only
  std::shared_ptr<Policy> shared_policy;  // random / vlm kinds
};

bool is_vlm_kind(const std::string& kind) { return kind == "vlm" || kind == "vlm_no_stl"; }

json stamp_json(const RunManifest& manifest, const EvalSetup& setup) {
  json stamp;
  stamp["dataset"] = manifest.dataset_dir;
  stamp["policy"] = manifest.policy_kind;
  stamp["seed"] = manifest.seed;
  stamp["strict"] = manifest.strict;
  stamp["parallelism"] = manifest.parallelism;
  stamp["kinematics"] = json::parse(serialize_kinematics_config(setup.kinematics));
  stamp["templates"] = {
      {"decompose",
       {{"name", setup.decompose_template.name},
        {"digest", fnv1a64_hex(setup.decompose_template.body)}}},
      {"decision",
       {{"name", setup.decision_template.name},
        {"digest", fnv1a64_hex(setup.decision_template.body)}}}};
  if (setup.client) stamp["backend"] = setup.client->id();
  return stamp;
}

}  // namespace

int cmd_gen(const std::string& spec_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed_override, std::optional<int> episodes_override,
            std::ostream& out, std::ostream& err) {
  try {
    if (out_dir.empty()) throw Error(Errc::kUsage, "gen needs --out");
    GeneratorSpec spec;
    spec.n_episodes = 100;
    if (!spec_path.empty()) spec = parse_generator_spec(read_file(spec_path));
    if (seed_override) spec.seed = *seed_override;
    if (episodes_override) spec.n_episodes = *episodes_override;
    validate_generator_spec(spec);

    auto episodes = generate(spec);
    const std::string index = write_dataset(episodes, out_dir, serialize_generator_spec(spec));
    out << "wrote " << episodes.size() << " episodes to " << out_dir << " (index " << index
        << ")\n";
    return 0;
  } catch (const Error& e) {
    err << "gen: " << e.what() << "\n";
    return e.code() == Errc::kUsage ? 2 : 1;
  }
}

int cmd_stats(const std::string& dataset_dir, const std::string& format, std::ostream& out,
              std::ostream& err) {
  try {
    auto episodes = load_dataset(dataset_dir);
    std::vector<int> counts;
    counts.reserve(episodes.size());
    for (const auto& episode : episodes) {
      counts.push_back(episode.subtask_boundaries.empty()
                           ? 1
                           : static_cast<int>(episode.subtask_boundaries.size()));
    }
    out << render_stats(compute_stats(episodes, counts), format == "csv");
    return 0;
  } catch (const Error& e) {
    err << "stats: " << e.what() << "\n";
    return 1;
  }
}

int cmd_validate(const std::string& dataset_dir, std::ostream& out, std::ostream& err) {
  std::vector<std::string> manifests;
  try {
    manifests = list_manifests(dataset_dir);
  } catch (const Error& e) {
    err << "validate: " << e.what() << "\n";
    return 2;
  }
  if (manifests.empty()) {
    out << "warning: 0 episodes in " << dataset_dir << "\n";
    return 0;
  }
  int failures = 0;
  for (const auto& manifest : manifests) {
    try {
      Episode episode = load_episode(manifest);
      out << "OK   " << manifest << "\n";
      for (const auto& warning : annotation_warnings(episode.annotation)) {
        out << "     warning: " << warning << "\n";
      }
    } catch (const Error& e) {
      out << "FAIL " << manifest << ": " << e.what() << "\n";
      ++failures;
    }
  }
  out << manifests.size() - failures << "/" << manifests.size() << " episodes valid\n";
  return failures == 0 ? 0 : 1;
}

int cmd_decompose(const std::string& instruction, bool strict,
                  const std::string& template_path, const ClientFactory& factory,
                  std::ostream& out, std::ostream& err) {
  try {
    if (split_whitespace(instruction).empty()) {
      throw Error(Errc::kUsage, "decompose needs a non-empty instruction");
    }
    std::shared_ptr<ModelClient> client =
        factory ? factory() : make_http_client(http_config_from_env());
    PromptTemplate tpl =
        template_path.empty() ? default_decompose_template() : load_template(template_path);

    DecomposeOptions options;
    options.strict = strict;
    options.check_particle = true;
    auto result = decompose(InstructionText::from(instruction), *client, tpl, options);

    out << serialize_subtask_list(result.list) << "\n";
    for (const auto& report : result.reports) {
      out << report.principle << ": " << verdict_name(report.verdict) << " (score "
          << report.score << ") " << report.detail << "\n";
    }
    return 0;
  } catch (const Error& e) {
    err << "decompose: " << e.what() << "\n";
    if (e.code() == Errc::kUsage) return 2;
    if (e.code() == Errc::kInvalidConfig) return 2;
    return 1;
  }
}

int cmd_eval(const RunManifest& manifest, const ClientFactory& factory, std::ostream& out,
             std::ostream& err) {
  EvalSetup setup;
  std::vector<Episode> episodes;
  try {
    if (manifest.dataset_dir.empty() || manifest.out_dir.empty()) {
      throw Error(Errc::kUsage, "eval needs --dataset and --out");
    }
    if (manifest.policy_kind != "oracle" && manifest.policy_kind != "random" &&
        !is_vlm_kind(manifest.policy_kind)) {
      throw Error(Errc::kUsage, "unknown policy kind \"" + manifest.policy_kind + "\"");
    }
    const ReportFormat format = report_format_from_name(manifest.format);
    (void)format;

    if (!manifest.kinematics_config_path.empty()) {
      setup.kinematics = load_kinematics_config(manifest.kinematics_config_path);
    }
    if (!manifest.decompose_template_path.empty()) {
      setup.decompose_template = load_template(manifest.decompose_template_path);
    }
    if (!manifest.decision_template_path.empty()) {
      setup.decision_template = load_template(manifest.decision_template_path);
    }
    require_placeholders(setup.decompose_template, {"instruction"});
    require_placeholders(setup.decision_template, {"subtask_table", "focus_id", "action_menu"});

    if (is_vlm_kind(manifest.policy_kind)) {
      // configuration must be complete before any episode runs
      setup.client = factory ? factory() : make_http_client(http_config_from_env());
      VlmPolicyOptions options;
      options.use_subtask_list = manifest.policy_kind == "vlm";
      options.decompose_template = setup.decompose_template;
      options.decision_template = setup.decision_template;
      options.decompose.strict = manifest.strict;
      options.decompose.check_particle = false;  // keep one backend call per plan
      setup.shared_policy = vlm_policy(setup.client, options);
    } else if (manifest.policy_kind == "random") {
      setup.shared_policy = random_policy(manifest.seed);
    }

    episodes = load_dataset(manifest.dataset_dir, setup.kinematics);
    if (episodes.empty()) {
      throw Error(Errc::kInvalidManifest, "dataset has no episodes: " + manifest.dataset_dir);
    }
  } catch (const Error& e) {
    err << "eval: " << e.what() << "\n";
    return 2;
  }

  const fs::path out_dir(manifest.out_dir);
  const fs::path runs_dir = out_dir / "runs";
  const fs::path results_dir = out_dir / "results";
  fs::create_directories(runs_dir);
  fs::create_directories(results_dir);

  int parallelism = manifest.parallelism;
  if (parallelism <= 0) {
    parallelism = is_vlm_kind(manifest.policy_kind)
                      ? 1
                      : std::max(1u, std::thread::hardware_concurrency());
  }
  parallelism = std::min<int>(parallelism, static_cast<int>(episodes.size()));

  std::atomic<std::size_t> cursor{0};
  std::mutex failures_mutex;
  std::vector<std::string> failures;

  auto process = [&](const Episode& episode) {
    const std::string stem = safe_file_stem(episode.id);
    const fs::path result_path = results_dir / (stem + ".result.json");
    if (manifest.resume && fs::exists(result_path)) return;

    std::shared_ptr<Policy> policy = setup.shared_policy;
    if (manifest.policy_kind == "oracle") policy = scripted_oracle_policy(episode);

    EpisodeRun run = run_episode(episode, *policy, setup.kinematics);
    EpisodeResult result = score_episode(run, episode, setup.kinematics);
    write_file_atomic(runs_dir / (stem + ".jsonl"), run_log_text(run, policy->name()));
    write_file_atomic(result_path, result_to_json(result).dump(2));
  };

  auto worker = [&]() {
    while (true) {
      const std::size_t index = cursor.fetch_add(1);
      if (index >= episodes.size()) break;
      try {
        process(episodes[index]);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failures_mutex);
        failures.push_back(episodes[index].id + ": " + e.what());
      }
    }
  };

  std::vector<std::thread> threads;
  for (int i = 0; i < parallelism; ++i) threads.emplace_back(worker);
  for (auto& thread : threads) thread.join();

  for (const auto& failure : failures) err << "eval: episode failed: " << failure << "\n";

  // fold results from disk, in name order, so reruns aggregate identically
  std::vector<EpisodeResult> results;
  std::vector<fs::path> result_files;
  for (const auto& entry : fs::directory_iterator(results_dir)) {
    if (entry.path().extension() == ".json") result_files.push_back(entry.path());
  }
  std::sort(result_files.begin(), result_files.end());
  for (const auto& path : result_files) {
    json doc = json::parse(read_file(path), nullptr, false);
    if (doc.is_discarded()) continue;
    results.push_back(result_from_json(doc));
  }
  if (results.empty()) {
    err << "eval: no results produced\n";
    return 1;
  }

  AggregateReport report = aggregate(
      results, {Partition::kSubtaskCoarse, Partition::kSubtaskFine, Partition::kScene});
  write_file_atomic(out_dir / "report.txt", render_report(report, ReportFormat::kTableText));
  write_file_atomic(out_dir / "report.csv", render_report(report, ReportFormat::kCsv));
  write_file_atomic(out_dir / "report.json", render_report(report, ReportFormat::kStructured));
  write_file_atomic(out_dir / "stamp.json", stamp_json(manifest, setup).dump(2));

  out << render_report(report, report_format_from_name(manifest.format));
  return failures.empty() ? 0 : 1;
}

int cmd_report(const std::string& results_dir, const std::string& format, std::ostream& out,
               std::ostream& err) {
  try {
    fs::path dir(results_dir);
    if (fs::is_directory(dir / "results")) dir /= "results";
    std::vector<fs::path> result_files;
    if (fs::is_directory(dir)) {
      for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.size() > 12 && name.substr(name.size() - 12) == ".result.json") {
          result_files.push_back(entry.path());
        }
      }
    }
    std::sort(result_files.begin(), result_files.end());
    std::vector<EpisodeResult> results;
    for (const auto& path : result_files) {
      results.push_back(result_from_json(json::parse(read_file(path))));
    }
    if (results.empty()) {
      throw Error(Errc::kMissingFile, "no result files under " + results_dir);
    }
    AggregateReport report = aggregate(
        results, {Partition::kSubtaskCoarse, Partition::kSubtaskFine, Partition::kScene});
    out << render_report(report, report_format_from_name(format));
    return 0;
  } catch (const Error& e) {
    err << "report: " << e.what() << "\n";
    return e.code() == Errc::kUsage ? 2 : 1;
  } catch (const json::exception& e) {
    err << "report: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace agrinav
