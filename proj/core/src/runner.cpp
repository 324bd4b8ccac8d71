#include "agrinav/runner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "agrinav/error.hpp"

namespace agrinav {

namespace fs = std::filesystem;

const char* termination_name(Termination termination) {
  switch (termination) {
    case Termination::kStopped: return "stopped";
    case Termination::kTimeout: return "timeout";
    case Termination::kAborted: return "aborted";
  }
  return "timeout";
}

std::optional<ImagePayload> fetch_frame(const FrameSourceRef& source, double time) {
  if (source.kind == FrameSourceKind::kNull) return std::nullopt;
  const long index = std::lround(time * source.nominal_fps);
  char padded[16];
  std::snprintf(padded, sizeof(padded), "%06ld", index);
  const std::string bases[] = {std::to_string(index), padded};
  const std::pair<const char*, const char*> kinds[] = {{".jpg", "image/jpeg"},
                                                       {".png", "image/png"}};
  for (const auto& base : bases) {
    for (const auto& [extension, media_type] : kinds) {
      fs::path candidate = fs::path(source.uri) / (base + extension);
      std::ifstream in(candidate, std::ios::binary);
      if (!in) continue;
      ImagePayload payload;
      payload.media_type = media_type;
      payload.bytes.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
      return payload;
    }
  }
  return std::nullopt;
}

EpisodeRun run_episode(const Episode& episode, const Policy& policy,
                       const KinematicsConfig& config) {
  validate_kinematics_config(config);
  EpisodeRun run;
  run.episode_id = episode.id;
  run.trajectory.push_back({0.0, Pose{}});

  SubtaskList list;
  try {
    list = policy.plan(episode);
    validate_subtask_list(list);
  } catch (const std::exception& e) {
    run.termination = Termination::kAborted;
    run.abort_reason = std::string("planning failed: ") + e.what();
    return run;
  }

  const double period = config.decision_period;
  const long budget_steps = playback_decision_count(episode.duration(), config);
  Pose pose;
  run.termination = Termination::kTimeout;

  for (long step = 0; step < budget_steps; ++step) {
    const double now = static_cast<double>(step) * period;

    auto focus = focus_subtask(list);
    if (!focus) {
      // Everything is done; stop without consulting the policy.
      DecisionRecord record;
      record.time = now;
      record.decision = PolicyDecision{Action::kStop, StateTransition::none(),
                                       "all subtasks done"};
      record.agent_pose_after = pose;
      run.records.push_back(std::move(record));
      run.termination = Termination::kStopped;
      break;
    }

    // The focus subtask starts the moment it becomes the focus; this is the
    // one transition per step the runner applies on its own, so a completing
    // subtask does not deadlock the handoff to the next one.
    if (list.at(*focus).state == SubtaskState::kPending) {
      list = apply_transition(list, StateTransition::begin(*focus));
    }

    PolicyDecision decision;
    try {
      auto frame = fetch_frame(episode.frame_source, now);
      DecisionContext context{episode, list, static_cast<int>(step), now,
                              frame ? &*frame : nullptr, run.records};
      decision = policy.decide_step(context, &run.violations);
    } catch (const std::exception& e) {
      run.termination = Termination::kAborted;
      run.abort_reason = e.what();
      break;
    }

    bool accepted = false;
    if (!decision.transition.is_none()) {
      if (transition_legal(list, decision.transition)) {
        list = apply_transition(list, decision.transition);
        accepted = true;
      } else {
        run.violations.push_back(
            "step " + std::to_string(step) + ": illegal transition ignored (subtask " +
            std::to_string(decision.transition.subtask_id()) + ")");
        decision.transition = StateTransition::none();
      }
    }

    DecisionRecord record;
    record.time = now;
    record.focus_id = focus;
    record.transition_accepted = accepted;

    if (decision.action == Action::kStop) {
      record.decision = std::move(decision);
      record.agent_pose_after = pose;
      run.records.push_back(std::move(record));
      run.termination = Termination::kStopped;
      break;
    }

    pose = step_pose(pose, decision.action, period, config);
    run.trajectory.push_back({now + period, pose});
    record.decision = std::move(decision);
    record.agent_pose_after = pose;
    run.records.push_back(std::move(record));
  }

  run.final_list = std::move(list);
  return run;
}

}  // namespace agrinav
