#pragma once

#include <optional>
#include <string>
#include <vector>

#include "agrinav/episode.hpp"
#include "agrinav/kinematics.hpp"
#include "agrinav/model_client.hpp"
#include "agrinav/policy.hpp"
#include "agrinav/subtask.hpp"

namespace agrinav {

enum class Termination { kStopped, kTimeout, kAborted };

const char* termination_name(Termination termination);

// Everything one playback produced. Immutable once returned.
struct EpisodeRun {
  std::string episode_id;
  Trajectory trajectory;                 // starts at (0, origin)
  std::vector<DecisionRecord> records;   // one per decision
  Termination termination = Termination::kTimeout;
  SubtaskList final_list;                // empty when planning aborted
  std::vector<std::string> violations;   // coerced transitions etc.
  std::string abort_reason;              // set when termination == kAborted
};

// Loads the frame for playback time t: files in the directory are named by
// frame index (plain or zero-padded to six digits, .jpg or .png) and t maps
// to index round(t * nominal_fps). Returns nullopt for the null kind or a
// missing frame.
std::optional<ImagePayload> fetch_frame(const FrameSourceRef& source, double time);

// Open-loop playback: the clock advances one decision period per step no
// matter what the agent chose; divergence from the demonstrated route shows
// up in the dead-reckoned poses, not in the frames.
//
// Per step: auto-start the focus subtask if it is still pending, query the
// policy, apply its (legality-checked) transition, then its action. The run
// ends when the policy or the runner emits STOP, when the time budget
// max_step_factor * duration runs out, or — recorded, not thrown — when the
// policy fails.
EpisodeRun run_episode(const Episode& episode, const Policy& policy,
                       const KinematicsConfig& config);

}  // namespace agrinav
