#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "agrinav/decompose.hpp"
#include "agrinav/episode.hpp"
#include "agrinav/model_client.hpp"
#include "agrinav/pose.hpp"
#include "agrinav/prompt.hpp"
#include "agrinav/subtask.hpp"

namespace agrinav {

// One step's answer: the low-level action, an optional state change for the
// subtask list, and the stated reasoning.
struct PolicyDecision {
  Action action = Action::kStop;
  StateTransition transition = StateTransition::none();
  std::string rationale;
};

// One line of the run log.
struct DecisionRecord {
  double time = 0.0;
  std::optional<int> focus_id;
  PolicyDecision decision;
  Pose agent_pose_after;
  bool transition_accepted = false;  // true iff a non-none transition was applied
};

struct DecideOptions {
  int history_tail = 3;  // decision records echoed into {{history_tail}}
  RetryPolicy retry;
};

// Parses the {"action","state_change","reason"} reply contract. Accepts
// "none" or "subtask <i>: <from> to <to>" (and the spelled-out
// "Subtask NO.<i> changes from <from> to <to>" variant) for state_change.
// Throws Error(kUnparseableReply) on anything else.
PolicyDecision parse_decision_reply(const std::string& reply);

// Everything a policy may look at when deciding one step.
struct DecisionContext {
  const Episode& episode;
  const SubtaskList& list;
  int step_index = 0;    // 0-based decision ordinal
  double time = 0.0;     // playback seconds
  const ImagePayload* frame = nullptr;  // null for pixel-free sources
  std::span<const DecisionRecord> history;
};

// Assembles the decision prompt for the focus subtask, queries the backend
// and parses the reply. A parseable reply proposing an illegal transition is
// coerced to none() with a note appended to `violations`; it never throws
// for that. Requires focus_subtask(list) to exist.
PolicyDecision decide(const SubtaskList& list, const ImagePayload* frame, ModelClient& backend,
                      const PromptTemplate& tpl, const DecideOptions& options = {},
                      std::span<const DecisionRecord> history = {},
                      std::vector<std::string>* violations = nullptr);

// A policy plans once per episode and then answers one decision per step.
// Instances are shared across concurrently running episodes: both methods
// are const and must not keep per-episode state.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string name() const = 0;
  virtual SubtaskList plan(const Episode& episode) const = 0;
  virtual PolicyDecision decide_step(const DecisionContext& context,
                                     std::vector<std::string>* violations) const = 0;
};

// Uniform draws over the four-action space, hashed from
// (seed, episode id, step) so runs are reproducible regardless of thread
// interleaving. Never proposes state transitions.
std::shared_ptr<Policy> random_policy(std::uint64_t seed);

// Replays the annotated expert actions by playback time, completes subtasks
// as their boundary times pass, and stops when the annotation ends.
std::shared_ptr<Policy> scripted_oracle_policy(const Episode& episode);

struct VlmPolicyOptions {
  bool use_subtask_list = true;  // false = single-subtask ablation
  PromptTemplate decompose_template = default_decompose_template();
  PromptTemplate decision_template = default_decision_template();
  DecomposeOptions decompose;
  DecideOptions decide;
};

std::shared_ptr<Policy> vlm_policy(std::shared_ptr<ModelClient> backend,
                                   VlmPolicyOptions options = {});

}  // namespace agrinav
