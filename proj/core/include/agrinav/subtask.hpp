#pragma once

#include <optional>
#include <string>
#include <vector>

namespace agrinav {

enum class SubtaskState { kPending, kDoing, kDone };

const char* subtask_state_name(SubtaskState state);
SubtaskState subtask_state_from_name(std::string_view name);  // throws

// One step of a decomposed instruction. Fresh lists start all-pending.
struct Subtask {
  int id = 0;  // 1-based position in the list
  std::string description;
  std::string start_condition;
  std::string end_condition;
  SubtaskState state = SubtaskState::kPending;
};

// Ordered decomposition of one instruction.
//
// State invariant: reading the list front to back, states always match
// DONE* (DOING | nothing) PENDING*. Subtasks complete strictly in order and
// at most one is ever active.
struct SubtaskList {
  std::vector<Subtask> subtasks;

  int size() const { return static_cast<int>(subtasks.size()); }
  const Subtask& at(int id) const { return subtasks.at(static_cast<std::size_t>(id - 1)); }
};

// Structural check: ids 1..N, non-empty text fields, state pattern. Throws
// Error(kInvalidSubtaskList).
void validate_subtask_list(const SubtaskList& list);

bool states_well_formed(const SubtaskList& list);

// A single state change. Only pending->doing and doing->done exist; anything
// else is represented as none() and means "no change this step".
class StateTransition {
 public:
  static StateTransition none() { return StateTransition(); }
  static StateTransition begin(int subtask_id) {
    return StateTransition(subtask_id, SubtaskState::kPending, SubtaskState::kDoing);
  }
  static StateTransition complete(int subtask_id) {
    return StateTransition(subtask_id, SubtaskState::kDoing, SubtaskState::kDone);
  }

  bool is_none() const { return subtask_id_ == 0; }
  int subtask_id() const { return subtask_id_; }
  SubtaskState from() const { return from_; }
  SubtaskState to() const { return to_; }

  bool operator==(const StateTransition&) const = default;

 private:
  StateTransition() = default;
  StateTransition(int id, SubtaskState from, SubtaskState to)
      : subtask_id_(id), from_(from), to_(to) {}

  int subtask_id_ = 0;  // 0 encodes none
  SubtaskState from_ = SubtaskState::kPending;
  SubtaskState to_ = SubtaskState::kPending;
};

// pending->doing on subtask i is legal iff every earlier subtask is done and
// nothing is doing; doing->done on i is legal iff i is the doing subtask.
bool transition_legal(const SubtaskList& list, const StateTransition& transition);

// Returns the updated list; none() is the identity. Throws
// Error(kIllegalTransition) and leaves the input untouched otherwise.
SubtaskList apply_transition(SubtaskList list, const StateTransition& transition);

// The one subtask the decision maker should attend to: the doing subtask if
// any, else the lowest-id pending one, else nullopt when everything is done.
std::optional<int> focus_subtask(const SubtaskList& list);

// JSON array form used in run logs and CLI output.
std::string serialize_subtask_list(const SubtaskList& list);
SubtaskList parse_subtask_list(std::string_view document);

}  // namespace agrinav
