#include "agrinav/subtask.hpp"

#include "agrinav/error.hpp"
#include "json.hpp"

namespace agrinav {

using nlohmann::json;

const char* subtask_state_name(SubtaskState state) {
  switch (state) {
    case SubtaskState::kPending: return "pending";
    case SubtaskState::kDoing: return "doing";
    case SubtaskState::kDone: return "done";
  }
  return "pending";
}

SubtaskState subtask_state_from_name(std::string_view name) {
  if (name == "pending") return SubtaskState::kPending;
  if (name == "doing") return SubtaskState::kDoing;
  if (name == "done") return SubtaskState::kDone;
  throw Error(Errc::kInvalidSubtaskList, "unknown subtask state \"" + std::string(name) + "\"");
}

bool states_well_formed(const SubtaskList& list) {
  // DONE* (DOING | nothing) PENDING*
  int phase = 0;  // 0 = done prefix, 1 = after the doing slot
  for (const auto& subtask : list.subtasks) {
    switch (subtask.state) {
      case SubtaskState::kDone:
        if (phase != 0) return false;
        break;
      case SubtaskState::kDoing:
        if (phase != 0) return false;
        phase = 1;
        break;
      case SubtaskState::kPending:
        phase = 1;
        break;
    }
  }
  return true;
}

void validate_subtask_list(const SubtaskList& list) {
  if (list.subtasks.empty()) {
    throw Error(Errc::kInvalidSubtaskList, "subtask list is empty");
  }
  for (std::size_t i = 0; i < list.subtasks.size(); ++i) {
    const Subtask& s = list.subtasks[i];
    if (s.id != static_cast<int>(i) + 1) {
      throw Error(Errc::kInvalidSubtaskList,
                  "subtask ids must be 1..N in order (position " + std::to_string(i + 1) +
                      " has id " + std::to_string(s.id) + ")");
    }
    if (s.description.empty() || s.start_condition.empty() || s.end_condition.empty()) {
      throw Error(Errc::kInvalidSubtaskList,
                  "subtask " + std::to_string(s.id) + " has an empty field");
    }
  }
  if (!states_well_formed(list)) {
    throw Error(Errc::kInvalidSubtaskList, "states violate the done-prefix pattern");
  }
}

bool transition_legal(const SubtaskList& list, const StateTransition& transition) {
  if (transition.is_none()) return true;
  const int id = transition.subtask_id();
  if (id < 1 || id > list.size()) return false;
  if (transition.from() == SubtaskState::kPending) {
    // pending -> doing
    if (list.at(id).state != SubtaskState::kPending) return false;
    for (const auto& subtask : list.subtasks) {
      if (subtask.state == SubtaskState::kDoing) return false;
      if (subtask.id < id && subtask.state != SubtaskState::kDone) return false;
    }
    return true;
  }
  // doing -> done
  return list.at(id).state == SubtaskState::kDoing;
}

SubtaskList apply_transition(SubtaskList list, const StateTransition& transition) {
  if (transition.is_none()) return list;
  if (!transition_legal(list, transition)) {
    std::string detail = "subtask " + std::to_string(transition.subtask_id()) + ": " +
                         subtask_state_name(transition.from()) + " to " +
                         subtask_state_name(transition.to());
    throw Error(Errc::kIllegalTransition, detail);
  }
  list.subtasks[static_cast<std::size_t>(transition.subtask_id() - 1)].state = transition.to();
  return list;
}

std::optional<int> focus_subtask(const SubtaskList& list) {
  for (const auto& subtask : list.subtasks) {
    if (subtask.state == SubtaskState::kDoing) return subtask.id;
  }
  for (const auto& subtask : list.subtasks) {
    if (subtask.state == SubtaskState::kPending) return subtask.id;
  }
  return std::nullopt;
}

std::string serialize_subtask_list(const SubtaskList& list) {
  json doc = json::array();
  for (const auto& subtask : list.subtasks) {
    doc.push_back({{"id", subtask.id},
                   {"description", subtask.description},
                   {"start_condition", subtask.start_condition},
                   {"end_condition", subtask.end_condition},
                   {"state", subtask_state_name(subtask.state)}});
  }
  return doc.dump();
}

SubtaskList parse_subtask_list(std::string_view document) {
  json doc = json::parse(document, nullptr, false);
  if (doc.is_discarded() || !doc.is_array()) {
    throw Error(Errc::kInvalidSubtaskList, "subtask list must be a JSON array");
  }
  SubtaskList list;
  try {
    for (const auto& entry : doc) {
      Subtask subtask;
      subtask.id = entry.at("id").get<int>();
      subtask.description = entry.at("description").get<std::string>();
      subtask.start_condition = entry.at("start_condition").get<std::string>();
      subtask.end_condition = entry.at("end_condition").get<std::string>();
      if (entry.contains("state")) {
        subtask.state = subtask_state_from_name(entry.at("state").get<std::string>());
      }
      list.subtasks.push_back(std::move(subtask));
    }
  } catch (const json::exception& e) {
    throw Error(Errc::kInvalidSubtaskList, e.what());
  }
  validate_subtask_list(list);
  return list;
}

}  // namespace agrinav
