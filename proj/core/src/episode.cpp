#include "agrinav/episode.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "agrinav/error.hpp"
#include "agrinav/text.hpp"
#include "json.hpp"

namespace agrinav {

using nlohmann::json;

const char* action_token(Action action) {
  switch (action) {
    case Action::kForward: return "FORWARD";
    case Action::kLeftRotate: return "LEFT ROTATE";
    case Action::kRightRotate: return "RIGHT ROTATE";
    case Action::kStop: return "STOP";
  }
  return "STOP";
}

Action action_from_token(std::string_view token) {
  if (token == "FORWARD") return Action::kForward;
  if (token == "LEFT ROTATE") return Action::kLeftRotate;
  if (token == "RIGHT ROTATE") return Action::kRightRotate;
  if (token == "STOP") return Action::kStop;
  throw Error(Errc::kUnknownAction, "\"" + std::string(token) + "\" is not in the action space");
}

std::optional<Action> action_from_token_lenient(std::string_view token) {
  std::string folded;
  folded.reserve(token.size());
  for (char c : token) {
    if (c == '_') c = ' ';
    folded.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  // trim and collapse inner runs of spaces
  std::istringstream in(folded);
  std::string word, compact;
  while (in >> word) {
    if (!compact.empty()) compact.push_back(' ');
    compact += word;
  }
  if (compact == "FORWARD") return Action::kForward;
  if (compact == "LEFT ROTATE") return Action::kLeftRotate;
  if (compact == "RIGHT ROTATE") return Action::kRightRotate;
  if (compact == "STOP") return Action::kStop;
  return std::nullopt;
}

void validate_annotation(const EpisodeAnnotation& annotation) {
  const auto& iv = annotation.intervals;
  if (iv.empty()) throw Error(Errc::kEmptyAnnotation, "annotation has no intervals");
  if (iv.front().t_start != 0.0) {
    throw Error(Errc::kIntervalGap, "first interval must start at time 0");
  }
  for (std::size_t k = 0; k < iv.size(); ++k) {
    if (!(iv[k].t_start < iv[k].t_end)) {
      throw Error(Errc::kIntervalOrder,
                  "interval " + std::to_string(k) + " has t_start >= t_end");
    }
    if (k == 0) continue;
    if (iv[k].t_start < iv[k - 1].t_end) {
      throw Error(Errc::kIntervalOverlap,
                  "interval " + std::to_string(k) + " overlaps the previous one");
    }
    if (iv[k].t_start > iv[k - 1].t_end) {
      throw Error(Errc::kIntervalGap,
                  "gap before interval " + std::to_string(k));
    }
    if (iv[k].action == iv[k - 1].action) {
      throw Error(Errc::kAdjacentDuplicateAction,
                  "intervals " + std::to_string(k - 1) + " and " + std::to_string(k) +
                      " carry the same action and should be one interval");
    }
  }
}

std::vector<std::string> annotation_warnings(const EpisodeAnnotation& annotation) {
  std::vector<std::string> warnings;
  if (!annotation.intervals.empty() && annotation.intervals.back().action != Action::kStop) {
    warnings.push_back("last interval is " +
                       std::string(action_token(annotation.intervals.back().action)) +
                       "; end of timeline acts as implicit stop");
  }
  return warnings;
}

EpisodeAnnotation parse_annotation(std::string_view document) {
  json doc = json::parse(document, nullptr, false);
  if (doc.is_discarded() || !doc.is_array()) {
    throw Error(Errc::kMalformedDocument, "annotation must be a JSON array");
  }
  EpisodeAnnotation annotation;
  annotation.intervals.reserve(doc.size());
  for (const auto& entry : doc) {
    if (!entry.is_object() || !entry.contains("action")) {
      throw Error(Errc::kMalformedDocument, "interval entry missing \"action\"");
    }
    const json* range = nullptr;
    if (entry.contains("time range")) range = &entry.at("time range");
    else if (entry.contains("time_range")) range = &entry.at("time_range");
    if (range == nullptr || !range->is_array() || range->size() != 2 ||
        !(*range)[0].is_number() || !(*range)[1].is_number() ||
        !entry.at("action").is_string()) {
      throw Error(Errc::kMalformedDocument, "interval entry needs \"action\" and a two-number \"time range\"");
    }
    ActionInterval interval;
    interval.action = action_from_token(entry.at("action").get<std::string>());
    interval.t_start = (*range)[0].get<double>();
    interval.t_end = (*range)[1].get<double>();
    if (interval.t_start < 0.0) {
      throw Error(Errc::kIntervalOrder, "negative interval start");
    }
    annotation.intervals.push_back(interval);
  }
  validate_annotation(annotation);
  return annotation;
}

std::string serialize_annotation(const EpisodeAnnotation& annotation) {
  json doc = json::array();
  for (const auto& interval : annotation.intervals) {
    doc.push_back({{"action", action_token(interval.action)},
                   {"time range", json::array({interval.t_start, interval.t_end})}});
  }
  return doc.dump(2);
}

double episode_duration(const EpisodeAnnotation& annotation) {
  validate_annotation(annotation);
  return annotation.intervals.back().t_end;
}

const char* scene_name(SceneClass scene) {
  switch (scene) {
    case SceneClass::kFarm: return "farm";
    case SceneClass::kGreenhouse: return "greenhouse";
    case SceneClass::kForest: return "forest";
    case SceneClass::kMountain: return "mountain";
    case SceneClass::kGarden: return "garden";
    case SceneClass::kVillage: return "village";
  }
  return "farm";
}

SceneClass scene_from_name(std::string_view name) {
  for (SceneClass scene : all_scene_classes()) {
    if (name == scene_name(scene)) return scene;
  }
  throw Error(Errc::kInvalidScene, "\"" + std::string(name) + "\" is not a known scene class");
}

std::vector<SceneClass> all_scene_classes() {
  return {SceneClass::kFarm,     SceneClass::kGreenhouse, SceneClass::kForest,
          SceneClass::kMountain, SceneClass::kGarden,     SceneClass::kVillage};
}

InstructionText InstructionText::from(std::string text) {
  int count = static_cast<int>(split_whitespace(text).size());
  if (count == 0) {
    throw Error(Errc::kInvalidManifest, "instruction text is empty");
  }
  return InstructionText{std::move(text), count};
}

void validate_boundaries(const SubtaskBoundaries& boundaries, double duration) {
  double previous = -1.0;
  int expected_ordinal = 1;
  for (const auto& [ordinal, time] : boundaries) {
    if (ordinal != expected_ordinal) {
      throw Error(Errc::kInvalidManifest, "subtask boundary ordinals must be 1..N in order");
    }
    if (!(time > previous)) {
      throw Error(Errc::kInvalidManifest, "subtask boundary times must be strictly increasing");
    }
    if (time > duration) {
      throw Error(Errc::kInvalidManifest, "subtask boundary time exceeds episode duration");
    }
    previous = time;
    ++expected_ordinal;
  }
}

}  // namespace agrinav
