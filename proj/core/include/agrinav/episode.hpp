#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "agrinav/pose.hpp"

namespace agrinav {

// ---------------------------------------------------------------------------
// Action space
// ---------------------------------------------------------------------------

enum class Action { kForward, kLeftRotate, kRightRotate, kStop };

// Wire tokens are upper case with a space, e.g. "LEFT ROTATE".
const char* action_token(Action action);

// Strict: accepts exactly the four wire tokens. Used for annotation files.
// Throws Error(kUnknownAction) otherwise.
Action action_from_token(std::string_view token);

// Lenient: case-insensitive, accepts '_' for ' ' and surrounding whitespace.
// Used for model replies. Returns nullopt on anything else.
std::optional<Action> action_from_token_lenient(std::string_view token);

// ---------------------------------------------------------------------------
// Annotations
// ---------------------------------------------------------------------------

struct ActionInterval {
  Action action = Action::kStop;
  double t_start = 0.0;  // seconds
  double t_end = 0.0;    // seconds, > t_start

  bool operator==(const ActionInterval&) const = default;
};

// Ground-truth action timeline of one episode. Valid annotations are
// non-empty, start at t=0, are contiguous without gaps or overlaps, and
// never carry the same action in two adjacent intervals (runs of one action
// are a single interval). A trailing non-STOP interval is tolerated: the end
// of the timeline acts as an implicit stop.
struct EpisodeAnnotation {
  std::vector<ActionInterval> intervals;

  bool operator==(const EpisodeAnnotation&) const = default;
};

// Throws Error with a category-specific code on every malformed input class.
void validate_annotation(const EpisodeAnnotation& annotation);

// Non-fatal findings, e.g. a last interval that is not STOP.
std::vector<std::string> annotation_warnings(const EpisodeAnnotation& annotation);

// Parses the JSON annotation document: an array of
// {"action": <token>, "time range": [t_start, t_end]} objects.
// "time_range" is accepted as a key alias.
EpisodeAnnotation parse_annotation(std::string_view document);

// Inverse of parse_annotation; emits the canonical "time range" key.
std::string serialize_annotation(const EpisodeAnnotation& annotation);

double episode_duration(const EpisodeAnnotation& annotation);

// ---------------------------------------------------------------------------
// Episode
// ---------------------------------------------------------------------------

enum class SceneClass { kFarm, kGreenhouse, kForest, kMountain, kGarden, kVillage };

inline constexpr int kSceneClassCount = 6;

const char* scene_name(SceneClass scene);
SceneClass scene_from_name(std::string_view name);  // throws Error(kInvalidScene)
std::vector<SceneClass> all_scene_classes();

struct InstructionText {
  std::string text;
  int word_count = 0;  // whitespace-token count, always > 0

  static InstructionText from(std::string text);  // throws on empty text

  bool operator==(const InstructionText&) const = default;
};

enum class FrameSourceKind { kDirectoryOfImages, kNull };

// Where the per-step camera frames come from. The null kind is valid:
// pixel-free policies (scripted oracle, random) never read frames.
struct FrameSourceRef {
  FrameSourceKind kind = FrameSourceKind::kNull;
  std::string uri;
  double nominal_fps = 14.0;

  bool operator==(const FrameSourceRef&) const = default;
};

// (subtask ordinal, boundary time in seconds); ordinals 1..N in order,
// times strictly increasing and <= episode duration. Synthetic episodes
// carry these so per-subtask completion can be judged against the
// demonstrated route; recorded real episodes may omit them.
using SubtaskBoundaries = std::vector<std::pair<int, double>>;

struct Episode {
  std::string id;
  SceneClass scene_class = SceneClass::kFarm;
  InstructionText instruction;
  EpisodeAnnotation annotation;
  FrameSourceRef frame_source;
  Pose goal_pose;  // derived: final pose of the dead-reckoned expert route
  SubtaskBoundaries subtask_boundaries;

  double duration() const { return episode_duration(annotation); }
};

void validate_boundaries(const SubtaskBoundaries& boundaries, double duration);

}  // namespace agrinav
