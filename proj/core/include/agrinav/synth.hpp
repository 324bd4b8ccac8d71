#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "agrinav/episode.hpp"
#include "agrinav/kinematics.hpp"

namespace agrinav {

enum class InstructionStyle { kConcise, kNoisy };

// Recipe for a deterministic synthetic benchmark. Everything an episode
// contains is a pure function of (spec, episode index).
struct GeneratorSpec {
  std::uint64_t seed = 0;
  int n_episodes = 0;
  std::map<SceneClass, double> scene_mix;         // empty = built-in default mix
  std::pair<int, int> subtask_count_range{2, 8};
  std::pair<double, double> segment_duration_range{6.0, 12.0};  // forward seconds
  InstructionStyle instruction_style = InstructionStyle::kConcise;
};

void validate_generator_spec(const GeneratorSpec& spec);
GeneratorSpec parse_generator_spec(std::string_view document);
std::string serialize_generator_spec(const GeneratorSpec& spec);

// Builds n_episodes synthetic episodes. Each subtask is an optional rotation
// followed by a straight run; interval times land on whole seconds so the
// default playback clock replays them exactly, and cumulative heading stays
// within +-45 degrees so goals end up several metres from the origin.
// Subtask boundaries sit at the end of each straight run. Instructions are
// composed from per-scene clause banks; the noisy style injects filler
// chatter between clauses.
std::vector<Episode> generate(const GeneratorSpec& spec,
                              const KinematicsConfig& config = KinematicsConfig{});

struct DatasetStats {
  int total_episodes = 0;
  std::map<SceneClass, int> episodes_per_scene;
  std::map<int, int> instruction_length_histogram;  // word count -> episodes
  double instruction_length_mean = 0.0;
  std::map<int, int> subtask_count_histogram;
  double subtask_count_mean = 0.0;
  std::vector<std::pair<std::string, int>> word_frequencies;  // sorted desc
};

// Exact counts and means over lowercased, punctuation-stripped tokens.
// subtask_counts runs parallel to episodes (the per-episode N).
DatasetStats compute_stats(const std::vector<Episode>& episodes,
                           const std::vector<int>& subtask_counts);

std::string render_stats(const DatasetStats& stats, bool csv);

}  // namespace agrinav
