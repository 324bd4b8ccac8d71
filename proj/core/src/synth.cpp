#include "agrinav/synth.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "agrinav/error.hpp"
#include "agrinav/text.hpp"
#include "json.hpp"

namespace agrinav {

using nlohmann::json;

namespace {

// splitmix64 stream; std distributions are implementation-defined, so all
// bounded draws are done by hand to keep generated datasets byte-identical
// across compilers.
class DetRng {
 public:
  explicit DetRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // inclusive bounds
  int uniform_int(int lo, int hi) {
    if (hi <= lo) return lo;
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next() % span);
  }

  double uniform_real(double lo, double hi) {
    const double unit = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + unit * (hi - lo);
  }

  bool coin() { return (next() & 1) != 0; }

  template <typename T>
  const T& pick(const std::vector<T>& options) {
    return options[static_cast<std::size_t>(uniform_int(0, static_cast<int>(options.size()) - 1))];
  }

 private:
  std::uint64_t state_;
};

std::map<SceneClass, double> default_scene_mix() {
  // proportions of a realistic agricultural corpus
  return {{SceneClass::kFarm, 372}, {SceneClass::kGreenhouse, 258}, {SceneClass::kForest, 384},
          {SceneClass::kMountain, 198}, {SceneClass::kGarden, 258}, {SceneClass::kVillage, 90}};
}

const std::vector<std::string>& landmarks_for(SceneClass scene) {
  static const std::map<SceneClass, std::vector<std::string>> kLandmarks = {
      {SceneClass::kFarm,
       {"the water tank", "the old tractor", "the chicken coop", "the hay bales",
        "the irrigation pump", "the barn door", "the grain silo", "the feed trough"}},
      {SceneClass::kGreenhouse,
       {"the tomato row", "the seedling bench", "the drip line valve", "the shade net",
        "the potting table", "the cucumber trellis", "the heater unit", "the sliding door"}},
      {SceneClass::kForest,
       {"the fallen log", "the big pine", "the moss rock", "the creek crossing",
        "the ranger post", "the berry bushes", "the wooden footbridge", "the trail fork"}},
      {SceneClass::kMountain,
       {"the stone cairn", "the terrace edge", "the steep switchback", "the water channel",
        "the lone cedar", "the rock slide", "the tea bushes", "the lookout rail"}},
      {SceneClass::kGarden,
       {"the rose bed", "the garden gate", "the stone fountain", "the compost bin",
        "the tool shed", "the gravel path end", "the pergola", "the herb patch"}},
      {SceneClass::kVillage,
       {"the well", "the red brick wall", "the grocery stall", "the bicycle rack",
        "the village gate", "the drying yard", "the persimmon tree", "the low fence"}},
  };
  return kLandmarks.at(scene);
}

const std::vector<std::string>& forward_phrases() {
  static const std::vector<std::string> kPhrases = {
      "go straight until you reach", "walk ahead to", "move forward past",
      "keep going until you get to", "head over to"};
  return kPhrases;
}

std::string turn_phrase(bool left, int seconds, DetRng& rng) {
  const std::vector<std::string> kShort = {"turn", "rotate"};
  std::string out = rng.pick(kShort) + (left ? " left" : " right");
  if (seconds >= 2) out += " all the way";
  return out;
}

const std::vector<std::string>& filler_phrases() {
  static const std::vector<std::string> kFillers = {
      "you know how it is,", "mind the mud there,", "like I do every morning,",
      "no need to hurry,", "the weather is nice today so", "watch out for the hose,",
      "my back hurts so", "as usual,"};
  return kFillers;
}

const std::vector<std::string>& connectives() {
  static const std::vector<std::string> kConnectives = {"then", "after that", "next"};
  return kConnectives;
}

struct MotionSegment {
  bool has_rotation = false;
  bool left = false;
  int rotation_seconds = 0;
  int forward_seconds = 0;
};

// Cumulative heading stays within +-45 deg of the start (headings move in
// 30 deg steps at the default rotation rate), so straight runs always make
// real progress away from the origin.
MotionSegment draw_segment(DetRng& rng, int& heading_deg, int forward_lo, int forward_hi,
                           bool rotation_required) {
  MotionSegment segment;
  segment.has_rotation = rotation_required || rng.coin();
  if (segment.has_rotation) {
    std::vector<std::pair<bool, int>> options;  // (left, seconds)
    for (bool left : {true, false}) {
      for (int seconds : {1, 2}) {
        const int delta = (left ? 1 : -1) * 30 * seconds;
        if (std::abs(heading_deg + delta) <= 45) options.emplace_back(left, seconds);
      }
    }
    const auto& [left, seconds] = rng.pick(options);
    segment.left = left;
    segment.rotation_seconds = seconds;
    heading_deg += (left ? 1 : -1) * 30 * seconds;
  }
  segment.forward_seconds = rng.uniform_int(forward_lo, forward_hi);
  return segment;
}

std::string capitalize(std::string text) {
  if (!text.empty()) text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
  return text;
}

}  // namespace

void validate_generator_spec(const GeneratorSpec& spec) {
  if (spec.n_episodes <= 0) {
    throw Error(Errc::kInvalidConfig, "n_episodes must be > 0");
  }
  for (const auto& [scene, weight] : spec.scene_mix) {
    if (!(weight > 0.0)) {
      throw Error(Errc::kInvalidConfig,
                  std::string("scene weight for ") + scene_name(scene) + " must be > 0");
    }
  }
  const auto& [count_lo, count_hi] = spec.subtask_count_range;
  if (count_lo < 1 || count_hi < count_lo) {
    throw Error(Errc::kInvalidConfig, "subtask_count_range must satisfy 1 <= min <= max");
  }
  const auto& [dur_lo, dur_hi] = spec.segment_duration_range;
  if (!(dur_lo > 0.0) || dur_hi < dur_lo) {
    throw Error(Errc::kInvalidConfig, "segment_duration_range must satisfy 0 < min <= max");
  }
}

std::vector<Episode> generate(const GeneratorSpec& spec, const KinematicsConfig& config) {
  validate_generator_spec(spec);
  validate_kinematics_config(config);
  const auto scene_mix = spec.scene_mix.empty() ? default_scene_mix() : spec.scene_mix;
  double weight_total = 0.0;
  for (const auto& [scene, weight] : scene_mix) weight_total += weight;

  // forward runs land on whole seconds so the default playback clock hits
  // every interval boundary exactly
  int forward_lo = static_cast<int>(std::ceil(spec.segment_duration_range.first));
  int forward_hi = static_cast<int>(std::floor(spec.segment_duration_range.second));
  forward_lo = std::max(forward_lo, 1);
  forward_hi = std::max(forward_hi, forward_lo);

  std::vector<Episode> episodes;
  episodes.reserve(static_cast<std::size_t>(spec.n_episodes));
  for (int index = 0; index < spec.n_episodes; ++index) {
    // seed-space partition: one independent stream per episode
    DetRng rng(fnv1a64("episode") ^ (spec.seed * 0x9e3779b97f4a7c15ULL) ^
               static_cast<std::uint64_t>(index));

    Episode episode;
    char id[64];
    std::snprintf(id, sizeof(id), "syn-s%llu-%04d",
                  static_cast<unsigned long long>(spec.seed), index);
    episode.id = id;

    double roll = rng.uniform_real(0.0, weight_total);
    episode.scene_class = scene_mix.rbegin()->first;
    for (const auto& [scene, weight] : scene_mix) {
      if (roll < weight) {
        episode.scene_class = scene;
        break;
      }
      roll -= weight;
    }

    const int subtask_count =
        rng.uniform_int(spec.subtask_count_range.first, spec.subtask_count_range.second);

    int heading_deg = 0;
    long t_ms = 0;
    std::vector<MotionSegment> segments;
    for (int i = 0; i < subtask_count; ++i) {
      MotionSegment segment = draw_segment(rng, heading_deg, forward_lo, forward_hi,
                                           /*rotation_required=*/i > 0);
      if (segment.has_rotation) {
        episode.annotation.intervals.push_back(
            {segment.left ? Action::kLeftRotate : Action::kRightRotate,
             static_cast<double>(t_ms) / 1000.0,
             static_cast<double>(t_ms + segment.rotation_seconds * 1000) / 1000.0});
        t_ms += segment.rotation_seconds * 1000;
      }
      episode.annotation.intervals.push_back({Action::kForward,
                                              static_cast<double>(t_ms) / 1000.0,
                                              static_cast<double>(t_ms + segment.forward_seconds * 1000) / 1000.0});
      t_ms += segment.forward_seconds * 1000;
      episode.subtask_boundaries.emplace_back(i + 1, static_cast<double>(t_ms) / 1000.0);
      segments.push_back(segment);
    }
    episode.annotation.intervals.push_back({Action::kStop, static_cast<double>(t_ms) / 1000.0,
                                            static_cast<double>(t_ms + 1000) / 1000.0});

    // landmark per subtask, drawn without repetition
    std::vector<std::string> landmarks = landmarks_for(episode.scene_class);
    std::ostringstream text;
    const bool noisy = spec.instruction_style == InstructionStyle::kNoisy;
    for (int i = 0; i < subtask_count; ++i) {
      const MotionSegment& segment = segments[static_cast<std::size_t>(i)];
      const std::size_t pick =
          static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(landmarks.size()) - 1));
      const std::string landmark = landmarks[pick];
      if (landmarks.size() > 1) landmarks.erase(landmarks.begin() + static_cast<long>(pick));

      std::string clause;
      if (segment.has_rotation) {
        clause += turn_phrase(segment.left, segment.rotation_seconds, rng) + " and ";
      }
      clause += rng.pick(forward_phrases()) + " " + landmark;

      if (i == 0) {
        if (noisy) text << capitalize(rng.pick(filler_phrases())) << " ";
        text << (noisy ? clause : capitalize(clause));
      } else {
        text << (rng.coin() ? ", " : ". ");
        std::string connective = rng.pick(connectives());
        if (noisy && rng.coin()) connective += " " + rng.pick(filler_phrases());
        text << connective << " " << clause;
      }
      if (i + 1 == subtask_count) text << " and stop there.";
    }
    episode.instruction = InstructionText::from(text.str());
    episode.frame_source = FrameSourceRef{FrameSourceKind::kNull, "", 14.0};
    episode.goal_pose = ground_truth_trajectory(episode.annotation, config).back().pose;

    validate_annotation(episode.annotation);
    validate_boundaries(episode.subtask_boundaries, episode.duration());
    episodes.push_back(std::move(episode));
  }
  return episodes;
}

GeneratorSpec parse_generator_spec(std::string_view document) {
  json doc = json::parse(document, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(Errc::kInvalidConfig, "generator spec must be a JSON object");
  }
  GeneratorSpec spec;
  try {
    if (doc.contains("seed")) spec.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("n_episodes")) spec.n_episodes = doc.at("n_episodes").get<int>();
    if (doc.contains("scene_mix")) {
      for (const auto& [name, weight] : doc.at("scene_mix").items()) {
        spec.scene_mix[scene_from_name(name)] = weight.get<double>();
      }
    }
    if (doc.contains("subtask_count_range")) {
      spec.subtask_count_range = {doc.at("subtask_count_range").at(0).get<int>(),
                                  doc.at("subtask_count_range").at(1).get<int>()};
    }
    if (doc.contains("segment_duration_range")) {
      spec.segment_duration_range = {doc.at("segment_duration_range").at(0).get<double>(),
                                     doc.at("segment_duration_range").at(1).get<double>()};
    }
    if (doc.contains("instruction_style")) {
      const std::string style = doc.at("instruction_style").get<std::string>();
      if (style == "concise") spec.instruction_style = InstructionStyle::kConcise;
      else if (style == "noisy") spec.instruction_style = InstructionStyle::kNoisy;
      else throw Error(Errc::kInvalidConfig, "instruction_style must be concise or noisy");
    }
  } catch (const json::exception& e) {
    throw Error(Errc::kInvalidConfig, std::string("generator spec: ") + e.what());
  }
  validate_generator_spec(spec);
  return spec;
}

std::string serialize_generator_spec(const GeneratorSpec& spec) {
  json mix = json::object();
  for (const auto& [scene, weight] : spec.scene_mix) mix[scene_name(scene)] = weight;
  json doc = {
      {"seed", spec.seed},
      {"n_episodes", spec.n_episodes},
      {"scene_mix", mix},
      {"subtask_count_range", {spec.subtask_count_range.first, spec.subtask_count_range.second}},
      {"segment_duration_range",
       {spec.segment_duration_range.first, spec.segment_duration_range.second}},
      {"instruction_style",
       spec.instruction_style == InstructionStyle::kNoisy ? "noisy" : "concise"}};
  return doc.dump(2);
}

DatasetStats compute_stats(const std::vector<Episode>& episodes,
                           const std::vector<int>& subtask_counts) {
  if (episodes.empty()) {
    throw Error(Errc::kInvalidManifest, "cannot compute statistics of an empty dataset");
  }
  DatasetStats stats;
  stats.total_episodes = static_cast<int>(episodes.size());
  double length_sum = 0.0;
  std::map<std::string, int> frequency;
  for (const auto& episode : episodes) {
    stats.episodes_per_scene[episode.scene_class] += 1;
    stats.instruction_length_histogram[episode.instruction.word_count] += 1;
    length_sum += episode.instruction.word_count;
    for (const auto& raw : split_whitespace(episode.instruction.text)) {
      const std::string token = normalize_token(raw);
      if (!token.empty()) frequency[token] += 1;
    }
  }
  stats.instruction_length_mean = length_sum / static_cast<double>(episodes.size());

  double count_sum = 0.0;
  for (int count : subtask_counts) {
    stats.subtask_count_histogram[count] += 1;
    count_sum += count;
  }
  if (!subtask_counts.empty()) {
    stats.subtask_count_mean = count_sum / static_cast<double>(subtask_counts.size());
  }

  stats.word_frequencies.assign(frequency.begin(), frequency.end());
  std::sort(stats.word_frequencies.begin(), stats.word_frequencies.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
  return stats;
}

std::string render_stats(const DatasetStats& stats, bool csv) {
  std::ostringstream out;
  char line[160];
  if (csv) {
    out << "metric,key,value\n";
    out << "episodes,total," << stats.total_episodes << "\n";
    for (const auto& [scene, count] : stats.episodes_per_scene) {
      out << "episodes," << scene_name(scene) << "," << count << "\n";
    }
    std::snprintf(line, sizeof(line), "instruction_length,mean,%.6g",
                  stats.instruction_length_mean);
    out << line << "\n";
    for (const auto& [length, count] : stats.instruction_length_histogram) {
      out << "instruction_length," << length << "," << count << "\n";
    }
    std::snprintf(line, sizeof(line), "subtask_count,mean,%.6g", stats.subtask_count_mean);
    out << line << "\n";
    for (const auto& [value, count] : stats.subtask_count_histogram) {
      out << "subtask_count," << value << "," << count << "\n";
    }
    for (const auto& [word, count] : stats.word_frequencies) {
      out << "word," << word << "," << count << "\n";
    }
    return out.str();
  }

  out << "episodes: " << stats.total_episodes << "\n";
  for (const auto& [scene, count] : stats.episodes_per_scene) {
    out << "  " << scene_name(scene) << ": " << count << "\n";
  }
  std::snprintf(line, sizeof(line), "instruction length: mean %.1f (min %d, max %d)",
                stats.instruction_length_mean,
                stats.instruction_length_histogram.begin()->first,
                stats.instruction_length_histogram.rbegin()->first);
  out << line << "\n";
  std::snprintf(line, sizeof(line), "subtask count: mean %.2f", stats.subtask_count_mean);
  out << line << "\n";
  for (const auto& [value, count] : stats.subtask_count_histogram) {
    out << "  " << value << " subtasks: " << count << "\n";
  }
  out << "top words:";
  const std::size_t top = std::min<std::size_t>(stats.word_frequencies.size(), 15);
  for (std::size_t i = 0; i < top; ++i) {
    out << " " << stats.word_frequencies[i].first << "(" << stats.word_frequencies[i].second
        << ")";
  }
  out << "\n";
  return out.str();
}

}  // namespace agrinav
