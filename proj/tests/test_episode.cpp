#include "agrinav/episode.hpp"

#include <random>

#include "agrinav/error.hpp"
#include "agrinav/synth.hpp"
#include "doctest.h"

using namespace agrinav;

TEST_CASE("annotation parsing accepts the documented example") {
  const char* doc = R"([{"action":"FORWARD","time range":[0,4.5]},
                        {"action":"STOP","time range":[4.5,5.0]}])";
  EpisodeAnnotation annotation = parse_annotation(doc);
  REQUIRE(annotation.intervals.size() == 2);
  CHECK(annotation.intervals[0].action == Action::kForward);
  CHECK(annotation.intervals[0].t_start == 0.0);
  CHECK(annotation.intervals[0].t_end == 4.5);
  CHECK(episode_duration(annotation) == 5.0);
}

TEST_CASE("annotation parsing accepts the time_range key alias") {
  const char* doc = R"([{"action":"FORWARD","time_range":[0,1]},
                        {"action":"STOP","time_range":[1,2]}])";
  CHECK(parse_annotation(doc).intervals.size() == 2);
}

TEST_CASE("malformed annotation classes map to distinct error categories") {
  auto code_of = [](const char* doc) {
    try {
      parse_annotation(doc);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::kUsage;  // sentinel: no error thrown
  };

  CHECK(code_of("not json at all") == Errc::kMalformedDocument);
  CHECK(code_of(R"({"action":"STOP"})") == Errc::kMalformedDocument);
  CHECK(code_of("[]") == Errc::kEmptyAnnotation);
  CHECK(code_of(R"([{"action":"JUMP","time range":[0,1]}])") == Errc::kUnknownAction);
  CHECK(code_of(R"([{"action":"forward","time range":[0,1]}])") == Errc::kUnknownAction);
  CHECK(code_of(R"([{"action":"LEFT_ROTATE","time range":[0,1]}])") == Errc::kUnknownAction);
  CHECK(code_of(R"([{"action":"FORWARD","time range":[0,4]},
                    {"action":"STOP","time range":[3.5,6]}])") == Errc::kIntervalOverlap);
  CHECK(code_of(R"([{"action":"FORWARD","time range":[0,4]},
                    {"action":"STOP","time range":[4.5,6]}])") == Errc::kIntervalGap);
  CHECK(code_of(R"([{"action":"FORWARD","time range":[1,2]},
                    {"action":"STOP","time range":[2,3]}])") == Errc::kIntervalGap);
  CHECK(code_of(R"([{"action":"FORWARD","time range":[2,2]}])") == Errc::kIntervalOrder);
  CHECK(code_of(R"([{"action":"FORWARD","time range":[0,2]},
                    {"action":"FORWARD","time range":[2,3]}])") ==
        Errc::kAdjacentDuplicateAction);
}

TEST_CASE("trailing non-STOP interval is a warning, not an error") {
  EpisodeAnnotation annotation =
      parse_annotation(R"([{"action":"FORWARD","time range":[0,3]}])");
  CHECK(episode_duration(annotation) == 3.0);
  CHECK(annotation_warnings(annotation).size() == 1);

  EpisodeAnnotation stopped = parse_annotation(
      R"([{"action":"FORWARD","time range":[0,3]},{"action":"STOP","time range":[3,4]}])");
  CHECK(annotation_warnings(stopped).empty());
}

TEST_CASE("serialize/parse round trip preserves every interval") {
  // property over generated annotations
  GeneratorSpec spec;
  spec.seed = 7;
  spec.n_episodes = 50;
  auto episodes = generate(spec);
  for (const auto& episode : episodes) {
    EpisodeAnnotation reparsed = parse_annotation(serialize_annotation(episode.annotation));
    CHECK(reparsed == episode.annotation);
    // contiguity: interval lengths sum to the duration
    double total = 0.0;
    for (const auto& interval : reparsed.intervals) total += interval.t_end - interval.t_start;
    CHECK(total == doctest::Approx(episode_duration(reparsed)).epsilon(1e-12));
  }
}

TEST_CASE("action tokens are a closed vocabulary") {
  CHECK(action_from_token("FORWARD") == Action::kForward);
  CHECK(action_from_token("LEFT ROTATE") == Action::kLeftRotate);
  CHECK(action_from_token("RIGHT ROTATE") == Action::kRightRotate);
  CHECK(action_from_token("STOP") == Action::kStop);
  CHECK_THROWS_AS(action_from_token("WAIT"), Error);
  CHECK_THROWS_AS(action_from_token(""), Error);

  // the lenient reader used for model replies folds case and underscores
  CHECK(action_from_token_lenient(" left rotate ") == Action::kLeftRotate);
  CHECK(action_from_token_lenient("LEFT_ROTATE") == Action::kLeftRotate);
  CHECK(action_from_token_lenient("Stop") == Action::kStop);
  CHECK_FALSE(action_from_token_lenient("JUMP").has_value());
}

TEST_CASE("scene classes are exactly the six known ones") {
  CHECK(scene_from_name("farm") == SceneClass::kFarm);
  CHECK(scene_from_name("village") == SceneClass::kVillage);
  CHECK_THROWS_AS(scene_from_name("ocean"), Error);
  CHECK(all_scene_classes().size() == 6);
}

TEST_CASE("instruction text counts whitespace tokens") {
  InstructionText text = InstructionText::from("Go forward, then stop at the tree.");
  CHECK(text.word_count == 7);
  CHECK_THROWS_AS(InstructionText::from(""), Error);
  CHECK_THROWS_AS(InstructionText::from("   "), Error);
}

TEST_CASE("subtask boundaries must be ordered and inside the episode") {
  CHECK_NOTHROW(validate_boundaries({{1, 3.0}, {2, 6.0}}, 8.0));
  CHECK_THROWS_AS(validate_boundaries({{1, 3.0}, {2, 2.0}}, 8.0), Error);
  CHECK_THROWS_AS(validate_boundaries({{1, 3.0}, {2, 9.0}}, 8.0), Error);
  CHECK_THROWS_AS(validate_boundaries({{2, 3.0}}, 8.0), Error);
}
