#include "agrinav/decompose.hpp"

#include "agrinav/error.hpp"
#include "doctest.h"

using namespace agrinav;

namespace {

const char* kTwoStepReply = R"([
  {"id": 1, "description": "go forward along the path", "start_condition": "at the start",
   "end_condition": "near the tree"},
  {"id": 2, "description": "stop at the tree", "start_condition": "near the tree",
   "end_condition": "stopped at the tree"}
])";

const char* kOneStepReply =
    R"([{"id":1,"description":"walk to the door","start_condition":"at the start","end_condition":"at the door"}])";

DecomposeOptions no_particle() {
  DecomposeOptions options;
  options.check_particle = false;
  return options;
}

}  // namespace

TEST_CASE("decompose parses the structured reply and starts everything pending") {
  auto client = canned_backend({kTwoStepReply});
  auto result = decompose(InstructionText::from("Go forward and stop at the tree."), *client,
                          default_decompose_template(), no_particle());
  REQUIRE(result.list.size() == 2);
  for (const auto& subtask : result.list.subtasks) {
    CHECK(subtask.state == SubtaskState::kPending);
  }
  CHECK(result.reports.size() == 2);  // synonymity + connection
  for (const auto& report : result.reports) {
    CHECK(report.verdict == Verdict::kPass);
  }
}

TEST_CASE("decompose keeps single-clause instructions as one subtask") {
  auto client = canned_backend({kOneStepReply});
  auto result = decompose(InstructionText::from("Walk to the door."), *client,
                          default_decompose_template(), no_particle());
  REQUIRE(result.list.size() == 1);
  CHECK(result.list.at(1).state == SubtaskState::kPending);
}

TEST_CASE("decompose survives a bad first reply via the repair retry") {
  auto client = canned_backend({"sorry, here you go:", kOneStepReply});
  auto result = decompose(InstructionText::from("Walk to the door."), *client,
                          default_decompose_template(), no_particle());
  CHECK(result.list.size() == 1);
  auto canned = std::dynamic_pointer_cast<CannedClient>(client);
  CHECK(canned->call_count() == 2);
  // the repair request repeats the format contract
  CHECK(canned->requests()[1].user_text.find("ONLY the required JSON") != std::string::npos);
}

TEST_CASE("decompose gives up after the repair retry") {
  auto client = canned_backend({"nonsense", "still nonsense"});
  try {
    decompose(InstructionText::from("Walk to the door."), *client,
              default_decompose_template(), no_particle());
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kUnparseableReply);
    CHECK(std::string(e.what()).find("still nonsense") != std::string::npos);  // raw reply
  }
}

TEST_CASE("decompose accepts fenced JSON") {
  auto client = canned_backend({std::string("```json\n") + kOneStepReply + "\n```"});
  CHECK(decompose(InstructionText::from("Walk to the door."), *client,
                  default_decompose_template(), no_particle())
            .list.size() == 1);
}

TEST_CASE("decomposition with broken ids is rejected, not repaired silently") {
  const char* bad_ids =
      R"([{"id":5,"description":"d","start_condition":"s","end_condition":"e"}])";
  auto client = canned_backend({bad_ids, bad_ids});
  CHECK_THROWS_AS(decompose(InstructionText::from("x y"), *client,
                            default_decompose_template(), no_particle()),
                  Error);
}

TEST_CASE("particle validator re-decomposes each subtask") {
  SUBCASE("atomic subtasks pass") {
    auto client = canned_backend({kTwoStepReply, kOneStepReply, kOneStepReply});
    auto result = decompose(InstructionText::from("Go forward and stop at the tree."), *client,
                            default_decompose_template());
    REQUIRE(result.reports.size() == 3);
    const auto& particle = result.reports.back();
    CHECK(particle.principle == "particle");
    CHECK(particle.verdict == Verdict::kPass);
    CHECK(particle.score == doctest::Approx(1.0));
  }
  SUBCASE("splittable subtasks are flagged") {
    auto client = canned_backend({kOneStepReply, kTwoStepReply});
    SubtaskList list;
    list.subtasks.push_back(
        Subtask{1, "go to the shed then enter it", "start", "inside", SubtaskState::kPending});
    // consume the first canned entry to align the script
    auto first = validate_particle(list, *client, default_decompose_template());
    CHECK(first.verdict == Verdict::kPass);
    auto flagged = validate_particle(list, *client, default_decompose_template());
    CHECK(flagged.verdict == Verdict::kFlagged);
    CHECK(flagged.violator_ids == std::vector<int>{1});
  }
  SUBCASE("backend failure is inconclusive, never fatal") {
    auto client = canned_backend({"garbage", "garbage"});
    SubtaskList list;
    list.subtasks.push_back(Subtask{1, "turn left", "s", "e", SubtaskState::kPending});
    auto report = validate_particle(list, *client, default_decompose_template());
    CHECK(report.verdict == Verdict::kInconclusive);
  }
}

TEST_CASE("strict mode turns flagged principles into errors") {
  // end/start conditions share no tokens -> connection flags
  const char* disconnected = R"([
    {"id":1,"description":"go to the gate","start_condition":"at the start","end_condition":"facing the gate"},
    {"id":2,"description":"stop by the pond","start_condition":"beside the pond","end_condition":"stopped"}
  ])";
  auto strict_options = no_particle();
  strict_options.strict = true;

  auto client = canned_backend({disconnected});
  CHECK_THROWS_AS(decompose(InstructionText::from("go to the gate and stop by the pond"),
                            *client, default_decompose_template(), strict_options),
                  Error);

  auto lenient = canned_backend({disconnected});
  auto result = decompose(InstructionText::from("go to the gate and stop by the pond"),
                          *lenient, default_decompose_template(), no_particle());
  bool connection_flagged = false;
  for (const auto& report : result.reports) {
    if (report.principle == "connection") connection_flagged = report.verdict == Verdict::kFlagged;
  }
  CHECK(connection_flagged);
}

TEST_CASE("single subtask wrap carries the whole instruction") {
  auto list = single_subtask_list(InstructionText::from("Cross the field and stop."));
  REQUIRE(list.size() == 1);
  CHECK(list.at(1).description == "Cross the field and stop.");
  CHECK(list.at(1).state == SubtaskState::kPending);
  CHECK_NOTHROW(validate_subtask_list(list));
}
