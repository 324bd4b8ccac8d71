#include "agrinav/subtask.hpp"

#include <random>

#include "agrinav/decompose.hpp"
#include "agrinav/error.hpp"
#include "doctest.h"

using namespace agrinav;

namespace {

SubtaskList make_list(std::initializer_list<SubtaskState> states) {
  SubtaskList list;
  int id = 1;
  for (SubtaskState state : states) {
    list.subtasks.push_back(Subtask{id, "step " + std::to_string(id),
                                    "after step " + std::to_string(id - 1),
                                    "step " + std::to_string(id) + " finished", state});
    ++id;
  }
  return list;
}

}  // namespace

TEST_CASE("transitions follow the completion order") {
  SUBCASE("starting the first pending subtask") {
    auto list = apply_transition(make_list({SubtaskState::kPending, SubtaskState::kPending}),
                                 StateTransition::begin(1));
    CHECK(list.at(1).state == SubtaskState::kDoing);
    CHECK(list.at(2).state == SubtaskState::kPending);
  }
  SUBCASE("starting subtask 2 while 1 is doing is illegal") {
    auto list = make_list({SubtaskState::kDoing, SubtaskState::kPending});
    CHECK_FALSE(transition_legal(list, StateTransition::begin(2)));
    CHECK_THROWS_AS(apply_transition(list, StateTransition::begin(2)), Error);
    CHECK(list.at(1).state == SubtaskState::kDoing);  // untouched
  }
  SUBCASE("completing the doing subtask") {
    auto list = apply_transition(make_list({SubtaskState::kDone, SubtaskState::kDoing}),
                                 StateTransition::complete(2));
    CHECK(list.at(2).state == SubtaskState::kDone);
  }
  SUBCASE("completing a pending subtask is illegal") {
    auto list = make_list({SubtaskState::kDone, SubtaskState::kPending});
    CHECK_FALSE(transition_legal(list, StateTransition::complete(2)));
  }
  SUBCASE("none is the identity") {
    auto list = make_list({SubtaskState::kDoing, SubtaskState::kPending});
    auto same = apply_transition(list, StateTransition::none());
    CHECK(same.at(1).state == SubtaskState::kDoing);
  }
  SUBCASE("out-of-range ids are illegal") {
    auto list = make_list({SubtaskState::kPending});
    CHECK_FALSE(transition_legal(list, StateTransition::begin(0)));
    CHECK_FALSE(transition_legal(list, StateTransition::begin(2)));
  }
}

TEST_CASE("focus subtask follows doing-first then lowest pending") {
  CHECK(focus_subtask(make_list({SubtaskState::kDone, SubtaskState::kDoing,
                                 SubtaskState::kPending})) == 2);
  CHECK(focus_subtask(make_list({SubtaskState::kDone, SubtaskState::kPending,
                                 SubtaskState::kPending})) == 2);
  CHECK_FALSE(focus_subtask(make_list({SubtaskState::kDone, SubtaskState::kDone})).has_value());
  CHECK(focus_subtask(make_list({SubtaskState::kPending})) == 1);
}

TEST_CASE("random transition sequences preserve the done-prefix pattern") {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 500; ++round) {
    const int size = 1 + static_cast<int>(rng() % 8);
    SubtaskList list = make_list({});
    for (int i = 1; i <= size; ++i) {
      list.subtasks.push_back(Subtask{i, "d", "s", "e", SubtaskState::kPending});
    }
    int done_count = 0;
    for (int step = 0; step < 30; ++step) {
      const int id = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(size));
      const StateTransition transition =
          (rng() & 1) ? StateTransition::begin(id) : StateTransition::complete(id);
      const bool legal = transition_legal(list, transition);
      if (legal) {
        list = apply_transition(list, transition);
        if (transition.to() == SubtaskState::kDone) ++done_count;
      } else {
        CHECK_THROWS_AS(apply_transition(list, transition), Error);
      }
      CHECK(states_well_formed(list));
      // monotonicity: completed subtasks never un-complete
      int done_now = 0;
      for (const auto& subtask : list.subtasks) {
        if (subtask.state == SubtaskState::kDone) ++done_now;
      }
      CHECK(done_now == done_count);
    }
  }
}

TEST_CASE("structural validation rejects broken lists") {
  CHECK_THROWS_AS(validate_subtask_list(SubtaskList{}), Error);

  SubtaskList wrong_ids = make_list({SubtaskState::kPending, SubtaskState::kPending});
  wrong_ids.subtasks[1].id = 3;
  CHECK_THROWS_AS(validate_subtask_list(wrong_ids), Error);

  SubtaskList empty_field = make_list({SubtaskState::kPending});
  empty_field.subtasks[0].end_condition.clear();
  CHECK_THROWS_AS(validate_subtask_list(empty_field), Error);

  SubtaskList two_doing = make_list({SubtaskState::kDoing, SubtaskState::kDoing});
  CHECK_FALSE(states_well_formed(two_doing));
  CHECK_THROWS_AS(validate_subtask_list(two_doing), Error);

  SubtaskList done_after_pending = make_list({SubtaskState::kPending, SubtaskState::kDone});
  CHECK_FALSE(states_well_formed(done_after_pending));
}

TEST_CASE("subtask list serialization round trips") {
  auto list = make_list({SubtaskState::kDone, SubtaskState::kDoing, SubtaskState::kPending});
  SubtaskList reparsed = parse_subtask_list(serialize_subtask_list(list));
  REQUIRE(reparsed.size() == 3);
  for (int i = 1; i <= 3; ++i) {
    CHECK(reparsed.at(i).state == list.at(i).state);
    CHECK(reparsed.at(i).description == list.at(i).description);
  }
  CHECK_THROWS_AS(parse_subtask_list("{}"), Error);
}

TEST_CASE("synonymity coverage is content-token overlap") {
  SUBCASE("full overlap passes") {
    SubtaskList list = make_list({SubtaskState::kPending, SubtaskState::kPending});
    list.subtasks[0].description = "go ahead";
    list.subtasks[1].description = "stop at the tree";
    auto report = validate_synonymity(InstructionText::from("go tree stop"), list);
    CHECK(report.verdict == Verdict::kPass);
    CHECK(report.score == doctest::Approx(1.0));
  }
  SUBCASE("no overlap is flagged") {
    SubtaskList list = make_list({SubtaskState::kPending});
    list.subtasks[0].description = "advance slowly";
    auto report = validate_synonymity(InstructionText::from("cross the bridge"), list);
    CHECK(report.verdict == Verdict::kFlagged);
    CHECK(report.score == doctest::Approx(0.0));
  }
  SUBCASE("hand-counted 0.75 coverage passes at the 0.6 default") {
    // instruction content: cross, bridge, turn, right; covered: cross, bridge, turn
    SubtaskList list = make_list({SubtaskState::kPending});
    list.subtasks[0].description = "cross the bridge then turn";
    auto report = validate_synonymity(InstructionText::from("cross the bridge turn right"), list);
    CHECK(report.score == doctest::Approx(0.75));
    CHECK(report.verdict == Verdict::kPass);
  }
}

TEST_CASE("connection checks adjacent condition alignment") {
  SUBCASE("hand-computed jaccard 0.5 passes at the 0.2 default") {
    // {reach, tree} vs {tree}: intersection 1, union 2
    SubtaskList list = make_list({SubtaskState::kPending, SubtaskState::kPending});
    list.subtasks[0].end_condition = "reach the tree";
    list.subtasks[1].start_condition = "at the tree";
    auto report = validate_connection(list);
    CHECK(report.verdict == Verdict::kPass);
    CHECK(report.score == doctest::Approx(0.5));
  }
  SUBCASE("disjoint conditions are flagged") {
    SubtaskList list = make_list({SubtaskState::kPending, SubtaskState::kPending});
    list.subtasks[0].end_condition = "facing the gate";
    list.subtasks[1].start_condition = "beside the pond";
    auto report = validate_connection(list);
    CHECK(report.verdict == Verdict::kFlagged);
    CHECK(report.violator_ids == std::vector<int>{2});
  }
  SUBCASE("single subtask passes vacuously") {
    CHECK(validate_connection(make_list({SubtaskState::kPending})).verdict == Verdict::kPass);
  }
}
