#include "agrinav/kinematics.hpp"

#include <cmath>
#include <random>

#include "agrinav/error.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace agrinav;

namespace {
const KinematicsConfig kDefault;
}

TEST_CASE("step_pose implements the four-action unicycle") {
  Pose origin;
  Pose forward = step_pose(origin, Action::kForward, 2.0, kDefault);
  CHECK(forward.x == doctest::Approx(1.0));  // 0.5 m/s * 2 s
  CHECK(forward.y == doctest::Approx(0.0));
  CHECK(forward.heading == 0.0);

  Pose left = step_pose(origin, Action::kLeftRotate, 3.0, kDefault);
  CHECK(left.heading == doctest::Approx(M_PI / 2));
  CHECK(left.x == 0.0);
  CHECK(left.y == 0.0);

  Pose right = step_pose(origin, Action::kRightRotate, 3.0, kDefault);
  CHECK(right.heading == doctest::Approx(-M_PI / 2));

  Pose odd{1.5, -2.0, 0.7};
  Pose stopped = step_pose(odd, Action::kStop, 5.0, kDefault);
  CHECK(stopped.x == odd.x);
  CHECK(stopped.y == odd.y);
  CHECK(stopped.heading == odd.heading);
}

TEST_CASE("rotations never move, forward never turns") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coord(-20.0, 20.0);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  std::uniform_real_distribution<double> duration(0.0, 10.0);
  for (int i = 0; i < 500; ++i) {
    Pose pose{coord(rng), coord(rng), normalize_heading(angle(rng))};
    const double dt = duration(rng);
    for (Action turn : {Action::kLeftRotate, Action::kRightRotate}) {
      Pose next = step_pose(pose, turn, dt, kDefault);
      CHECK(next.x == pose.x);
      CHECK(next.y == pose.y);
    }
    Pose ahead = step_pose(pose, Action::kForward, dt, kDefault);
    CHECK(ahead.heading == pose.heading);
  }
}

TEST_CASE("heading normalization lands in (-pi, pi] with ties at +pi") {
  CHECK(normalize_heading(M_PI) == doctest::Approx(M_PI));
  CHECK(normalize_heading(-M_PI) == doctest::Approx(M_PI));
  CHECK(normalize_heading(3 * M_PI) == doctest::Approx(M_PI));
  CHECK(normalize_heading(2 * M_PI) == doctest::Approx(0.0));
  CHECK(normalize_heading(-3 * M_PI / 2) == doctest::Approx(M_PI / 2));
}

TEST_CASE("ground truth trajectory integrates the annotation") {
  SUBCASE("forward then stop") {
    auto annotation = parse_annotation(
        R"([{"action":"FORWARD","time range":[0,2]},{"action":"STOP","time range":[2,3]}])");
    Trajectory trajectory = ground_truth_trajectory(annotation, kDefault);
    CHECK(trajectory.front().time == 0.0);
    CHECK(trajectory.back().time == 3.0);
    CHECK(trajectory.back().pose.x == doctest::Approx(1.0));
    CHECK(trajectory.back().pose.y == doctest::Approx(0.0));
  }
  SUBCASE("rotate then forward lands at (0, 1, pi/2)") {
    // hand integration: 3 s at pi/6 rad/s = pi/2, then 2 s at 0.5 m/s along +y
    auto annotation = parse_annotation(
        R"([{"action":"LEFT ROTATE","time range":[0,3]},{"action":"FORWARD","time range":[3,5]}])");
    Pose goal = ground_truth_trajectory(annotation, kDefault).back().pose;
    CHECK(goal.x == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(goal.y == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(goal.heading == doctest::Approx(M_PI / 2));
  }
}

TEST_CASE("closed square path returns to the origin") {
  // 4 x (forward 2 s, left 3 s) = 4 x (1 m, 90 deg)
  std::string doc = "[";
  double t = 0;
  for (int i = 0; i < 4; ++i) {
    doc += R"({"action":"FORWARD","time range":[)" + std::to_string(t) + "," +
           std::to_string(t + 2) + "]},";
    t += 2;
    doc += R"({"action":"LEFT ROTATE","time range":[)" + std::to_string(t) + "," +
           std::to_string(t + 3) + "]}";
    t += 3;
    if (i != 3) doc += ",";
  }
  doc += "]";
  Pose final_pose = ground_truth_trajectory(parse_annotation(doc), kDefault).back().pose;
  CHECK(std::hypot(final_pose.x, final_pose.y) < 1e-9);
}

TEST_CASE("constant-action integration is compositional") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> split(0.2, 0.8);
  std::uniform_real_distribution<double> total(0.5, 12.0);
  for (Action action : {Action::kForward, Action::kLeftRotate, Action::kRightRotate}) {
    for (int i = 0; i < 200; ++i) {
      const double whole = total(rng);
      const double mid = whole * split(rng);
      Pose direct = step_pose(Pose{}, action, whole, kDefault);
      Pose stepped = step_pose(step_pose(Pose{}, action, mid, kDefault), action, whole - mid,
                               kDefault);
      CHECK(std::abs(direct.x - stepped.x) < 1e-9);
      CHECK(std::abs(direct.y - stepped.y) < 1e-9);
      CHECK(std::abs(normalize_heading(direct.heading - stepped.heading)) < 1e-9);
    }
  }
}

TEST_CASE("forward, half turn, forward returns to the start") {
  for (double dt : {0.5, 2.0, 7.25}) {
    Pose pose;
    pose = step_pose(pose, Action::kForward, dt, kDefault);
    // two rotations totalling pi
    pose = step_pose(pose, Action::kLeftRotate, M_PI / 2 / kDefault.rotation_rate, kDefault);
    pose = step_pose(pose, Action::kLeftRotate, M_PI / 2 / kDefault.rotation_rate, kDefault);
    pose = step_pose(pose, Action::kForward, dt, kDefault);
    CHECK(std::hypot(pose.x, pose.y) < 1e-6);
  }
}

TEST_CASE("goal pose recomputation is bit-identical") {
  auto annotation = parse_annotation(
      R"([{"action":"LEFT ROTATE","time range":[0,1.5]},{"action":"FORWARD","time range":[1.5,7.25]},
          {"action":"RIGHT ROTATE","time range":[7.25,9]},{"action":"FORWARD","time range":[9,13.75]}])");
  Pose a = ground_truth_trajectory(annotation, kDefault).back().pose;
  Pose b = ground_truth_trajectory(annotation, kDefault).back().pose;
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
  CHECK(a.heading == b.heading);
  // the point-query integrator walks the same substeps
  Pose c = ground_truth_pose_at(annotation, kDefault, episode_duration(annotation));
  CHECK(c.x == a.x);
  CHECK(c.y == a.y);
  CHECK(c.heading == a.heading);
}

TEST_CASE("playback decision count is ceil(budget / period)") {
  KinematicsConfig config;
  config.decision_period = 1.0;
  config.max_step_factor = 2.0;
  CHECK(playback_decision_count(5.0, config) == 10);
  config.max_step_factor = 1.9;
  CHECK(playback_decision_count(5.0, config) == 10);  // ceil(9.5)
  config.decision_period = 0.1;
  config.max_step_factor = 2.0;
  CHECK(playback_decision_count(0.15, config) == 3);  // ceil(0.3/0.1)
}

TEST_CASE("kinematics config file round trip and validation") {
  auto dir = testsupport::make_temp_dir("kcfg");
  testsupport::write_text(dir / "config.json",
                          R"({"forward_speed":1.25,"decision_period":0.5})");
  KinematicsConfig config = load_kinematics_config((dir / "config.json").string());
  CHECK(config.forward_speed == 1.25);
  CHECK(config.decision_period == 0.5);
  CHECK(config.rotation_rate == doctest::Approx(M_PI / 6));  // untouched default

  testsupport::write_text(dir / "bad.json", R"({"forward_speed":-1})");
  CHECK_THROWS_AS(load_kinematics_config((dir / "bad.json").string()), Error);
  CHECK_THROWS_AS(load_kinematics_config((dir / "absent.json").string()), Error);
}
