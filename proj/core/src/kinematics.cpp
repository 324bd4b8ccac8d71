#include "agrinav/kinematics.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "agrinav/error.hpp"
#include "json.hpp"

namespace agrinav {

using nlohmann::json;

void validate_kinematics_config(const KinematicsConfig& config) {
  auto positive = [](double value, const char* name) {
    if (!(value > 0.0)) {
      throw Error(Errc::kInvalidConfig, std::string(name) + " must be > 0");
    }
  };
  positive(config.forward_speed, "forward_speed");
  positive(config.rotation_rate, "rotation_rate");
  positive(config.decision_period, "decision_period");
  positive(config.success_threshold, "success_threshold");
  if (!(config.max_step_factor > 1.0)) {
    throw Error(Errc::kInvalidConfig, "max_step_factor must be > 1");
  }
}

KinematicsConfig load_kinematics_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kMissingFile, "cannot open config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  json doc = json::parse(buffer.str(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(Errc::kInvalidConfig, "config file must be a JSON object: " + path);
  }
  KinematicsConfig config;
  auto read = [&](const char* key, double& field) {
    if (!doc.contains(key)) return;
    if (!doc.at(key).is_number()) {
      throw Error(Errc::kInvalidConfig, std::string(key) + " must be a number");
    }
    field = doc.at(key).get<double>();
  };
  read("forward_speed", config.forward_speed);
  read("rotation_rate", config.rotation_rate);
  read("decision_period", config.decision_period);
  read("success_threshold", config.success_threshold);
  read("max_step_factor", config.max_step_factor);
  validate_kinematics_config(config);
  return config;
}

std::string serialize_kinematics_config(const KinematicsConfig& config) {
  json doc = {{"forward_speed", config.forward_speed},
              {"rotation_rate", config.rotation_rate},
              {"decision_period", config.decision_period},
              {"success_threshold", config.success_threshold},
              {"max_step_factor", config.max_step_factor}};
  return doc.dump(2);
}

Pose step_pose(const Pose& pose, Action action, double dt, const KinematicsConfig& config) {
  Pose next = pose;
  switch (action) {
    case Action::kForward:
      next.x += config.forward_speed * dt * std::cos(pose.heading);
      next.y += config.forward_speed * dt * std::sin(pose.heading);
      break;
    case Action::kLeftRotate:
      next.heading = normalize_heading(pose.heading + config.rotation_rate * dt);
      break;
    case Action::kRightRotate:
      next.heading = normalize_heading(pose.heading - config.rotation_rate * dt);
      break;
    case Action::kStop:
      break;
  }
  return next;
}

namespace {

// Single integrator behind ground_truth_trajectory / ground_truth_pose_at:
// both walk the same decision-period substeps (split at interval ends) so
// any instant reachable from both paths yields bit-identical poses.
Pose integrate_annotation(const EpisodeAnnotation& annotation, const KinematicsConfig& config,
                          double until, Trajectory* samples) {
  constexpr double kTimeEps = 1e-9;
  Pose pose;
  if (samples != nullptr) samples->push_back({0.0, pose});
  for (const auto& interval : annotation.intervals) {
    if (interval.t_start >= until - kTimeEps) break;
    const double segment_end = std::min(interval.t_end, until);
    double t = interval.t_start;
    while (segment_end - t > kTimeEps) {
      const double dt = std::min(config.decision_period, segment_end - t);
      pose = step_pose(pose, interval.action, dt, config);
      t += dt;
      if (samples != nullptr) samples->push_back({t, pose});
    }
  }
  return pose;
}

}  // namespace

Trajectory ground_truth_trajectory(const EpisodeAnnotation& annotation,
                                   const KinematicsConfig& config) {
  validate_annotation(annotation);
  validate_kinematics_config(config);
  Trajectory trajectory;
  integrate_annotation(annotation, config, episode_duration(annotation), &trajectory);
  return trajectory;
}

Pose ground_truth_pose_at(const EpisodeAnnotation& annotation, const KinematicsConfig& config,
                          double time) {
  validate_annotation(annotation);
  const double until = std::min(std::max(time, 0.0), episode_duration(annotation));
  return integrate_annotation(annotation, config, until, nullptr);
}

long playback_decision_count(double duration, const KinematicsConfig& config) {
  const double budget = config.max_step_factor * duration;
  // Tiny slack keeps exact multiples (budget == k * period) at k decisions.
  return static_cast<long>(std::ceil(budget / config.decision_period - 1e-9));
}

}  // namespace agrinav
