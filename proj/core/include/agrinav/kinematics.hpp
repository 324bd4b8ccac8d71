#pragma once

#include <string>
#include <vector>

#include "agrinav/episode.hpp"
#include "agrinav/pose.hpp"

namespace agrinav {

struct KinematicsConfig {
  double forward_speed = 0.5;        // m/s
  double rotation_rate = M_PI / 6.0; // rad/s (30 deg/s)
  double decision_period = 1.0;      // s between decisions
  double success_threshold = 3.0;    // m, success radius around the goal
  double max_step_factor = 2.0;      // run budget = factor * episode duration
};

void validate_kinematics_config(const KinematicsConfig& config);

// Flat JSON object with the five fields above; absent fields keep defaults.
KinematicsConfig load_kinematics_config(const std::string& path);
std::string serialize_kinematics_config(const KinematicsConfig& config);

struct TrajectorySample {
  double time = 0.0;
  Pose pose;
};

// Time-indexed pose track. Starts at (t=0, pose (0,0,0)); times strictly
// increasing.
using Trajectory = std::vector<TrajectorySample>;

// Dead reckoning over the four-action space (unicycle):
// FORWARD translates forward_speed*dt along the heading, the rotations turn
// by rotation_rate*dt without moving, STOP is the identity.
Pose step_pose(const Pose& pose, Action action, double dt, const KinematicsConfig& config);

// Integrates the annotated expert route from the origin, sampling every
// decision period (plus interval boundaries). The final sample is the
// episode goal pose. Pure in (annotation, config).
Trajectory ground_truth_trajectory(const EpisodeAnnotation& annotation,
                                   const KinematicsConfig& config);

// Expert pose at an arbitrary time, stepped exactly like
// ground_truth_trajectory so shared instants agree bit for bit.
// Times past the annotation end return the final pose.
Pose ground_truth_pose_at(const EpisodeAnnotation& annotation,
                          const KinematicsConfig& config, double time);

// Number of playback decisions in a run that never stops early:
// ceil(budget / decision_period) with budget = max_step_factor * duration.
long playback_decision_count(double duration, const KinematicsConfig& config);

}  // namespace agrinav
