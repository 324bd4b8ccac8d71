#pragma once

#include <cmath>

namespace agrinav {

// Units policy:
// - distances in metres
// - headings in radians, normalized to (-pi, pi]; ties at +-pi normalize to +pi
// - times in decimal seconds (millisecond precision in file formats)

inline double normalize_heading(double heading) {
  constexpr double kTwoPi = 2.0 * M_PI;
  double h = std::fmod(heading, kTwoPi);  // (-2pi, 2pi)
  if (h <= -M_PI) h += kTwoPi;
  else if (h > M_PI) h -= kTwoPi;
  return h;
}

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;
};

inline double position_distance(const Pose& a, const Pose& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace agrinav
