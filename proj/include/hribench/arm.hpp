#pragma once

#include <string_view>

#include "hribench/geometry.hpp"

namespace hribench {

/// Servo angles of the 2-DoF arm, degrees in [0, 180]. (90, 90) is upright.
struct ArmState {
  double servo1 = 90.0;
  double servo2 = 90.0;

  bool reacting() const { return servo1 != 90.0 || servo2 != 90.0; }
  constexpr bool operator==(const ArmState&) const = default;
};

struct ArmGeometry {
  double link_length = 21.0;            // cm
  double max_bend_from_vertical = 45.0;  // deg
  double footprint_diameter = 30.0;     // cm

  void validate() const;
};

ArmState default_pose();

/// Reaction posture for a stimulated sensor (1..6), taken verbatim from the
/// reaction table. Rows 1/6 and 2/5 share servo pairs. Throws on other ids.
ArmState react_to_sensor(int sensor_id);

/// Direction word printed beside each reaction row. Informational only.
std::string_view reaction_direction(int sensor_id);

/// Horizontal projection of the arm tip in the base frame. Servo 1 tilts about
/// the x axis (left/right), servo 2 about the y axis (forward/back); each
/// deviation from 90 deg is a tilt from vertical.
Vec2 tip_offset(const ArmState& state, const ArmGeometry& geom);

/// Moves `current` toward `target` by at most `max_deg_per_step` per servo.
/// A non-positive limit snaps straight to the target.
ArmState slew_toward(const ArmState& current, const ArmState& target, double max_deg_per_step);

}  // namespace hribench
