#include "hribench/arm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "hribench/error.hpp"

namespace hribench {
namespace {

struct ReactionRow {
  ArmState pose;
  std::string_view direction;
};

constexpr std::array<ReactionRow, 6> kReactionTable{{
    {{90, 45}, "Front"},
    {{90, 135}, "Right"},
    {{45, 90}, "Left"},
    {{135, 90}, "Right"},
    {{90, 135}, "Behind"},
    {{90, 45}, "Left"},
}};

const ReactionRow& row(int sensor_id) {
  if (sensor_id < 1 || sensor_id > static_cast<int>(kReactionTable.size())) {
    throw Error(ErrorKind::InvalidArgument,
                "sensor id " + std::to_string(sensor_id) + " outside 1..6");
  }
  return kReactionTable[sensor_id - 1];
}

double step_toward(double from, double to, double limit) {
  return from + std::clamp(to - from, -limit, limit);
}

}  // namespace

void ArmGeometry::validate() const {
  if (!(link_length > 0.0) || !(footprint_diameter > 0.0) ||
      !(max_bend_from_vertical >= 0.0 && max_bend_from_vertical < 90.0)) {
    throw Error(ErrorKind::InvalidArgument, "invalid arm geometry");
  }
  if (link_length * std::sin(deg2rad(max_bend_from_vertical)) > footprint_diameter / 2.0) {
    throw Error(ErrorKind::InvalidArgument, "arm can bend outside its footprint");
  }
}

ArmState default_pose() { return {}; }

ArmState react_to_sensor(int sensor_id) { return row(sensor_id).pose; }

std::string_view reaction_direction(int sensor_id) { return row(sensor_id).direction; }

Vec2 tip_offset(const ArmState& state, const ArmGeometry& geom) {
  // Unit link direction after tilting about x (servo 1) then y (servo 2).
  const double roll = deg2rad(state.servo1 - 90.0);
  const double pitch = deg2rad(90.0 - state.servo2);
  const double x = std::sin(pitch) * std::cos(roll);
  const double y = -std::sin(roll);
  return Vec2{x, y} * geom.link_length;
}

ArmState slew_toward(const ArmState& current, const ArmState& target, double max_deg_per_step) {
  if (max_deg_per_step <= 0.0) return target;
  return {step_toward(current.servo1, target.servo1, max_deg_per_step),
          step_toward(current.servo2, target.servo2, max_deg_per_step)};
}

}  // namespace hribench
