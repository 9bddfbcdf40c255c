#include "hribench/policy.hpp"

#include <cmath>
#include <string>

#include "hribench/error.hpp"

namespace hribench {

void SafetyConfig::validate(const SensorConfig& sensors) const {
  if (!(safe_distance > sensors.min_range) || !(safe_distance <= sensors.max_range)) {
    throw Error(ErrorKind::InvalidArgument,
                "safe distance must lie in (min_range, max_range]");
  }
}

std::string_view to_string(PolicyKind kind) {
  return kind == PolicyKind::ArmFirst ? "alg1" : "alg2";
}

std::optional<PolicyKind> parse_policy(std::string_view name) {
  if (name == "alg1") return PolicyKind::ArmFirst;
  if (name == "alg2") return PolicyKind::BaseFirst;
  return std::nullopt;
}

std::string_view to_string(PolicyPhase phase) {
  switch (phase) {
    case PolicyPhase::Idle: return "idle";
    case PolicyPhase::ArmReacted: return "arm_reacted";
    case PolicyPhase::BaseEngaged: return "base_engaged";
    case PolicyPhase::BaseReacted: return "base_reacted";
    case PolicyPhase::ArmEngaged: return "arm_engaged";
  }
  return "?";
}

std::optional<int> select_violator(const SensorReadings& readings, const SafetyConfig& cfg) {
  std::optional<int> best;
  double best_range = 0.0;
  for (const SensorReading& r : readings) {
    if (!r.range || !(*r.range < cfg.safe_distance)) continue;
    if (!best || *r.range < best_range) {
      best = r.sensor_id;
      best_range = *r.range;
    }
  }
  return best;
}

HexDirection escape_direction(int sensor_id, const BaseGeometry& geom,
                              const SensorConfig& sensors) {
  if (sensor_id < 1 || sensor_id > sensors.count) {
    throw Error(ErrorKind::InvalidArgument,
                "sensor id " + std::to_string(sensor_id) + " outside 1..6");
  }
  const Vec2 away = -sensors.axis(sensor_id);
  const auto dirs = hex_directions(geom);
  const HexDirection* best = nullptr;
  double best_dot = -2.0;
  for (const HexDirection& h : dirs) {
    const double d = h.unit_vector.dot(away);
    if (d > best_dot + 1e-9) {
      best = &h;
      best_dot = d;
    }
  }
  return *best;
}

namespace {

PolicyStep clear() { return {PolicyCommand{}, PolicyState{}}; }

}  // namespace

PolicyStep step_algorithm1(const SensorReadings& readings, const PolicyState& st,
                           const SafetyConfig& cfg, const BaseGeometry& geom,
                           const SensorConfig& sensors) {
  const auto violator = select_violator(readings, cfg);
  if (!violator) return clear();
  if (st.phase == PolicyPhase::Idle || !st.latched_sensor) {
    PolicyCommand cmd;
    cmd.arm = react_to_sensor(*violator);
    return {cmd, {PolicyPhase::ArmReacted, violator}};
  }
  const int latched = *st.latched_sensor;
  PolicyCommand cmd;
  cmd.arm = react_to_sensor(latched);
  cmd.base = escape_direction(latched, geom, sensors);
  return {cmd, {PolicyPhase::BaseEngaged, latched}};
}

PolicyStep step_algorithm2(const SensorReadings& readings, const PolicyState& st,
                           const SafetyConfig& cfg, const BaseGeometry& geom,
                           const SensorConfig& sensors) {
  const auto violator = select_violator(readings, cfg);
  if (!violator) return clear();
  if (st.phase == PolicyPhase::Idle || !st.latched_sensor) {
    PolicyCommand cmd;
    cmd.base = escape_direction(*violator, geom, sensors);
    return {cmd, {PolicyPhase::BaseReacted, violator}};
  }
  const int latched = *st.latched_sensor;
  PolicyCommand cmd;
  cmd.arm = react_to_sensor(latched);
  cmd.base = escape_direction(latched, geom, sensors);
  return {cmd, {PolicyPhase::ArmEngaged, latched}};
}

PolicyStep step_policy(PolicyKind kind, const SensorReadings& readings, const PolicyState& st,
                       const SafetyConfig& cfg, const BaseGeometry& geom,
                       const SensorConfig& sensors) {
  return kind == PolicyKind::ArmFirst ? step_algorithm1(readings, st, cfg, geom, sensors)
                                      : step_algorithm2(readings, st, cfg, geom, sensors);
}

}  // namespace hribench
