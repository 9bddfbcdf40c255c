#pragma once

#include <optional>
#include <string_view>
#include <utility>

#include "hribench/arm.hpp"
#include "hribench/kinematics.hpp"
#include "hribench/sensors.hpp"

namespace hribench {

/// What a policy asks for this step. No arm target and no base move is "hold";
/// a hold always returns the arm to its default posture.
struct PolicyCommand {
  std::optional<ArmState> arm;
  std::optional<HexDirection> base;

  bool is_hold() const { return !arm && !base; }
};

struct SafetyConfig {
  double safe_distance = 50.0;  // cm

  void validate(const SensorConfig& sensors) const;
};

enum class PolicyKind { ArmFirst, BaseFirst };

std::string_view to_string(PolicyKind kind);  // "alg1" / "alg2"
std::optional<PolicyKind> parse_policy(std::string_view name);

enum class PolicyPhase {
  Idle,
  ArmReacted,   // arm-first: arm leaned, base still
  BaseEngaged,  // arm-first: arm latched, base escaping
  BaseReacted,  // base-first: base escaping, arm upright
  ArmEngaged,   // base-first: base escaping, arm latched
};

std::string_view to_string(PolicyPhase phase);

/// Escalation progress. `latched_sensor` is set iff phase != Idle.
struct PolicyState {
  PolicyPhase phase = PolicyPhase::Idle;
  std::optional<int> latched_sensor;

  constexpr bool operator==(const PolicyState&) const = default;
};

/// Sensor with the lowest reading below the safe distance; lowest id on ties.
std::optional<int> select_violator(const SensorReadings& readings, const SafetyConfig& cfg);

/// Hex direction closest to the reverse of the sensor's axis. Ties (possible
/// with bisector alignment) resolve to the earlier motion-table row.
HexDirection escape_direction(int sensor_id, const BaseGeometry& geom = {},
                              const SensorConfig& sensors = {});

using PolicyStep = std::pair<PolicyCommand, PolicyState>;

/// Arm first: lean away on the first violating step, then also drive the base
/// away while the violation persists. Clearance resets to idle.
PolicyStep step_algorithm1(const SensorReadings& readings, const PolicyState& st,
                           const SafetyConfig& cfg, const BaseGeometry& geom = {},
                           const SensorConfig& sensors = {});

/// Base first: drive away on the first violating step, then also lean the arm
/// while the violation persists. Clearance resets to idle.
PolicyStep step_algorithm2(const SensorReadings& readings, const PolicyState& st,
                           const SafetyConfig& cfg, const BaseGeometry& geom = {},
                           const SensorConfig& sensors = {});

PolicyStep step_policy(PolicyKind kind, const SensorReadings& readings, const PolicyState& st,
                       const SafetyConfig& cfg, const BaseGeometry& geom = {},
                       const SensorConfig& sensors = {});

}  // namespace hribench
