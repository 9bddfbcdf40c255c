#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hribench/arm.hpp"
#include "hribench/geometry.hpp"
#include "hribench/kinematics.hpp"
#include "hribench/policy.hpp"
#include "hribench/sensors.hpp"

namespace hribench {

/// Everything that parameterizes a run apart from the pedestrians and policy.
struct SimConfig {
  BaseGeometry base;
  SensorConfig sensors;
  SafetyConfig safety;
  ArmGeometry arm;
  double arm_slew_deg_per_step = 0.0;  // <= 0: servos reach targets within one step
  double base_speed = 0.02;            // cm/ms, calibrated straight-line speed
  std::int64_t dt_ms = 50;
  Pose2 initial_pose;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Waypoint {
  double t_ms = 0.0;
  Vec2 position;
};

/// Piecewise-linear pedestrian trajectory. Waypoint times strictly increase.
class PedestrianScript {
 public:
  PedestrianScript() = default;
  explicit PedestrianScript(std::vector<Waypoint> waypoints);

  const std::vector<Waypoint>& waypoints() const { return waypoints_; }
  bool empty() const { return waypoints_.empty(); }
  bool covers(double from_ms, double to_ms) const;

  /// Position at `t_ms`. Exact at waypoint times. Throws outside the covered span.
  Vec2 position_at(double t_ms) const;

 private:
  std::vector<Waypoint> waypoints_;
};

struct PedestrianTrack {
  PedestrianScript script;
  double radius = 15.0;  // cm
};

struct WorldState {
  std::int64_t t_ms = 0;
  std::int64_t step_index = 0;
  Pose2 robot_pose;
  ArmState arm;
  PolicyState policy_state;
  std::vector<Obstacle> pedestrians;
  SensorNoise noise;
};

/// Arm target and base move actually issued on a step.
struct CommandRecord {
  std::optional<ArmState> arm;
  std::optional<HexLabel> base;

  bool is_hold() const { return !arm && !base; }
  bool operator==(const CommandRecord&) const = default;
};

/// One immutable line of the trace. Readings are taken at the start of the
/// step; pose, arm and distance are the values after the step's motion.
struct TraceRecord {
  std::int64_t step_index = 0;
  std::int64_t t_ms = 0;
  Pose2 robot_pose;
  std::vector<Obstacle> pedestrians;
  SensorReadings readings{};
  ArmState arm;
  CommandRecord command;
  PolicyState policy_state;
  std::optional<double> center_distance;  // nearest pedestrian, center to center

  bool operator==(const TraceRecord&) const = default;
};

struct SafetyMetrics {
  std::optional<double> min_distance;  // absent for an empty run
  std::int64_t unsafe_dwell_ms = 0;
  std::int64_t unsafe_steps = 0;
  std::int64_t missed_detections = 0;
  std::int64_t violations = 0;  // onsets of contact

  bool operator==(const SafetyMetrics&) const = default;
};

/// Inputs compute_metrics needs besides the records themselves.
struct MetricsParams {
  std::int64_t dt_ms = 50;
  double safe_distance = 50.0;
  double body_radius = 25.0;

  static MetricsParams from(const SimConfig& cfg);
};

class MetricsAccumulator {
 public:
  explicit MetricsAccumulator(MetricsParams params) : params_(params) {}

  void add(const TraceRecord& record);
  const SafetyMetrics& metrics() const { return metrics_; }

 private:
  MetricsParams params_;
  SafetyMetrics metrics_;
  bool in_contact_ = false;
};

std::optional<double> nearest_center_distance(const Pose2& robot,
                                              std::span<const Obstacle> pedestrians);

/// Initial world: robot at cfg.initial_pose, arm upright, policy idle.
WorldState initial_world(const SimConfig& cfg, std::vector<Obstacle> pedestrians);

/// Tick-0 snapshot used by live sessions: sensed but not acted on.
TraceRecord snapshot_record(const WorldState& world, const SimConfig& cfg);

struct StepResult {
  WorldState world;
  TraceRecord record;
};

/// Advances one fixed step: move pedestrians to `pedestrian_positions`, sense,
/// run the policy, apply the arm target, translate the base at cfg.base_speed
/// along the commanded hex direction for dt, then emit the record.
StepResult step(const WorldState& world, std::span<const Vec2> pedestrian_positions,
                PolicyKind policy, const SimConfig& cfg);

struct RunResult {
  std::vector<TraceRecord> trace;
  SafetyMetrics metrics;
};

/// Runs duration/dt steps. Every script must cover [0, duration].
RunResult run_scenario(std::span<const PedestrianTrack> pedestrians, PolicyKind policy,
                       const SimConfig& cfg, std::int64_t duration_ms);

/// Throws Error(InsufficientData) for an empty trace.
SafetyMetrics compute_metrics(std::span<const TraceRecord> trace, const MetricsParams& params);

}  // namespace hribench
