#include "hribench/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hribench/error.hpp"

namespace hribench {

void SimConfig::validate() const {
  base.validate();
  sensors.validate();
  safety.validate(sensors);
  arm.validate();
  if (dt_ms <= 0) throw Error(ErrorKind::InvalidArgument, "dt must be positive");
  if (!(base_speed >= 0.0) || !std::isfinite(base_speed)) {
    throw Error(ErrorKind::InvalidArgument, "base speed must be finite and non-negative");
  }
}

PedestrianScript::PedestrianScript(std::vector<Waypoint> waypoints)
    : waypoints_(std::move(waypoints)) {
  for (std::size_t i = 0; i < waypoints_.size(); ++i) {
    const Waypoint& w = waypoints_[i];
    if (!std::isfinite(w.t_ms) || !std::isfinite(w.position.x) ||
        !std::isfinite(w.position.y)) {
      throw Error(ErrorKind::InvalidArgument, "waypoint values must be finite");
    }
    if (i > 0 && !(w.t_ms > waypoints_[i - 1].t_ms)) {
      throw Error(ErrorKind::InvalidArgument, "waypoint times must strictly increase");
    }
  }
}

bool PedestrianScript::covers(double from_ms, double to_ms) const {
  return !waypoints_.empty() && waypoints_.front().t_ms <= from_ms &&
         waypoints_.back().t_ms >= to_ms;
}

Vec2 PedestrianScript::position_at(double t_ms) const {
  if (!covers(t_ms, t_ms)) {
    throw Error(ErrorKind::ScriptCoverage,
                "pedestrian script does not cover t=" + std::to_string(t_ms) + " ms");
  }
  const auto it = std::lower_bound(waypoints_.begin(), waypoints_.end(), t_ms,
                                   [](const Waypoint& w, double t) { return w.t_ms < t; });
  if (it->t_ms == t_ms) return it->position;
  const Waypoint& b = *it;
  const Waypoint& a = *(it - 1);
  const double f = (t_ms - a.t_ms) / (b.t_ms - a.t_ms);
  return a.position + (b.position - a.position) * f;
}

MetricsParams MetricsParams::from(const SimConfig& cfg) {
  return {cfg.dt_ms, cfg.safety.safe_distance, cfg.base.body_radius()};
}

void MetricsAccumulator::add(const TraceRecord& record) {
  if (record.center_distance) {
    const double d = *record.center_distance;
    if (!metrics_.min_distance || d < *metrics_.min_distance) metrics_.min_distance = d;
    if (d < params_.safe_distance) {
      ++metrics_.unsafe_steps;
      metrics_.unsafe_dwell_ms += params_.dt_ms;
      const bool detected = std::any_of(
          record.readings.begin(), record.readings.end(), [&](const SensorReading& r) {
            return r.range && *r.range < params_.safe_distance;
          });
      if (!detected) ++metrics_.missed_detections;
    }
  }
  bool contact = false;
  for (const Obstacle& p : record.pedestrians) {
    if ((p.center - record.robot_pose.position()).norm() <= params_.body_radius + p.radius) {
      contact = true;
    }
  }
  if (contact && !in_contact_) ++metrics_.violations;
  in_contact_ = contact;
}

std::optional<double> nearest_center_distance(const Pose2& robot,
                                              std::span<const Obstacle> pedestrians) {
  std::optional<double> best;
  for (const Obstacle& p : pedestrians) {
    const double d = (p.center - robot.position()).norm();
    if (!best || d < *best) best = d;
  }
  return best;
}

WorldState initial_world(const SimConfig& cfg, std::vector<Obstacle> pedestrians) {
  WorldState w;
  w.robot_pose = cfg.initial_pose;
  w.pedestrians = std::move(pedestrians);
  w.noise = SensorNoise(cfg.seed);
  return w;
}

TraceRecord snapshot_record(const WorldState& world, const SimConfig& cfg) {
  TraceRecord r;
  r.step_index = world.step_index;
  r.t_ms = world.t_ms;
  r.robot_pose = world.robot_pose;
  r.pedestrians = world.pedestrians;
  SensorNoise scratch = world.noise;
  r.readings = sense_all(world.robot_pose, world.pedestrians, cfg.sensors, scratch);
  r.arm = world.arm;
  r.policy_state = world.policy_state;
  r.center_distance = nearest_center_distance(world.robot_pose, world.pedestrians);
  return r;
}

StepResult step(const WorldState& world, std::span<const Vec2> pedestrian_positions,
                PolicyKind policy, const SimConfig& cfg) {
  if (pedestrian_positions.size() != world.pedestrians.size()) {
    throw Error(ErrorKind::InvalidArgument, "one position per pedestrian is required");
  }
  StepResult out{world, {}};
  WorldState& next = out.world;
  next.step_index = world.step_index + 1;
  next.t_ms = next.step_index * cfg.dt_ms;

  // 1. pedestrians
  for (std::size_t i = 0; i < next.pedestrians.size(); ++i) {
    next.pedestrians[i].center = pedestrian_positions[i];
  }
  // 2. sensing
  const SensorReadings readings =
      sense_all(next.robot_pose, next.pedestrians, cfg.sensors, next.noise);
  // 3. policy
  const auto [cmd, policy_state] =
      step_policy(policy, readings, world.policy_state, cfg.safety, cfg.base, cfg.sensors);
  next.policy_state = policy_state;
  // 4. arm
  next.arm = slew_toward(world.arm, cmd.arm.value_or(default_pose()),
                         cfg.arm_slew_deg_per_step);
  // 5. base, heading held constant
  if (cmd.base) {
    const Vec2 move = cmd.base->unit_vector.rotated(world.robot_pose.heading) *
                      (cfg.base_speed * static_cast<double>(cfg.dt_ms));
    next.robot_pose.x += move.x;
    next.robot_pose.y += move.y;
  }
  // 6. record
  TraceRecord& rec = out.record;
  rec.step_index = next.step_index;
  rec.t_ms = next.t_ms;
  rec.robot_pose = next.robot_pose;
  rec.pedestrians = next.pedestrians;
  rec.readings = readings;
  rec.arm = next.arm;
  rec.command.arm = cmd.arm;
  if (cmd.base) rec.command.base = cmd.base->label;
  rec.policy_state = next.policy_state;
  rec.center_distance = nearest_center_distance(next.robot_pose, next.pedestrians);
  return out;
}

RunResult run_scenario(std::span<const PedestrianTrack> pedestrians, PolicyKind policy,
                       const SimConfig& cfg, std::int64_t duration_ms) {
  cfg.validate();
  if (duration_ms < 0) throw Error(ErrorKind::InvalidArgument, "duration must be >= 0");
  RunResult result;
  if (duration_ms == 0) return result;

  std::vector<Obstacle> start;
  for (const PedestrianTrack& p : pedestrians) {
    if (!p.script.covers(0.0, static_cast<double>(duration_ms))) {
      throw Error(ErrorKind::ScriptCoverage, "pedestrian script does not cover [0, " +
                                                 std::to_string(duration_ms) + "] ms");
    }
    start.push_back({p.script.position_at(0.0), p.radius});
  }

  WorldState world = initial_world(cfg, std::move(start));
  MetricsAccumulator acc(MetricsParams::from(cfg));
  const std::int64_t steps = duration_ms / cfg.dt_ms;
  result.trace.reserve(static_cast<std::size_t>(steps));
  std::vector<Vec2> positions(pedestrians.size());
  for (std::int64_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>((k + 1) * cfg.dt_ms);
    for (std::size_t i = 0; i < pedestrians.size(); ++i) {
      positions[i] = pedestrians[i].script.position_at(t);
    }
    StepResult r = step(world, positions, policy, cfg);
    world = std::move(r.world);
    acc.add(r.record);
    result.trace.push_back(std::move(r.record));
  }
  result.metrics = acc.metrics();
  return result;
}

SafetyMetrics compute_metrics(std::span<const TraceRecord> trace, const MetricsParams& params) {
  if (trace.empty()) throw Error(ErrorKind::InsufficientData, "cannot score an empty trace");
  MetricsAccumulator acc(params);
  for (const TraceRecord& r : trace) acc.add(r);
  return acc.metrics();
}

}  // namespace hribench
