#include "hribench/live_session.hpp"

#include <cmath>

#include "hribench/error.hpp"
#include "hribench/trace_io.hpp"

namespace hribench {
namespace {

using json = nlohmann::json;

Vec2 advance(Vec2 position, Vec2 velocity_cm_s, std::int64_t dt_ms) {
  return position + velocity_cm_s * (static_cast<double>(dt_ms) / 1000.0);
}

json error_reply(std::int64_t tick, const std::string& message) {
  return {{"type", "error"}, {"v", kBridgeSchemaVersion}, {"tick", tick}, {"message", message}};
}

}  // namespace

LiveSession::LiveSession(Scenario scenario, BridgeOptions options)
    : scenario_(std::move(scenario)),
      options_(options),
      policy_(scenario_.policy),
      metrics_(MetricsParams::from(scenario_.sim)) {
  scenario_.sim.validate();
  for (const PedestrianTrack& p : scenario_.pedestrians) {
    if (p.script.empty()) {
      throw Error(ErrorKind::ScriptCoverage, "live pedestrians need a starting waypoint");
    }
    initial_pedestrians_.push_back({p.script.position_at(p.script.waypoints().front().t_ms),
                                    p.radius});
  }
  reset();
}

void LiveSession::reset() {
  world_ = initial_world(scenario_.sim, initial_pedestrians_);
  velocity_ = {};
  trace_.clear();
  steer_log_.clear();
  positions_.clear();
  std::vector<Vec2> start;
  for (const Obstacle& o : world_.pedestrians) start.push_back(o.center);
  positions_.push_back(std::move(start));
  metrics_ = MetricsAccumulator(MetricsParams::from(scenario_.sim));
  dirty_ = true;
}

std::optional<json> LiveSession::submit(const std::string& text, bool controller) {
  json msg;
  try {
    msg = json::parse(text);
  } catch (const json::parse_error& e) {
    return error_reply(current_tick(), std::string("malformed JSON: ") + e.what());
  }
  if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string()) {
    return error_reply(current_tick(), "message needs a string 'type'");
  }
  if (!msg.contains("tick") || !msg["tick"].is_number_integer() || msg["tick"].get<std::int64_t>() < 0) {
    return error_reply(current_tick(), "message needs a non-negative integer 'tick'");
  }
  const std::string type = msg["type"].get<std::string>();
  Pending p{type, {}, policy_};
  if (type == "steer") {
    if (!msg.contains("vx") || !msg.contains("vy") || !msg["vx"].is_number() ||
        !msg["vy"].is_number()) {
      return error_reply(current_tick(), "steer needs numeric 'vx' and 'vy'");
    }
    p.velocity = {msg["vx"].get<double>(), msg["vy"].get<double>()};
    if (!std::isfinite(p.velocity.x) || !std::isfinite(p.velocity.y)) {
      return error_reply(current_tick(), "steer velocity must be finite");
    }
    if (p.velocity.norm() > options_.max_pedestrian_speed) {
      return error_reply(current_tick(), "steer speed exceeds the maximum pedestrian speed");
    }
  } else if (type == "set_policy") {
    const auto name = msg.value("name", std::string{});
    const auto kind = parse_policy(name);
    if (!kind) return error_reply(current_tick(), "unknown policy '" + name + "'");
    p.policy = *kind;
  } else if (type != "pause" && type != "resume" && type != "reset") {
    return error_reply(current_tick(), "unknown message type '" + type + "'");
  }
  if (!controller) {
    return error_reply(current_tick(), "read-only connection: another client controls this session");
  }
  inbox_.push_back(std::move(p));
  return std::nullopt;
}

void LiveSession::request_pause() { inbox_.push_back({"pause", {}, policy_}); }

void LiveSession::apply(const Pending& p) {
  if (p.type == "steer") {
    velocity_ = p.velocity;
    steer_log_.push_back({current_tick(), velocity_});
  } else if (p.type == "pause") {
    dirty_ = dirty_ || !paused_;
    paused_ = true;
  } else if (p.type == "resume") {
    dirty_ = dirty_ || paused_;
    paused_ = false;
  } else if (p.type == "reset") {
    reset();
  } else if (p.type == "set_policy") {
    policy_ = p.policy;
    world_.policy_state = {};
    dirty_ = true;
  }
}

std::optional<json> LiveSession::tick() {
  while (!inbox_.empty()) {
    apply(inbox_.front());
    inbox_.pop_front();
  }
  if (!paused_) {
    std::vector<Vec2> next = positions_.back();
    if (!next.empty()) next[0] = advance(next[0], velocity_, scenario_.sim.dt_ms);
    StepResult r = step(world_, next, policy_, scenario_.sim);
    world_ = std::move(r.world);
    metrics_.add(r.record);
    trace_.push_back(std::move(r.record));
    positions_.push_back(std::move(next));
    dirty_ = true;
  }
  if (!dirty_) return std::nullopt;
  dirty_ = false;
  return state_message();
}

json LiveSession::hello() const {
  return {{"type", "hello"},
          {"v", kBridgeSchemaVersion},
          {"tick", current_tick()},
          {"schema_version", kBridgeSchemaVersion},
          {"scenario", scenario_.name},
          {"policy", std::string(to_string(policy_))},
          {"dt_ms", scenario_.sim.dt_ms},
          {"tick_ms", options_.tick_ms > 0 ? options_.tick_ms : scenario_.sim.dt_ms},
          {"max_pedestrian_speed_cm_s", options_.max_pedestrian_speed},
          {"safe_distance_cm", scenario_.sim.safety.safe_distance},
          {"body_diameter_cm", scenario_.sim.base.body_diameter},
          {"sensors",
           {{"count", scenario_.sim.sensors.count},
            {"mount_radius_cm", scenario_.sim.sensors.mount_radius},
            {"angular_spacing_deg", scenario_.sim.sensors.angular_spacing},
            {"beam_half_angle_deg", scenario_.sim.sensors.beam_half_angle},
            {"max_range_cm", scenario_.sim.sensors.max_range}}},
          {"paused", paused_}};
}

json LiveSession::state_message() const {
  const TraceRecord record =
      trace_.empty() ? snapshot_record(world_, scenario_.sim) : trace_.back();
  return {{"type", "state"},
          {"v", kBridgeSchemaVersion},
          {"tick", current_tick()},
          {"paused", paused_},
          {"policy", std::string(to_string(policy_))},
          {"steer", {{"vx", velocity_.x}, {"vy", velocity_.y}}},
          {"record", to_json(record)},
          {"metrics", to_json(metrics_.metrics())}};
}

Scenario LiveSession::recorded_scenario() const {
  Scenario s = scenario_;
  s.name = scenario_.name + "-live";
  s.policy = policy_;
  s.duration_ms = current_tick() * scenario_.sim.dt_ms;
  for (std::size_t i = 0; i < s.pedestrians.size(); ++i) {
    std::vector<Waypoint> wps;
    for (std::size_t k = 0; k < positions_.size(); ++k) {
      wps.push_back({static_cast<double>(static_cast<std::int64_t>(k) * scenario_.sim.dt_ms),
                     positions_[k][i]});
    }
    s.pedestrians[i].script = PedestrianScript(std::move(wps));
  }
  return s;
}

PedestrianScript script_from_steer_log(Vec2 start, const std::vector<SteerInput>& log,
                                       std::int64_t ticks, std::int64_t dt_ms) {
  std::vector<Waypoint> wps{{0.0, start}};
  Vec2 pos = start;
  Vec2 vel;
  std::size_t next = 0;
  for (std::int64_t k = 0; k < ticks; ++k) {
    while (next < log.size() && log[next].tick <= k) vel = log[next++].velocity;
    pos = advance(pos, vel, dt_ms);
    wps.push_back({static_cast<double>((k + 1) * dt_ms), pos});
  }
  return PedestrianScript(std::move(wps));
}

}  // namespace hribench
