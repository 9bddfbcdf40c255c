#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hribench/engine.hpp"
#include "hribench/scenario.hpp"

namespace hribench {

inline constexpr int kBridgeSchemaVersion = 1;

struct BridgeOptions {
  std::uint16_t port = 8080;
  std::string bind_address = "127.0.0.1";
  std::int64_t tick_ms = 0;            // wall-clock period; 0 uses the scenario's dt
  double max_pedestrian_speed = 150.0;  // cm/s
  bool handle_signals = false;          // stop cleanly on SIGINT/SIGTERM
};

/// Steering velocity in force from `tick` onward.
struct SteerInput {
  std::int64_t tick = 0;
  Vec2 velocity;  // cm/s

  bool operator==(const SteerInput&) const = default;
};

/// One live simulation timeline, independent of any transport.
///
/// Inbound messages are validated on arrival and queued; they take effect only
/// inside tick(). Pedestrian 0 is steered by velocity, any others stand still.
/// Client messages: {"type": "steer"|"pause"|"resume"|"reset"|"set_policy",
/// "tick": n, ...} with "vx"/"vy" (cm/s) for steer and "name" for set_policy.
class LiveSession {
 public:
  LiveSession(Scenario scenario, BridgeOptions options);

  /// Validates and queues a client message. Returns an error reply for
  /// malformed or forbidden messages; the session itself is unaffected.
  std::optional<nlohmann::json> submit(const std::string& text, bool controller);

  /// Queues a pause, e.g. when the controlling client goes away.
  void request_pause();

  /// Applies queued messages, then advances one step unless paused. Returns the
  /// state to broadcast, or nullopt when nothing changed.
  std::optional<nlohmann::json> tick();

  nlohmann::json hello() const;
  nlohmann::json state_message() const;

  std::int64_t current_tick() const { return world_.step_index; }
  bool paused() const { return paused_; }
  PolicyKind policy() const { return policy_; }
  const SimConfig& config() const { return scenario_.sim; }
  const WorldState& world() const { return world_; }
  const std::vector<TraceRecord>& trace() const { return trace_; }
  const std::vector<SteerInput>& steer_log() const { return steer_log_; }
  const SafetyMetrics& metrics() const { return metrics_.metrics(); }

  /// The session so far as an offline scenario: every pedestrian gets one
  /// waypoint per elapsed tick. Running it reproduces trace().
  Scenario recorded_scenario() const;

 private:
  struct Pending {
    std::string type;
    Vec2 velocity;
    PolicyKind policy = PolicyKind::ArmFirst;
  };

  void reset();
  void apply(const Pending& p);

  Scenario scenario_;
  BridgeOptions options_;
  PolicyKind policy_;
  WorldState world_;
  std::vector<Obstacle> initial_pedestrians_;
  Vec2 velocity_;
  bool paused_ = false;
  bool dirty_ = true;
  std::deque<Pending> inbox_;
  std::vector<TraceRecord> trace_;
  std::vector<SteerInput> steer_log_;
  std::vector<std::vector<Vec2>> positions_;  // per tick, including tick 0
  MetricsAccumulator metrics_;
};

/// Integrates a steer log into per-tick waypoints for pedestrian 0, starting
/// at `start` and ending at tick `ticks`.
PedestrianScript script_from_steer_log(Vec2 start, const std::vector<SteerInput>& log,
                                       std::int64_t ticks, std::int64_t dt_ms);

}  // namespace hribench
