#pragma once

#include <cstdint>
#include <memory>

#include "hribench/live_session.hpp"

namespace hribench {

/// Serves one LiveSession over WebSocket (any request path with an Upgrade
/// header) and plain HTTP on the same port:
///
///   GET /health   -> "ok"
///   GET /trace    -> the session trace as JSONL
///   GET /inputs   -> {"dt_ms", "start": [x, y] | null, "ticks", "steer": [{tick, vx, vy}]}
///   GET /scenario -> recorded_scenario() in scenario JSON form
///
/// Everything runs on one thread; the simulation advances from a fixed-rate
/// timer. The first WebSocket client controls the session, later ones are
/// read-only. Each connection keeps at most one unsent state frame.
class BridgeServer {
 public:
  BridgeServer(Scenario scenario, BridgeOptions options);
  ~BridgeServer();

  BridgeServer(const BridgeServer&) = delete;
  BridgeServer& operator=(const BridgeServer&) = delete;

  /// Binds and listens. Throws Error(Io) if the port is unavailable.
  void listen();

  /// Port actually bound (useful with port 0).
  std::uint16_t port() const;

  /// Serves until stop(). Call listen() first.
  void run();

  /// Safe to call from any thread.
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace hribench
