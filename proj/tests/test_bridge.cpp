#include <doctest.h>

#include <string>

#include "bridge_client.hpp"
#include "hribench/error.hpp"
#include "hribench/trace_io.hpp"

using namespace hribench;
using hribench::testing::http_get;
using hribench::testing::ServerThread;
using hribench::testing::WsClient;

namespace {

BridgeOptions fast_options() {
  BridgeOptions o;
  o.port = 0;
  o.tick_ms = 5;
  return o;
}

}  // namespace

TEST_CASE("health endpoint") {
  ServerThread server(blank_world(), fast_options());
  CHECK(http_get(server.port(), "/health") == "ok\n");
  CHECK(http_get(server.port(), "/nope") == "not found\n");
}

TEST_CASE("hello then monotone state ticks") {
  ServerThread server(blank_world(), fast_options());
  WsClient client(server.port());
  const auto hello = client.read();
  CHECK(hello["type"] == "hello");
  CHECK(hello["v"] == kBridgeSchemaVersion);
  CHECK(hello["tick_ms"] == 5);
  std::int64_t last = -1;
  for (int i = 0; i < 20; ++i) {
    const auto st = client.read_type("state");
    CHECK(st["v"] == kBridgeSchemaVersion);
    const std::int64_t tick = st["tick"];
    CHECK(tick > last);
    CHECK(st["record"]["step"] == tick);
    last = tick;
  }
}

TEST_CASE("error replies and read-only observers") {
  ServerThread server(blank_world(), fast_options());
  WsClient controller(server.port());
  controller.read_type("hello");
  WsClient observer(server.port());
  observer.read_type("hello");

  controller.send({{"type", "steer"}, {"tick", 0}, {"vx", 500.0}, {"vy", 0.0}});
  CHECK(controller.read_type("error")["message"].get<std::string>().find("speed") != std::string::npos);

  observer.send({{"type", "steer"}, {"tick", 0}, {"vx", -10.0}, {"vy", 0.0}});
  CHECK(observer.read_type("error")["message"].get<std::string>().find("read-only") !=
        std::string::npos);

  // The session keeps running for both clients.
  const std::int64_t t0 = controller.read_type("state")["tick"];
  CHECK(controller.read_type("state")["tick"].get<std::int64_t>() > t0);
  CHECK(observer.read_type("state")["tick"].get<std::int64_t>() > 0);
}

TEST_CASE("live session exports replay offline byte for byte") {
  const Scenario base = blank_world();
  ServerThread server(base, fast_options());
  {
    WsClient client(server.port());
    client.read_type("hello");
    client.send({{"type", "set_policy"}, {"tick", 0}, {"name", "alg2"}});
    const double vx[] = {-90.0, -30.0, 0.0, 40.0, -120.0};
    for (double v : vx) {
      const std::int64_t tick = client.read_type("state")["tick"];
      client.send({{"type", "steer"}, {"tick", tick}, {"vx", v}, {"vy", v / 4}});
      for (int i = 0; i < 8; ++i) client.read_type("state");
    }
    client.send({{"type", "pause"}, {"tick", 0}});
    while (!client.read_type("state")["paused"].get<bool>()) {
    }
  }

  const auto inputs = nlohmann::json::parse(http_get(server.port(), "/inputs"));
  const std::string live_trace = http_get(server.port(), "/trace");
  REQUIRE(inputs["steer"].size() == 5);
  const std::int64_t ticks = inputs["ticks"];
  CHECK(ticks > 40);

  std::vector<SteerInput> log;
  for (const auto& s : inputs["steer"]) log.push_back({s["tick"], {s["vx"], s["vy"]}});
  Scenario offline = base;
  offline.policy = PolicyKind::BaseFirst;
  offline.duration_ms = ticks * offline.sim.dt_ms;
  offline.pedestrians[0].script = script_from_steer_log(
      {inputs["start"][0], inputs["start"][1]}, log, ticks, inputs["dt_ms"]);
  CHECK(to_jsonl(offline.run().trace) == live_trace);

  const Scenario recorded =
      parse_scenario_json(nlohmann::json::parse(http_get(server.port(), "/scenario")));
  CHECK(to_jsonl(recorded.run().trace) == live_trace);
}

TEST_CASE("controller disconnect pauses the session") {
  ServerThread server(blank_world(), fast_options());
  {
    WsClient client(server.port());
    client.read_type("hello");
    client.read_type("state");
  }
  WsClient watcher(server.port());
  watcher.read_type("hello");
  for (;;) {
    if (watcher.read_type("state")["paused"].get<bool>()) break;
  }
  const auto a = nlohmann::json::parse(http_get(server.port(), "/inputs"))["ticks"];
  std::this_thread::sleep_for(std::chrono::milliseconds(50));
  CHECK(nlohmann::json::parse(http_get(server.port(), "/inputs"))["ticks"] == a);
}

TEST_CASE("second server on a bound port fails") {
  ServerThread first(blank_world(), fast_options());
  BridgeOptions o = fast_options();
  o.port = first.port();
  BridgeServer second(blank_world(), o);
  try {
    second.listen();
    FAIL("expected bind failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
  }
}
