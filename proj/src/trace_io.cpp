#include "hribench/trace_io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "hribench/error.hpp"

namespace hribench {
namespace {

using ojson = nlohmann::ordered_json;

std::optional<PolicyPhase> parse_phase(std::string_view s) {
  for (PolicyPhase p : {PolicyPhase::Idle, PolicyPhase::ArmReacted, PolicyPhase::BaseEngaged,
                        PolicyPhase::BaseReacted, PolicyPhase::ArmEngaged}) {
    if (to_string(p) == s) return p;
  }
  return std::nullopt;
}

template <typename T>
ojson nullable(const std::optional<T>& v) {
  return v ? ojson(*v) : ojson(nullptr);
}

std::string cell(const std::optional<double>& v) {
  return v ? fmt::format("{}", *v) : std::string{};
}

}  // namespace

ojson to_json(const TraceRecord& r) {
  ojson j;
  j["step"] = r.step_index;
  j["t_ms"] = r.t_ms;
  j["robot"] = {{"x", r.robot_pose.x}, {"y", r.robot_pose.y}, {"heading", r.robot_pose.heading}};
  ojson peds = ojson::array();
  for (const Obstacle& p : r.pedestrians) {
    peds.push_back({{"x", p.center.x}, {"y", p.center.y}, {"r", p.radius}});
  }
  j["pedestrians"] = std::move(peds);
  ojson readings = ojson::array();
  for (const SensorReading& s : r.readings) readings.push_back(nullable(s.range));
  j["readings"] = std::move(readings);
  j["arm"] = {{"servo1", r.arm.servo1}, {"servo2", r.arm.servo2}, {"reacting", r.arm.reacting()}};
  ojson cmd;
  cmd["arm"] = r.command.arm
                   ? ojson{{"servo1", r.command.arm->servo1}, {"servo2", r.command.arm->servo2}}
                   : ojson(nullptr);
  cmd["base"] = r.command.base ? ojson(std::string(to_string(*r.command.base))) : ojson(nullptr);
  j["command"] = std::move(cmd);
  j["phase"] = std::string(to_string(r.policy_state.phase));
  j["latched_sensor"] = nullable(r.policy_state.latched_sensor);
  j["dist_cm"] = nullable(r.center_distance);
  return j;
}

TraceRecord record_from_json(const nlohmann::json& j) {
  try {
    TraceRecord r;
    r.step_index = j.at("step").get<std::int64_t>();
    r.t_ms = j.at("t_ms").get<std::int64_t>();
    const auto& robot = j.at("robot");
    r.robot_pose = {robot.at("x").get<double>(), robot.at("y").get<double>(),
                    robot.at("heading").get<double>()};
    for (const auto& p : j.at("pedestrians")) {
      r.pedestrians.push_back(
          {{p.at("x").get<double>(), p.at("y").get<double>()}, p.at("r").get<double>()});
    }
    const auto& readings = j.at("readings");
    if (!readings.is_array() || readings.size() != kSensorCount) {
      throw Error(ErrorKind::Parse, "record needs 6 readings");
    }
    for (int i = 0; i < kSensorCount; ++i) {
      r.readings[i].sensor_id = i + 1;
      if (!readings[i].is_null()) r.readings[i].range = readings[i].get<double>();
    }
    r.arm = {j.at("arm").at("servo1").get<double>(), j.at("arm").at("servo2").get<double>()};
    const auto& cmd = j.at("command");
    if (!cmd.at("arm").is_null()) {
      r.command.arm = ArmState{cmd["arm"].at("servo1").get<double>(),
                               cmd["arm"].at("servo2").get<double>()};
    }
    if (!cmd.at("base").is_null()) {
      const auto label = parse_hex_label(cmd["base"].get<std::string>());
      if (!label) throw Error(ErrorKind::Parse, "unknown base direction in record");
      r.command.base = label;
    }
    const auto phase = parse_phase(j.at("phase").get<std::string>());
    if (!phase) throw Error(ErrorKind::Parse, "unknown policy phase in record");
    r.policy_state.phase = *phase;
    if (!j.at("latched_sensor").is_null()) {
      r.policy_state.latched_sensor = j["latched_sensor"].get<int>();
    }
    if (!j.at("dist_cm").is_null()) r.center_distance = j["dist_cm"].get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("malformed trace record: ") + e.what());
  }
}

ojson to_json(const SafetyMetrics& m) {
  ojson j;
  j["min_distance_cm"] = nullable(m.min_distance);
  j["unsafe_dwell_ms"] = m.unsafe_dwell_ms;
  j["unsafe_steps"] = m.unsafe_steps;
  j["missed_detections"] = m.missed_detections;
  j["violations"] = m.violations;
  return j;
}

SafetyMetrics metrics_from_json(const nlohmann::json& j) {
  try {
    SafetyMetrics m;
    if (!j.at("min_distance_cm").is_null()) m.min_distance = j["min_distance_cm"].get<double>();
    m.unsafe_dwell_ms = j.at("unsafe_dwell_ms").get<std::int64_t>();
    m.unsafe_steps = j.at("unsafe_steps").get<std::int64_t>();
    m.missed_detections = j.at("missed_detections").get<std::int64_t>();
    m.violations = j.at("violations").get<std::int64_t>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("malformed metrics: ") + e.what());
  }
}

ojson to_json(const MetricsParams& p) {
  return {{"dt_ms", p.dt_ms}, {"safe_distance_cm", p.safe_distance},
          {"body_radius_cm", p.body_radius}};
}

MetricsParams metrics_params_from_json(const nlohmann::json& j) {
  try {
    return {j.at("dt_ms").get<std::int64_t>(), j.at("safe_distance_cm").get<double>(),
            j.at("body_radius_cm").get<double>()};
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("malformed metrics params: ") + e.what());
  }
}

void write_jsonl(std::ostream& out, std::span<const TraceRecord> trace) {
  for (const TraceRecord& r : trace) out << to_json(r).dump() << '\n';
}

std::string to_jsonl(std::span<const TraceRecord> trace) {
  std::ostringstream ss;
  write_jsonl(ss, trace);
  return ss.str();
}

std::vector<TraceRecord> parse_jsonl(std::string_view text) {
  std::vector<TraceRecord> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorKind::Parse, "trace line " + std::to_string(line_no) + ": " + e.what());
    }
    out.push_back(record_from_json(j));
  }
  return out;
}

std::vector<TraceRecord> read_jsonl(const std::filesystem::path& path) {
  return parse_jsonl(read_text_file(path));
}

void write_csv(std::ostream& out, std::span<const TraceRecord> trace) {
  out << "step,t_ms,robot_x,robot_y,ped_x,ped_y,dist_cm,arm_reacting,s1,s2,s3,s4,s5,s6\n";
  for (const TraceRecord& r : trace) {
    std::optional<double> px, py;
    if (!r.pedestrians.empty()) {
      px = r.pedestrians.front().center.x;
      py = r.pedestrians.front().center.y;
    }
    out << fmt::format("{},{},{},{},{},{},{},{}", r.step_index, r.t_ms, r.robot_pose.x,
                       r.robot_pose.y, cell(px), cell(py), cell(r.center_distance),
                       r.arm.reacting() ? 1 : 0);
    for (const SensorReading& s : r.readings) out << ',' << cell(s.range);
    out << '\n';
  }
}

void write_path_csv(std::ostream& out, std::span<const TraceRecord> trace) {
  out << "step,t_ms,robot_x,robot_y,ped_x,ped_y\n";
  for (const TraceRecord& r : trace) {
    std::optional<double> px, py;
    if (!r.pedestrians.empty()) {
      px = r.pedestrians.front().center.x;
      py = r.pedestrians.front().center.y;
    }
    out << fmt::format("{},{},{},{},{},{}\n", r.step_index, r.t_ms, r.robot_pose.x,
                       r.robot_pose.y, cell(px), cell(py));
  }
}

void write_distance_csv(std::ostream& out, std::span<const TraceRecord> trace) {
  out << "step,t_ms,dist_cm\n";
  for (const TraceRecord& r : trace) {
    out << fmt::format("{},{},{}\n", r.step_index, r.t_ms, cell(r.center_distance));
  }
}

void write_arm_flag_csv(std::ostream& out, std::span<const TraceRecord> trace) {
  out << "step,t_ms,arm_reacting\n";
  for (const TraceRecord& r : trace) {
    out << fmt::format("{},{},{}\n", r.step_index, r.t_ms, r.arm.reacting() ? 1 : 0);
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace hribench
