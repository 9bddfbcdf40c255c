#include "hribench/scenario.hpp"

#include <set>

#include <toml++/toml.hpp>

#include "hribench/error.hpp"
#include "hribench/trace_io.hpp"

namespace hribench {
namespace {

using json = nlohmann::json;

void reject_unknown(const json& obj, std::string_view where,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (std::string_view a : allowed) ok = ok || key == a;
    if (!ok) {
      throw Error(ErrorKind::Parse, "unknown key '" + key + "' in " + std::string(where));
    }
  }
}

template <typename T>
void read_opt(const json& obj, const char* key, T& out) {
  if (auto it = obj.find(key); it != obj.end()) out = it->get<T>();
}

const json& table(const json& j, const char* key) {
  static const json empty = json::object();
  auto it = j.find(key);
  if (it == j.end()) return empty;
  if (!it->is_object()) throw Error(ErrorKind::Parse, std::string("'") + key + "' must be a table");
  return *it;
}

json node_to_json(const toml::node& node) {
  if (const auto* t = node.as_table()) {
    json out = json::object();
    for (const auto& [k, v] : *t) out[std::string(k.str())] = node_to_json(v);
    return out;
  }
  if (const auto* a = node.as_array()) {
    json out = json::array();
    for (const auto& v : *a) out.push_back(node_to_json(v));
    return out;
  }
  if (const auto* v = node.as_integer()) return v->get();
  if (const auto* v = node.as_floating_point()) return v->get();
  if (const auto* v = node.as_boolean()) return v->get();
  if (const auto* v = node.as_string()) return v->get();
  throw Error(ErrorKind::Parse, "unsupported TOML value (dates and times are not used)");
}

Scenario parse_impl(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::Parse, "scenario must be a table/object");
  reject_unknown(j, "scenario", {"name", "policy", "dt_ms", "duration_ms", "seed", "robot", "base",
                                 "sensors", "safety", "arm", "pedestrians"});
  Scenario s;
  if (!j.contains("name")) throw Error(ErrorKind::Parse, "scenario needs a 'name'");
  if (!j.contains("duration_ms")) throw Error(ErrorKind::Parse, "scenario needs 'duration_ms'");
  s.name = j.at("name").get<std::string>();
  s.duration_ms = j.at("duration_ms").get<std::int64_t>();
  if (auto it = j.find("policy"); it != j.end()) {
    const auto name = it->get<std::string>();
    const auto kind = parse_policy(name);
    if (!kind) throw Error(ErrorKind::UnknownPolicy, "unknown policy '" + name + "'");
    s.policy = *kind;
  }
  read_opt(j, "dt_ms", s.sim.dt_ms);
  read_opt(j, "seed", s.sim.seed);

  const json& robot = table(j, "robot");
  reject_unknown(robot, "[robot]", {"x_cm", "y_cm", "heading_deg"});
  read_opt(robot, "x_cm", s.sim.initial_pose.x);
  read_opt(robot, "y_cm", s.sim.initial_pose.y);
  double heading_deg = rad2deg(s.sim.initial_pose.heading);
  read_opt(robot, "heading_deg", heading_deg);
  s.sim.initial_pose.heading = deg2rad(heading_deg);

  const json& base = table(j, "base");
  reject_unknown(base, "[base]", {"wheel_offset_radius_cm", "wheel_radius_cm", "body_diameter_cm",
                                  "wheel_position_angles_deg", "speed_cm_per_ms"});
  read_opt(base, "wheel_offset_radius_cm", s.sim.base.wheel_offset_radius);
  read_opt(base, "wheel_radius_cm", s.sim.base.wheel_radius);
  read_opt(base, "body_diameter_cm", s.sim.base.body_diameter);
  read_opt(base, "wheel_position_angles_deg", s.sim.base.wheel_position_angles);
  read_opt(base, "speed_cm_per_ms", s.sim.base_speed);

  const json& sensors = table(j, "sensors");
  reject_unknown(sensors, "[sensors]", {"mount_radius_cm", "beam_half_angle_deg", "min_range_cm",
                                        "max_range_cm", "resolution_cm", "noise_amplitude_cm"});
  read_opt(sensors, "mount_radius_cm", s.sim.sensors.mount_radius);
  read_opt(sensors, "beam_half_angle_deg", s.sim.sensors.beam_half_angle);
  read_opt(sensors, "min_range_cm", s.sim.sensors.min_range);
  read_opt(sensors, "max_range_cm", s.sim.sensors.max_range);
  read_opt(sensors, "resolution_cm", s.sim.sensors.resolution);
  read_opt(sensors, "noise_amplitude_cm", s.sim.sensors.noise_amplitude);

  const json& safety = table(j, "safety");
  reject_unknown(safety, "[safety]", {"safe_distance_cm"});
  read_opt(safety, "safe_distance_cm", s.sim.safety.safe_distance);

  const json& arm = table(j, "arm");
  reject_unknown(arm, "[arm]",
                 {"link_length_cm", "max_bend_deg", "footprint_diameter_cm", "slew_deg_per_step"});
  read_opt(arm, "link_length_cm", s.sim.arm.link_length);
  read_opt(arm, "max_bend_deg", s.sim.arm.max_bend_from_vertical);
  read_opt(arm, "footprint_diameter_cm", s.sim.arm.footprint_diameter);
  read_opt(arm, "slew_deg_per_step", s.sim.arm_slew_deg_per_step);

  if (auto it = j.find("pedestrians"); it != j.end()) {
    if (!it->is_array()) throw Error(ErrorKind::Parse, "'pedestrians' must be an array of tables");
    for (const json& p : *it) {
      reject_unknown(p, "[[pedestrians]]", {"radius_cm", "waypoints"});
      PedestrianTrack track;
      read_opt(p, "radius_cm", track.radius);
      std::vector<Waypoint> wps;
      for (const json& w : p.at("waypoints")) {
        if (!w.is_array() || w.size() != 3) {
          throw Error(ErrorKind::Parse, "waypoint must be [t_ms, x_cm, y_cm]");
        }
        wps.push_back({w[0].get<double>(), {w[1].get<double>(), w[2].get<double>()}});
      }
      try {
        track.script = PedestrianScript(std::move(wps));
      } catch (const Error& e) {
        throw Error(ErrorKind::Parse, e.what());
      }
      if (!(track.radius > 0.0)) throw Error(ErrorKind::Parse, "pedestrian radius must be > 0");
      s.pedestrians.push_back(std::move(track));
    }
  }
  return s;
}

}  // namespace

void Scenario::validate() const {
  sim.validate();
  if (duration_ms < 0) throw Error(ErrorKind::InvalidArgument, "duration must be >= 0");
  if (duration_ms == 0) return;
  for (std::size_t i = 0; i < pedestrians.size(); ++i) {
    if (!pedestrians[i].script.covers(0.0, static_cast<double>(duration_ms))) {
      throw Error(ErrorKind::ScriptCoverage,
                  "pedestrian " + std::to_string(i) + " script does not cover [0, " +
                      std::to_string(duration_ms) + "] ms");
    }
  }
}

RunResult Scenario::run() const {
  validate();
  return run_scenario(pedestrians, policy, sim, duration_ms);
}

Scenario parse_scenario_json(const nlohmann::json& j) {
  try {
    return parse_impl(j);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("scenario: ") + e.what());
  }
}

nlohmann::json toml_to_json(std::string_view text) {
  try {
    const toml::table t = toml::parse(text);
    return node_to_json(t);
  } catch (const toml::parse_error& e) {
    throw Error(ErrorKind::Parse, "line " + std::to_string(e.source().begin.line) + ": " +
                                      std::string(e.description()));
  }
}

Scenario parse_scenario_toml(std::string_view text) {
  return parse_scenario_json(toml_to_json(text));
}

Scenario load_scenario(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error(ErrorKind::Io, "no such file: " + path.string());
  const std::string text = read_text_file(path);
  Scenario s;
  try {
    if (path.extension() == ".json") {
      json j;
      try {
        j = json::parse(text);
      } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Parse, e.what());
      }
      s = parse_scenario_json(j);
    } else {
      s = parse_scenario_toml(text);
    }
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
  return s;
}

nlohmann::ordered_json to_json(const Scenario& s) {
  nlohmann::ordered_json j;
  j["name"] = s.name;
  j["policy"] = std::string(to_string(s.policy));
  j["dt_ms"] = s.sim.dt_ms;
  j["duration_ms"] = s.duration_ms;
  j["seed"] = s.sim.seed;
  j["robot"] = {{"x_cm", s.sim.initial_pose.x},
                {"y_cm", s.sim.initial_pose.y},
                {"heading_deg", rad2deg(s.sim.initial_pose.heading)}};
  j["base"] = {{"wheel_offset_radius_cm", s.sim.base.wheel_offset_radius},
               {"wheel_radius_cm", s.sim.base.wheel_radius},
               {"body_diameter_cm", s.sim.base.body_diameter},
               {"wheel_position_angles_deg", s.sim.base.wheel_position_angles},
               {"speed_cm_per_ms", s.sim.base_speed}};
  j["sensors"] = {{"mount_radius_cm", s.sim.sensors.mount_radius},
                  {"beam_half_angle_deg", s.sim.sensors.beam_half_angle},
                  {"min_range_cm", s.sim.sensors.min_range},
                  {"max_range_cm", s.sim.sensors.max_range},
                  {"resolution_cm", s.sim.sensors.resolution},
                  {"noise_amplitude_cm", s.sim.sensors.noise_amplitude}};
  j["safety"] = {{"safe_distance_cm", s.sim.safety.safe_distance}};
  j["arm"] = {{"link_length_cm", s.sim.arm.link_length},
              {"max_bend_deg", s.sim.arm.max_bend_from_vertical},
              {"footprint_diameter_cm", s.sim.arm.footprint_diameter},
              {"slew_deg_per_step", s.sim.arm_slew_deg_per_step}};
  auto peds = nlohmann::ordered_json::array();
  for (const PedestrianTrack& p : s.pedestrians) {
    auto wps = nlohmann::ordered_json::array();
    for (const Waypoint& w : p.script.waypoints()) {
      wps.push_back({w.t_ms, w.position.x, w.position.y});
    }
    peds.push_back({{"radius_cm", p.radius}, {"waypoints", std::move(wps)}});
  }
  j["pedestrians"] = std::move(peds);
  return j;
}

Scenario blank_world() {
  Scenario s;
  s.name = "blank";
  s.duration_ms = 0;
  PedestrianTrack p;
  p.script = PedestrianScript(std::vector<Waypoint>{{0.0, {150.0, 0.0}}});
  s.pedestrians.push_back(std::move(p));
  return s;
}

}  // namespace hribench
