#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "hribench/arm.hpp"
#include "hribench/error.hpp"
#include "hribench/kinematics.hpp"
#include "hribench/policy.hpp"
#include "hribench/scenario.hpp"
#include "hribench/sensors.hpp"
#include "hribench/trace_io.hpp"

namespace py = pybind11;
using namespace hribench;

namespace {

HexLabel label_from(const std::string& text) {
  const auto label = parse_hex_label(text);
  if (!label) throw Error(ErrorKind::InvalidArgument, "unknown hex direction '" + text + "'");
  return *label;
}

PolicyKind policy_from(const std::string& name) {
  const auto kind = parse_policy(name);
  if (!kind) throw Error(ErrorKind::UnknownPolicy, "unknown policy '" + name + "'");
  return *kind;
}

std::vector<std::optional<double>> ranges(const SensorReadings& readings) {
  std::vector<std::optional<double>> out;
  for (const SensorReading& r : readings) out.push_back(r.range);
  return out;
}

SensorReadings readings_from(const std::vector<std::optional<double>>& ranges) {
  if (ranges.size() != static_cast<std::size_t>(kSensorCount)) {
    throw Error(ErrorKind::InvalidArgument, "expected 6 readings");
  }
  SensorReadings out;
  for (int i = 0; i < kSensorCount; ++i) out[i] = {i + 1, ranges[i]};
  return out;
}

py::tuple arm_tuple(const ArmState& a) { return py::make_tuple(a.servo1, a.servo2); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of the hribench test bench";

  static py::exception<Error> error(m, "HribenchError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<BaseGeometry>(m, "BaseGeometry")
      .def(py::init<>())
      .def_readwrite("wheel_offset_radius", &BaseGeometry::wheel_offset_radius)
      .def_readwrite("wheel_radius", &BaseGeometry::wheel_radius)
      .def_readwrite("body_diameter", &BaseGeometry::body_diameter)
      .def_readwrite("wheel_position_angles", &BaseGeometry::wheel_position_angles)
      .def_static("bisector_aligned", &BaseGeometry::bisector_aligned)
      .def("validate", &BaseGeometry::validate);

  py::class_<SensorConfig>(m, "SensorConfig")
      .def(py::init<>())
      .def_readwrite("mount_radius", &SensorConfig::mount_radius)
      .def_readwrite("beam_half_angle", &SensorConfig::beam_half_angle)
      .def_readwrite("min_range", &SensorConfig::min_range)
      .def_readwrite("max_range", &SensorConfig::max_range)
      .def_readwrite("resolution", &SensorConfig::resolution)
      .def("validate", &SensorConfig::validate);

  m.def(
      "forward_kinematics",
      [](double v1, double v2, double v3, const BaseGeometry& g) {
        const BodyVelocity b = forward_kinematics({v1, v2, v3}, g);
        return py::make_tuple(b.vx, b.vy, b.omega);
      },
      py::arg("v1"), py::arg("v2"), py::arg("v3"), py::arg("geometry") = BaseGeometry{},
      "Wheel rim speeds to body velocity (vx, vy, omega).");
  m.def(
      "inverse_kinematics",
      [](double vx, double vy, double omega, const BaseGeometry& g) {
        const WheelSpeeds w = inverse_kinematics({vx, vy, omega}, g);
        return py::make_tuple(w.v1, w.v2, w.v3);
      },
      py::arg("vx"), py::arg("vy"), py::arg("omega"), py::arg("geometry") = BaseGeometry{},
      "Body velocity to wheel rim speeds (v1, v2, v3).");
  m.def(
      "wheel_pattern",
      [](const std::string& label) {
        const WheelSpeeds w = wheel_pattern(label_from(label));
        return py::make_tuple(w.v1, w.v2, w.v3);
      },
      py::arg("label"));
  m.def(
      "hex_direction",
      [](const std::string& label, const BaseGeometry& g) {
        const Vec2 u = hex_direction(label_from(label), g).unit_vector;
        return py::make_tuple(u.x, u.y);
      },
      py::arg("label"), py::arg("geometry") = BaseGeometry{});
  m.def(
      "calibrate_speed",
      [](const std::vector<std::pair<double, double>>& rows) {
        std::vector<CalibrationSample> samples;
        for (const auto& [dt, dd] : rows) samples.push_back({dt, dd});
        return calibrate_speed(samples);
      },
      py::arg("samples"), "Mean speed in cm/ms from (dt_ms, dd_cm) pairs.");
  m.def(
      "read_calibration_csv",
      [](const std::filesystem::path& path) {
        std::vector<std::pair<double, double>> out;
        for (const CalibrationSample& s : read_calibration_csv(path)) out.emplace_back(s.dt_ms, s.dd_cm);
        return out;
      },
      py::arg("path"));

  m.def(
      "sense",
      [](std::tuple<double, double, double> pose,
         const std::vector<std::tuple<double, double, double>>& obstacles,
         const SensorConfig& cfg) {
        std::vector<Obstacle> obs;
        for (const auto& [x, y, r] : obstacles) obs.push_back({{x, y}, r});
        const auto& [x, y, heading] = pose;
        return ranges(sense_all({x, y, heading}, obs, cfg));
      },
      py::arg("pose"), py::arg("obstacles"), py::arg("config") = SensorConfig{},
      "Quantized readings for sensors 1..6; None when nothing is in range.");
  m.def("coverage_fraction", &coverage_fraction, py::arg("config") = SensorConfig{});

  m.def(
      "react_to_sensor", [](int id) { return arm_tuple(react_to_sensor(id)); }, py::arg("sensor_id"));
  m.def("default_pose", [] { return arm_tuple(default_pose()); });
  m.def(
      "tip_offset",
      [](double servo1, double servo2) {
        const Vec2 t = tip_offset({servo1, servo2}, ArmGeometry{});
        return py::make_tuple(t.x, t.y);
      },
      py::arg("servo1"), py::arg("servo2"));

  m.def(
      "escape_direction",
      [](int id) { return std::string(to_string(escape_direction(id).label)); },
      py::arg("sensor_id"));
  m.def(
      "policy_step",
      [](const std::string& policy, const std::vector<std::optional<double>>& readings,
         const std::string& phase, std::optional<int> latched, double safe_distance) {
        std::optional<PolicyPhase> ph;
        for (PolicyPhase p : {PolicyPhase::Idle, PolicyPhase::ArmReacted, PolicyPhase::BaseEngaged,
                              PolicyPhase::BaseReacted, PolicyPhase::ArmEngaged}) {
          if (to_string(p) == phase) ph = p;
        }
        if (!ph) throw Error(ErrorKind::InvalidArgument, "unknown phase '" + phase + "'");
        SafetyConfig cfg;
        cfg.safe_distance = safe_distance;
        const auto [cmd, st] =
            step_policy(policy_from(policy), readings_from(readings), {*ph, latched}, cfg);
        py::dict command;
        command["arm"] = cmd.arm ? py::object(arm_tuple(*cmd.arm)) : py::none();
        command["base"] = cmd.base ? py::object(py::str(std::string(to_string(cmd.base->label))))
                                   : py::none();
        return py::make_tuple(command, std::string(to_string(st.phase)), st.latched_sensor);
      },
      py::arg("policy"), py::arg("readings"), py::arg("phase") = "idle",
      py::arg("latched_sensor") = py::none(), py::arg("safe_distance") = 50.0,
      "One policy decision: returns (command, next_phase, latched_sensor).");

  // Scenarios cross the boundary as JSON text; the Python package decodes it.
  m.def(
      "load_scenario_json",
      [](const std::filesystem::path& path) { return to_json(load_scenario(path)).dump(); },
      py::arg("path"));
  m.def(
      "toml_scenario_to_json",
      [](const std::string& text) { return to_json(parse_scenario_toml(text)).dump(); },
      py::arg("text"));
  m.def(
      "run_scenario_json",
      [](const std::string& scenario_json) {
        const Scenario s = parse_scenario_json(nlohmann::json::parse(scenario_json));
        s.validate();
        RunResult r;
        {
          py::gil_scoped_release release;
          r = s.run();
        }
        return py::make_tuple(to_jsonl(r.trace), to_json(r.metrics).dump(),
                              to_json(MetricsParams::from(s.sim)).dump());
      },
      py::arg("scenario_json"), "Returns (trace JSONL, metrics JSON, metrics params JSON).");
  m.def(
      "compute_metrics_json",
      [](const std::string& jsonl, const std::string& params_json) {
        const MetricsParams params = metrics_params_from_json(nlohmann::json::parse(params_json));
        return to_json(compute_metrics(parse_jsonl(jsonl), params)).dump();
      },
      py::arg("jsonl"), py::arg("params_json"));
}
