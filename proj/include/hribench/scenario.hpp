#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hribench/engine.hpp"

namespace hribench {

/// A runnable experiment: configuration, policy, duration and pedestrian scripts.
///
/// Files are TOML or JSON with the same key layout:
///
///   name = "..."            policy = "alg1" | "alg2"     dt_ms = 50
///   duration_ms = 19000     seed = 0
///   [robot]       x_cm, y_cm, heading_deg
///   [base]        wheel_offset_radius_cm, wheel_radius_cm, body_diameter_cm,
///                 wheel_position_angles_deg = [a1, a2, a3], speed_cm_per_ms
///   [sensors]     mount_radius_cm, beam_half_angle_deg, min_range_cm, max_range_cm,
///                 resolution_cm, noise_amplitude_cm
///   [safety]      safe_distance_cm
///   [arm]         link_length_cm, max_bend_deg, footprint_diameter_cm, slew_deg_per_step
///   [[pedestrians]]
///                 radius_cm, waypoints = [[t_ms, x_cm, y_cm], ...]
///
/// Every table and key other than name and duration_ms is optional.
struct Scenario {
  std::string name;
  PolicyKind policy = PolicyKind::ArmFirst;
  SimConfig sim;
  std::int64_t duration_ms = 0;
  std::vector<PedestrianTrack> pedestrians;

  /// Configuration and script coverage checks. Throws Error.
  void validate() const;

  RunResult run() const;
};

Scenario parse_scenario_json(const nlohmann::json& j);
Scenario parse_scenario_toml(std::string_view text);
nlohmann::json toml_to_json(std::string_view text);

/// Picks the format from the extension (.json, otherwise TOML). Call validate()
/// after applying any overrides.
Scenario load_scenario(const std::filesystem::path& path);

/// Serializes back to the JSON form. parse_scenario_json(to_json(s)) == s.
nlohmann::ordered_json to_json(const Scenario& scenario);

/// Robot at the origin and a single pedestrian standing 150 cm ahead.
Scenario blank_world();

}  // namespace hribench
