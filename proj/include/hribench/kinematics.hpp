#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hribench/geometry.hpp"

namespace hribench {

/// Geometry of the three-omni-wheel base. Lengths in cm, angles in degrees.
///
/// Wheel position angles are measured counter-clockwise from the base frame's
/// +x axis (the axis of sensor 1, "Front"). The default places wheel 1 at the
/// back so that driving wheels 2 and 3 oppositely, pattern (0, +1, -1),
/// translates the base toward +N = Front; the six hex directions then coincide
/// with the six sensor axes.
struct BaseGeometry {
  double wheel_offset_radius = 25.0;
  double wheel_radius = 3.0;  // carried for completeness; speeds are rim speeds
  double body_diameter = 50.0;
  std::array<double, 3> wheel_position_angles{180.0, 300.0, 60.0};

  double body_radius() const { return body_diameter / 2.0; }

  /// Throws Error(InvalidArgument) if the geometry is unusable.
  void validate() const;

  /// Wheels rotated by 30 deg so that hex directions bisect adjacent sensor axes.
  static BaseGeometry bisector_aligned();
};

/// Signed rim speeds of the three wheels, cm/s. Positive is clockwise.
struct WheelSpeeds {
  double v1 = 0.0;
  double v2 = 0.0;
  double v3 = 0.0;

  constexpr bool operator==(const WheelSpeeds&) const = default;
};

/// Planar twist of the base in the base frame.
struct BodyVelocity {
  double vx = 0.0;     // cm/s
  double vy = 0.0;     // cm/s
  double omega = 0.0;  // rad/s

  constexpr bool operator==(const BodyVelocity&) const = default;
};

enum class HexLabel { PlusN, MinusN, MinusM, PlusM, PlusL, MinusL };

std::string_view to_string(HexLabel label);
std::optional<HexLabel> parse_hex_label(std::string_view text);

/// One of the six straight-line moves achievable with one wheel idle.
struct HexDirection {
  HexLabel label = HexLabel::PlusN;
  Vec2 unit_vector;  // base frame
};

/// Wheel pattern that produces `label`, e.g. (0, +1, -1) for +N.
WheelSpeeds wheel_pattern(HexLabel label);

/// All six motion-table rows in table order: +N, -N, -M, +M, +L, -L.
inline constexpr std::array<HexLabel, 6> kHexLabels{
    HexLabel::PlusN, HexLabel::MinusN, HexLabel::MinusM,
    HexLabel::PlusM, HexLabel::PlusL,  HexLabel::MinusL};

BodyVelocity forward_kinematics(const WheelSpeeds& w, const BaseGeometry& g);
WheelSpeeds inverse_kinematics(const BodyVelocity& b, const BaseGeometry& g);

HexDirection hex_direction(HexLabel label, const BaseGeometry& g);
std::array<HexDirection, 6> hex_directions(const BaseGeometry& g);

/// The motion-table row matching `w`, or nullopt for patterns that rotate the
/// base or do not translate it along one of the six hex directions (1 deg tolerance).
std::optional<HexDirection> hex_direction_for_pattern(const WheelSpeeds& w,
                                                      const BaseGeometry& g);

struct CalibrationSample {
  double dt_ms = 0.0;
  double dd_cm = 0.0;
};

/// Mean of dd/dt over the samples, in cm/ms. Throws Error(InsufficientData) if empty.
double calibrate_speed(std::span<const CalibrationSample> samples);

/// Reads a `dt_ms,dd_cm` CSV. Malformed rows raise Error(Parse) naming the line.
std::vector<CalibrationSample> read_calibration_csv(const std::filesystem::path& path);
std::vector<CalibrationSample> parse_calibration_csv(std::string_view text);

}  // namespace hribench
