#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>

#include "hribench/geometry.hpp"

namespace hribench {

inline constexpr int kSensorCount = 6;

/// Cone-beam ultrasonic ring. Lengths in cm, angles in degrees.
///
/// Sensor i (1-based) sits on the base rim with its axis at
/// (i - 1) * angular_spacing counter-clockwise from the base frame's +x axis.
/// Sensor 1's axis is "Front".
struct SensorConfig {
  int count = kSensorCount;
  double mount_radius = 25.0;
  double angular_spacing = 60.0;
  double beam_half_angle = 15.0;
  double min_range = 2.0;
  double max_range = 400.0;
  double resolution = 0.3;
  double noise_amplitude = 0.0;  // uniform additive noise, +/- this many cm

  void validate() const;

  /// Axis bearing of sensor `id` in the base frame, radians.
  double axis_angle(int sensor_id) const;
  Vec2 axis(int sensor_id) const { return Vec2::unit(axis_angle(sensor_id)); }
};

/// One sensor's echo. `range` is empty when nothing is within the beam and range.
struct SensorReading {
  int sensor_id = 1;
  std::optional<double> range;

  bool out_of_range() const { return !range.has_value(); }
  constexpr bool operator==(const SensorReading&) const = default;
};

using SensorReadings = std::array<SensorReading, kSensorCount>;

/// Pedestrians are discs in the world frame.
struct Obstacle {
  Vec2 center;
  double radius = 15.0;

  constexpr bool operator==(const Obstacle&) const = default;
};

/// Seeded source of the optional uniform range noise. The draw is built from
/// raw mt19937_64 output so traces are reproducible across standard libraries.
class SensorNoise {
 public:
  explicit SensorNoise(std::uint64_t seed = 0) : rng_(seed) {}

  /// Uniform in [-amplitude, amplitude).
  double sample(double amplitude);

 private:
  std::mt19937_64 rng_;
};

/// Distance from `mount` to the nearest point of the disc whose bearing lies
/// inside the cone around `axis_angle`, or nullopt if the disc misses the cone.
/// Returns 0 when the mount point is inside the disc.
std::optional<double> cone_surface_distance(Vec2 mount, double axis_angle,
                                            double half_angle, const Obstacle& obstacle);

/// Floors `range` onto the resolution grid and applies the [min, max] window.
std::optional<double> quantize_range(double range, const SensorConfig& cfg);

SensorReadings sense_all(const Pose2& robot_pose, std::span<const Obstacle> obstacles,
                         const SensorConfig& cfg);

/// As above, with additive noise drawn from `noise` when cfg.noise_amplitude > 0.
SensorReadings sense_all(const Pose2& robot_pose, std::span<const Obstacle> obstacles,
                         const SensorConfig& cfg, SensorNoise& noise);

/// Fraction of the surround inside some beam.
double coverage_fraction(const SensorConfig& cfg);

}  // namespace hribench
