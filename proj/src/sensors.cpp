#include "hribench/sensors.hpp"

#include <algorithm>
#include <cmath>

#include "hribench/error.hpp"

namespace hribench {
namespace {

// Entry distance of the ray m + t*u (t >= 0) into the disc, for m outside it.
std::optional<double> ray_entry(Vec2 m, Vec2 u, const Obstacle& ob) {
  const Vec2 rel = ob.center - m;
  const double along = u.dot(rel);
  if (along <= 0.0) return std::nullopt;
  const double perp = u.cross(rel);
  const double h2 = ob.radius * ob.radius - perp * perp;
  if (h2 < 0.0) return std::nullopt;
  return std::max(0.0, along - std::sqrt(h2));
}

// Guards floor() against representation error at exact grid points.
constexpr double kGridEps = 1e-9;

}  // namespace

void SensorConfig::validate() const {
  if (count != kSensorCount) {
    throw Error(ErrorKind::InvalidArgument, "sensor ring must have 6 sensors");
  }
  if (std::abs(count * angular_spacing - 360.0) > 1e-9) {
    throw Error(ErrorKind::InvalidArgument, "sensor count x spacing must be 360 degrees");
  }
  if (!(min_range > 0.0) || !(min_range < max_range) || !(resolution > 0.0) ||
      !(beam_half_angle >= 0.0) || !(mount_radius >= 0.0) || !(noise_amplitude >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "invalid sensor configuration");
  }
}

double SensorConfig::axis_angle(int sensor_id) const {
  return deg2rad((sensor_id - 1) * angular_spacing);
}

double SensorNoise::sample(double amplitude) {
  const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  return (2.0 * u - 1.0) * amplitude;
}

std::optional<double> cone_surface_distance(Vec2 mount, double axis_angle, double half_angle,
                                            const Obstacle& obstacle) {
  const Vec2 rel = obstacle.center - mount;
  const double d = rel.norm();
  if (d <= obstacle.radius) return 0.0;
  const Vec2 axis = Vec2::unit(axis_angle);
  const double bearing = std::abs(std::atan2(axis.cross(rel), axis.dot(rel)));
  if (bearing <= half_angle) return d - obstacle.radius;
  // Nearest point lies on whichever cone edge meets the disc first.
  std::optional<double> best;
  for (double side : {-1.0, 1.0}) {
    const auto t = ray_entry(mount, Vec2::unit(axis_angle + side * half_angle), obstacle);
    if (t && (!best || *t < *best)) best = t;
  }
  return best;
}

std::optional<double> quantize_range(double range, const SensorConfig& cfg) {
  if (range > cfg.max_range) return std::nullopt;
  const double floor_grid = std::ceil(cfg.min_range / cfg.resolution - kGridEps);
  const double ticks = std::max(std::floor(range / cfg.resolution + kGridEps), floor_grid);
  const double q = ticks * cfg.resolution;
  if (q > cfg.max_range) return std::nullopt;
  return q;
}

namespace {

SensorReadings sense_impl(const Pose2& pose, std::span<const Obstacle> obstacles,
                          const SensorConfig& cfg, SensorNoise* noise) {
  SensorReadings out{};
  const double half = deg2rad(cfg.beam_half_angle);
  for (int i = 0; i < kSensorCount; ++i) {
    const int id = i + 1;
    const double axis = pose.heading + cfg.axis_angle(id);
    const Vec2 mount = pose.position() + Vec2::unit(axis) * cfg.mount_radius;
    std::optional<double> nearest;
    for (const Obstacle& ob : obstacles) {
      const auto d = cone_surface_distance(mount, axis, half, ob);
      if (d && (!nearest || *d < *nearest)) nearest = d;
    }
    out[i].sensor_id = id;
    if (nearest) {
      double r = *nearest;
      if (noise != nullptr && cfg.noise_amplitude > 0.0) {
        r = std::max(0.0, r + noise->sample(cfg.noise_amplitude));
      }
      out[i].range = quantize_range(r, cfg);
    }
  }
  return out;
}

}  // namespace

SensorReadings sense_all(const Pose2& robot_pose, std::span<const Obstacle> obstacles,
                         const SensorConfig& cfg) {
  return sense_impl(robot_pose, obstacles, cfg, nullptr);
}

SensorReadings sense_all(const Pose2& robot_pose, std::span<const Obstacle> obstacles,
                         const SensorConfig& cfg, SensorNoise& noise) {
  return sense_impl(robot_pose, obstacles, cfg, &noise);
}

double coverage_fraction(const SensorConfig& cfg) {
  return std::min(1.0, cfg.count * 2.0 * cfg.beam_half_angle / 360.0);
}

}  // namespace hribench
