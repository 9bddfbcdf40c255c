#pragma once

#include <cmath>
#include <numbers>

namespace hribench {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr bool operator==(const Vec2&) const = default;

  constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
  constexpr double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  double angle() const { return std::atan2(y, x); }

  Vec2 rotated(double rad) const {
    const double c = std::cos(rad);
    const double s = std::sin(rad);
    return {c * x - s * y, s * x + c * y};
  }

  static Vec2 unit(double rad) { return {std::cos(rad), std::sin(rad)}; }
};

inline constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }

/// Planar pose in the world frame. Heading is the angle of the base frame's +x axis.
struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  // rad

  constexpr Vec2 position() const { return {x, y}; }
  constexpr bool operator==(const Pose2&) const = default;
};

constexpr double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double rad) {
  double a = std::remainder(rad, 2.0 * std::numbers::pi);
  if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

}  // namespace hribench
