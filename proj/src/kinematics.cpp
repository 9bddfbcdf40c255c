#include "hribench/kinematics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "hribench/error.hpp"

namespace hribench {
namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

// Rows are the rolling constraints v_i = -sin(a_i) vx + cos(a_i) vy + R omega.
Mat3 constraint_matrix(const BaseGeometry& g) {
  Mat3 m{};
  for (int i = 0; i < 3; ++i) {
    const double a = deg2rad(g.wheel_position_angles[i]);
    m[i] = {-std::sin(a), std::cos(a), g.wheel_offset_radius};
  }
  return m;
}

Mat3 inverse(const Mat3& m) {
  const double c00 = m[1][1] * m[2][2] - m[1][2] * m[2][1];
  const double c01 = m[1][2] * m[2][0] - m[1][0] * m[2][2];
  const double c02 = m[1][0] * m[2][1] - m[1][1] * m[2][0];
  const double det = m[0][0] * c00 + m[0][1] * c01 + m[0][2] * c02;
  if (std::abs(det) < 1e-12) {
    throw Error(ErrorKind::InvalidArgument, "base geometry gives a singular kinematic matrix");
  }
  const double inv = 1.0 / det;
  Mat3 r{};
  r[0][0] = c00 * inv;
  r[1][0] = c01 * inv;
  r[2][0] = c02 * inv;
  r[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * inv;
  r[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * inv;
  r[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * inv;
  r[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * inv;
  r[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * inv;
  r[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * inv;
  return r;
}

std::array<double, 3> apply(const Mat3& m, const std::array<double, 3>& v) {
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i) {
    out[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
  }
  return out;
}

constexpr double kDirectionToleranceDeg = 1.0;

}  // namespace

void BaseGeometry::validate() const {
  if (!(wheel_offset_radius > 0.0) || !(wheel_radius > 0.0) || !(body_diameter > 0.0)) {
    throw Error(ErrorKind::InvalidArgument,
                "base geometry lengths must be positive");
  }
  for (int i = 0; i < 3; ++i) {
    const double a = wheel_position_angles[i];
    const double b = wheel_position_angles[(i + 1) % 3];
    const double gap = std::abs(wrap_angle(deg2rad(b - a)));
    if (std::abs(rad2deg(gap) - 120.0) > 1e-9) {
      throw Error(ErrorKind::InvalidArgument,
                  "wheel position angles must be 120 degrees apart");
    }
  }
}

BaseGeometry BaseGeometry::bisector_aligned() {
  BaseGeometry g;
  g.wheel_position_angles = {210.0, 330.0, 90.0};
  return g;
}

std::string_view to_string(HexLabel label) {
  switch (label) {
    case HexLabel::PlusN: return "+N";
    case HexLabel::MinusN: return "-N";
    case HexLabel::MinusM: return "-M";
    case HexLabel::PlusM: return "+M";
    case HexLabel::PlusL: return "+L";
    case HexLabel::MinusL: return "-L";
  }
  return "?";
}

std::optional<HexLabel> parse_hex_label(std::string_view text) {
  for (HexLabel l : kHexLabels) {
    if (to_string(l) == text) return l;
  }
  return std::nullopt;
}

WheelSpeeds wheel_pattern(HexLabel label) {
  switch (label) {
    case HexLabel::PlusN: return {0, 1, -1};
    case HexLabel::MinusN: return {0, -1, 1};
    case HexLabel::MinusM: return {1, -1, 0};
    case HexLabel::PlusM: return {-1, 1, 0};
    case HexLabel::PlusL: return {1, 0, -1};
    case HexLabel::MinusL: return {-1, 0, 1};
  }
  return {};
}

BodyVelocity forward_kinematics(const WheelSpeeds& w, const BaseGeometry& g) {
  const auto r = apply(inverse(constraint_matrix(g)), {w.v1, w.v2, w.v3});
  return {r[0], r[1], r[2]};
}

WheelSpeeds inverse_kinematics(const BodyVelocity& b, const BaseGeometry& g) {
  const auto r = apply(constraint_matrix(g), {b.vx, b.vy, b.omega});
  return {r[0], r[1], r[2]};
}

HexDirection hex_direction(HexLabel label, const BaseGeometry& g) {
  const BodyVelocity b = forward_kinematics(wheel_pattern(label), g);
  const Vec2 v{b.vx, b.vy};
  return {label, v * (1.0 / v.norm())};
}

std::array<HexDirection, 6> hex_directions(const BaseGeometry& g) {
  std::array<HexDirection, 6> out{};
  for (std::size_t i = 0; i < kHexLabels.size(); ++i) {
    out[i] = hex_direction(kHexLabels[i], g);
  }
  return out;
}

std::optional<HexDirection> hex_direction_for_pattern(const WheelSpeeds& w,
                                                      const BaseGeometry& g) {
  const double scale = std::max({std::abs(w.v1), std::abs(w.v2), std::abs(w.v3)});
  if (!(scale > 0.0)) return std::nullopt;
  const BodyVelocity b = forward_kinematics(w, g);
  const Vec2 t{b.vx, b.vy};
  if (std::abs(b.omega) * g.wheel_offset_radius > 1e-9 * scale) return std::nullopt;
  if (t.norm() < 1e-9 * scale) return std::nullopt;
  for (const HexDirection& h : hex_directions(g)) {
    const double off = std::abs(std::atan2(h.unit_vector.cross(t), h.unit_vector.dot(t)));
    if (rad2deg(off) <= kDirectionToleranceDeg) return h;
  }
  return std::nullopt;
}

double calibrate_speed(std::span<const CalibrationSample> samples) {
  if (samples.empty()) {
    throw Error(ErrorKind::InsufficientData, "calibration needs at least one sample");
  }
  double sum = 0.0;
  for (const CalibrationSample& s : samples) {
    if (!(s.dt_ms > 0.0) || !(s.dd_cm >= 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "calibration sample needs dt > 0 and dd >= 0");
    }
    sum += s.dd_cm / s.dt_ms;
  }
  return sum / static_cast<double>(samples.size());
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace

std::vector<CalibrationSample> parse_calibration_csv(std::string_view text) {
  std::vector<CalibrationSample> out;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line == "dt_ms,dd_cm") continue;
      throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) +
                                        ": expected header 'dt_ms,dd_cm'");
    }
    const auto comma = line.find(',');
    CalibrationSample s;
    if (comma == std::string_view::npos || !parse_double(line.substr(0, comma), s.dt_ms) ||
        !parse_double(line.substr(comma + 1), s.dd_cm) || !(s.dt_ms > 0.0) ||
        !(s.dd_cm >= 0.0)) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(line_no) + ": malformed row '" +
                                        std::string(line) + "'");
    }
    out.push_back(s);
  }
  return out;
}

std::vector<CalibrationSample> read_calibration_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_calibration_csv(ss.str());
}

}  // namespace hribench
