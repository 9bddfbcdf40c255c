#include <doctest.h>

#include <array>
#include <cmath>

#include "hribench/error.hpp"
#include "hribench/kinematics.hpp"
#include "test_util.hpp"

using namespace hribench;
using hribench::testing::Gen;
using hribench::testing::close_rel;

namespace {

// Independent closed form for three wheels at 120 deg spacing: the drive
// directions d_i = (-sin a_i, cos a_i) sum to zero and sum(d_i d_i^T) = 3/2 I.
BodyVelocity closed_form_fk(const WheelSpeeds& w, const BaseGeometry& g) {
  const std::array<double, 3> v{w.v1, w.v2, w.v3};
  BodyVelocity b;
  for (int i = 0; i < 3; ++i) {
    const double a = g.wheel_position_angles[i] * M_PI / 180.0;
    b.vx += 2.0 / 3.0 * v[i] * -std::sin(a);
    b.vy += 2.0 / 3.0 * v[i] * std::cos(a);
    b.omega += v[i] / (3.0 * g.wheel_offset_radius);
  }
  return b;
}

void check_body(const BodyVelocity& a, const BodyVelocity& b, double tol = 1e-9) {
  const double scale = std::max({1.0, std::abs(b.vx), std::abs(b.vy), std::abs(b.omega)});
  CHECK(std::abs(a.vx - b.vx) <= tol * scale);
  CHECK(std::abs(a.vy - b.vy) <= tol * scale);
  CHECK(std::abs(a.omega - b.omega) <= tol * scale);
}

double angle_between_deg(Vec2 a, Vec2 b) {
  return std::abs(std::atan2(a.cross(b), a.dot(b))) * 180.0 / M_PI;
}

}  // namespace

TEST_CASE("geometry validation") {
  BaseGeometry g;
  CHECK_NOTHROW(g.validate());
  CHECK(g.body_radius() == 25.0);
  g.wheel_position_angles = {0, 90, 240};
  CHECK_THROWS_AS(g.validate(), Error);
  g = BaseGeometry{};
  g.wheel_offset_radius = 0;
  CHECK_THROWS_AS(g.validate(), Error);
  CHECK_NOTHROW(BaseGeometry::bisector_aligned().validate());
}

TEST_CASE("forward kinematics matches the closed-form oracle") {
  Gen gen(11);
  for (const BaseGeometry& g : {BaseGeometry{}, BaseGeometry::bisector_aligned()}) {
    for (int i = 0; i < 500; ++i) {
      const WheelSpeeds w{gen.uniform(-50, 50), gen.uniform(-50, 50), gen.uniform(-50, 50)};
      check_body(forward_kinematics(w, g), closed_form_fk(w, g));
    }
  }
}

TEST_CASE("forward kinematics examples") {
  const BaseGeometry g;
  SUBCASE("zero") { CHECK(forward_kinematics({0, 0, 0}, g) == BodyVelocity{}); }
  SUBCASE("equal wheel speeds only rotate") {
    const BodyVelocity b = forward_kinematics({7, 7, 7}, g);
    CHECK(std::abs(b.vx) < 1e-12);
    CHECK(std::abs(b.vy) < 1e-12);
    CHECK(b.omega == doctest::Approx(7.0 / 25.0));
  }
  SUBCASE("(0, +v, -v) drives toward +N with no rotation") {
    const BodyVelocity b = forward_kinematics({0, 10, -10}, g);
    CHECK(std::abs(b.omega) < 1e-12);
    const auto h = hex_direction_for_pattern({0, 10, -10}, g);
    REQUIRE(h);
    CHECK(h->label == HexLabel::PlusN);
    // With the default anchoring +N is the sensor-1 axis.
    CHECK(h->unit_vector.x == doctest::Approx(1.0));
    CHECK(std::abs(h->unit_vector.y) < 1e-12);
    // |(2/3)(d2 - d3)| = (2/3) * sqrt(3) per unit wheel speed.
    CHECK(std::hypot(b.vx, b.vy) == doctest::Approx(10.0 * 2.0 / std::sqrt(3.0)));
  }
}

TEST_CASE("inverse kinematics examples") {
  const BaseGeometry g;
  CHECK(inverse_kinematics({0, 0, 0}, g) == WheelSpeeds{});
  const WheelSpeeds spin = inverse_kinematics({0, 0, 0.4}, g);
  CHECK(spin.v1 == doctest::Approx(0.4 * 25));
  CHECK(spin.v2 == doctest::Approx(0.4 * 25));
  CHECK(spin.v3 == doctest::Approx(0.4 * 25));
  const Vec2 n = hex_direction(HexLabel::PlusN, g).unit_vector;
  const WheelSpeeds w = inverse_kinematics({n.x, n.y, 0}, g);
  CHECK(std::abs(w.v1) < 1e-12);
  CHECK(w.v2 > 0);
  CHECK(w.v3 == doctest::Approx(-w.v2));
}

TEST_CASE("motion table conformance") {
  const BaseGeometry g;
  const auto dirs = hex_directions(g);
  for (HexLabel label : kHexLabels) {
    const WheelSpeeds p = wheel_pattern(label);
    CHECK(p.v1 + p.v2 + p.v3 == 0.0);
    const BodyVelocity b = forward_kinematics(p, g);
    CHECK(std::abs(b.omega) < 1e-12);
    const auto h = hex_direction_for_pattern(p, g);
    REQUIRE(h);
    CHECK(h->label == label);
    const WheelSpeeds neg{-p.v1, -p.v2, -p.v3};
    const BodyVelocity nb = forward_kinematics(neg, g);
    CHECK(nb.vx == -b.vx);
    CHECK(nb.vy == -b.vy);
    CHECK(nb.omega == -b.omega);
  }
  // Pairwise 60 deg apart, equal magnitude.
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    for (std::size_t j = i + 1; j < dirs.size(); ++j) {
      const double a = angle_between_deg(dirs[i].unit_vector, dirs[j].unit_vector);
      const double k = std::round(a / 60.0);
      CHECK(k >= 1);
      CHECK(std::abs(a - 60.0 * k) < 1e-9);
    }
  }
  const double m0 = std::hypot(forward_kinematics(wheel_pattern(HexLabel::PlusN), g).vx,
                               forward_kinematics(wheel_pattern(HexLabel::PlusN), g).vy);
  for (HexLabel label : kHexLabels) {
    const BodyVelocity b = forward_kinematics(wheel_pattern(label), g);
    CHECK(std::hypot(b.vx, b.vy) == doctest::Approx(m0).epsilon(1e-12));
  }
}

TEST_CASE("hex_direction_for_pattern") {
  const BaseGeometry g;
  CHECK(hex_direction_for_pattern({3, -3, 0}, g)->label == HexLabel::MinusM);
  CHECK(hex_direction_for_pattern({-3, 0, 3}, g)->label == HexLabel::MinusL);
  CHECK_FALSE(hex_direction_for_pattern({1, 1, 1}, g));
  CHECK_FALSE(hex_direction_for_pattern({0, 0, 0}, g));
  CHECK_FALSE(hex_direction_for_pattern({1, 0.5, -1}, g));  // rotates
  // Translation 30 deg off every hex direction.
  const Vec2 off = hex_direction(HexLabel::PlusN, g).unit_vector.rotated(M_PI / 6);
  CHECK_FALSE(hex_direction_for_pattern(inverse_kinematics({off.x, off.y, 0}, g), g));
  // Within the 1 deg tolerance.
  const Vec2 near = hex_direction(HexLabel::PlusL, g).unit_vector.rotated(0.9 * M_PI / 180);
  const auto h = hex_direction_for_pattern(inverse_kinematics({near.x, near.y, 0}, g), g);
  REQUIRE(h);
  CHECK(h->label == HexLabel::PlusL);
}

TEST_CASE("kinematics properties") {
  const BaseGeometry g;
  Gen gen(42);
  for (int i = 0; i < 1000; ++i) {
    const WheelSpeeds w1{gen.uniform(-40, 40), gen.uniform(-40, 40), gen.uniform(-40, 40)};
    const WheelSpeeds w2{gen.uniform(-40, 40), gen.uniform(-40, 40), gen.uniform(-40, 40)};
    const double a = gen.uniform(-3, 3);
    const double b = gen.uniform(-3, 3);
    const BodyVelocity lhs = forward_kinematics(
        {a * w1.v1 + b * w2.v1, a * w1.v2 + b * w2.v2, a * w1.v3 + b * w2.v3}, g);
    const BodyVelocity f1 = forward_kinematics(w1, g);
    const BodyVelocity f2 = forward_kinematics(w2, g);
    check_body(lhs, {a * f1.vx + b * f2.vx, a * f1.vy + b * f2.vy, a * f1.omega + b * f2.omega});

    const BodyVelocity neg = forward_kinematics({-w1.v1, -w1.v2, -w1.v3}, g);
    check_body(neg, {-f1.vx, -f1.vy, -f1.omega});

    const WheelSpeeds back = inverse_kinematics(f1, g);
    CHECK(close_rel(back.v1, w1.v1, 1e-9, 1e-9));
    CHECK(close_rel(back.v2, w1.v2, 1e-9, 1e-9));
    CHECK(close_rel(back.v3, w1.v3, 1e-9, 1e-9));
  }
}

TEST_CASE("calibration") {
  const std::vector<CalibrationSample> table{
      {2000, 38},   {2000, 38.5}, {2000, 40},   {2500, 50.5}, {2500, 50},  {2500, 50.5},
      {3000, 59.5}, {3000, 59},   {3000, 59.5}, {5500, 110.5}, {5500, 111}, {5500, 111}};
  // Exact rational mean of the twelve ratios: 157369 / 7920000.
  CHECK(calibrate_speed(table) == doctest::Approx(157369.0 / 7920000.0).epsilon(1e-12));
  CHECK(calibrate_speed(table) >= 0.0195);
  CHECK(calibrate_speed(table) <= 0.0200);
  const std::vector<CalibrationSample> one{{2000, 40}};
  CHECK(calibrate_speed(one) == doctest::Approx(0.020));
  const std::vector<CalibrationSample> still{{1000, 0}};
  CHECK(calibrate_speed(still) == 0.0);
  CHECK_THROWS_AS(calibrate_speed({}), Error);
  try {
    calibrate_speed({});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InsufficientData);
  }
}

TEST_CASE("calibration csv parsing") {
  const auto rows = parse_calibration_csv("dt_ms,dd_cm\n5500,110.5\n\n# note\n2000,40\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].dt_ms == 5500);
  CHECK(rows[0].dd_cm == 110.5);
  CHECK(parse_calibration_csv("dt_ms,dd_cm\n").empty());
  try {
    parse_calibration_csv("dt_ms,dd_cm\n2000,40\n2000,abc\n");
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_calibration_csv("time,dist\n1,2\n"), Error);
  CHECK_THROWS_AS(parse_calibration_csv("dt_ms,dd_cm\n0,5\n"), Error);
}
