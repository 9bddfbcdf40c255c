#include <doctest.h>

#include <cmath>
#include <optional>
#include <vector>

#include "hribench/error.hpp"
#include "hribench/sensors.hpp"
#include "test_util.hpp"

using namespace hribench;
using hribench::testing::Gen;

namespace {

// Brute force: densely sample the disc boundary, keep points inside the cone,
// take the nearest. Resolution is radius * 2pi / samples.
std::optional<double> sampled_cone_distance(Vec2 mount, double axis, double half,
                                            const Obstacle& ob, int samples = 200000) {
  if ((ob.center - mount).norm() <= ob.radius) return 0.0;
  std::optional<double> best;
  const Vec2 a = Vec2::unit(axis);
  for (int k = 0; k < samples; ++k) {
    const double phi = 2.0 * M_PI * k / samples;
    const Vec2 p = ob.center + Vec2::unit(phi) * ob.radius;
    const Vec2 rel = p - mount;
    const double bearing = std::abs(std::atan2(a.cross(rel), a.dot(rel)));
    if (bearing > half) continue;
    const double d = rel.norm();
    if (!best || d < *best) best = d;
  }
  return best;
}

bool on_grid(double v, double res) {
  const double k = v / res;
  return std::abs(k - std::round(k)) < 1e-9;
}

Obstacle rotate_about_origin(const Obstacle& o, double rad) {
  return {o.center.rotated(rad), o.radius};
}

}  // namespace

TEST_CASE("sensor config") {
  SensorConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.axis_angle(1) == 0.0);
  CHECK(cfg.axis_angle(4) == doctest::Approx(M_PI));
  cfg.angular_spacing = 50;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = SensorConfig{};
  cfg.min_range = 500;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("cone distance agrees with boundary sampling") {
  Gen gen(7);
  const double half = 15.0 * M_PI / 180.0;
  int compared = 0;
  int grazing = 0;
  for (int i = 0; i < 300; ++i) {
    const Vec2 mount = gen.point(30);
    const double axis = gen.uniform(-M_PI, M_PI);
    const Obstacle ob{mount + Vec2::unit(axis + gen.uniform(-0.9, 0.9)) * gen.uniform(5, 150),
                      gen.uniform(3, 30)};
    const auto exact = cone_surface_distance(mount, axis, half, ob);
    const auto sampled = sampled_cone_distance(mount, axis, half, ob, 20000);
    if (exact.has_value() != sampled.has_value()) {
      ++grazing;  // the cone clips an arc thinner than the sampling step
      continue;
    }
    if (exact) {
      CHECK(std::abs(*exact - *sampled) < 2e-2);
      ++compared;
    }
  }
  CHECK(compared > 100);
  CHECK(grazing <= 3);
}

TEST_CASE("sense_all examples") {
  const SensorConfig cfg;
  const Pose2 pose{};
  SUBCASE("obstacle dead ahead of sensor 1 at 40 cm") {
    const std::vector<Obstacle> obs{{{25.0 + 40.0 + 15.0, 0.0}, 15.0}};
    const auto r = sense_all(pose, obs, cfg);
    REQUIRE(r[0].range);
    // floor(40.0 / 0.3) * 0.3
    CHECK(*r[0].range == doctest::Approx(133 * 0.3));
    CHECK(*r[0].range == doctest::Approx(39.9));
    for (int i = 1; i < 6; ++i) CHECK(r[i].out_of_range());
    for (int i = 0; i < 6; ++i) CHECK(r[i].sensor_id == i + 1);
  }
  SUBCASE("obstacle between two sensor axes goes unseen") {
    for (double center_distance : {45.0, 65.0, 80.0, 150.0}) {
      const std::vector<Obstacle> obs{{Vec2::unit(M_PI / 6) * center_distance, 15.0}};
      const auto r = sense_all(pose, obs, cfg);
      for (const auto& s : r) CHECK(s.out_of_range());
    }
  }
  SUBCASE("no obstacles") {
    for (const auto& s : sense_all(pose, {}, cfg)) CHECK(s.out_of_range());
  }
  SUBCASE("overlap clamps to the minimum range") {
    const std::vector<Obstacle> obs{{{26.0, 0.0}, 5.0}};
    const auto r = sense_all(pose, obs, cfg);
    REQUIRE(r[0].range);
    CHECK(*r[0].range >= cfg.min_range);
    CHECK(*r[0].range < cfg.min_range + cfg.resolution);
  }
  SUBCASE("beyond max range") {
    const std::vector<Obstacle> obs{{{25.0 + 401.0 + 10.0, 0.0}, 10.0}};
    CHECK(sense_all(pose, obs, cfg)[0].out_of_range());
  }
  SUBCASE("nearest of several obstacles wins") {
    const std::vector<Obstacle> obs{{{200.0, 0.0}, 10.0}, {{100.0, 5.0}, 10.0}};
    const auto r = sense_all(pose, obs, cfg);
    REQUIRE(r[0].range);
    CHECK(*r[0].range < 70.0);
  }
}

TEST_CASE("quantization") {
  const SensorConfig cfg;
  CHECK(*quantize_range(40.0, cfg) == doctest::Approx(39.9));
  CHECK(*quantize_range(39.9, cfg) == doctest::Approx(39.9));  // exact grid point survives
  CHECK(*quantize_range(0.0, cfg) == doctest::Approx(2.1));
  CHECK(*quantize_range(400.0, cfg) == doctest::Approx(399.9));
  CHECK_FALSE(quantize_range(400.01, cfg));
}

TEST_CASE("coverage fraction") {
  SensorConfig cfg;
  CHECK(coverage_fraction(cfg) == 0.5);
  cfg.beam_half_angle = 30;
  CHECK(coverage_fraction(cfg) == 1.0);
  cfg.beam_half_angle = 0;
  CHECK(coverage_fraction(cfg) == 0.0);
}

TEST_CASE("sensor properties") {
  const SensorConfig cfg;
  Gen gen(99);
  for (int i = 0; i < 400; ++i) {
    const Pose2 pose{gen.uniform(-50, 50), gen.uniform(-50, 50), gen.uniform(-M_PI, M_PI)};
    std::vector<Obstacle> obs;
    const int n = gen.integer(1, 3);
    for (int k = 0; k < n; ++k) {
      obs.push_back({pose.position() + Vec2::unit(gen.uniform(-M_PI, M_PI)) * gen.uniform(30, 300),
                     gen.uniform(5, 25)});
    }
    const auto base = sense_all(pose, obs, cfg);

    // Readings stay on the grid inside [min, max].
    for (const auto& s : base) {
      if (!s.range) continue;
      CHECK(*s.range >= cfg.min_range);
      CHECK(*s.range <= cfg.max_range);
      CHECK(on_grid(*s.range, cfg.resolution));
    }

    // Rotating pose and obstacles together leaves readings unchanged.
    const double turn = gen.uniform(-M_PI, M_PI);
    Pose2 turned{pose.position().rotated(turn).x, pose.position().rotated(turn).y,
                 pose.heading + turn};
    std::vector<Obstacle> turned_obs;
    for (const auto& o : obs) turned_obs.push_back(rotate_about_origin(o, turn));
    const auto same = sense_all(turned, turned_obs, cfg);
    for (int s = 0; s < 6; ++s) {
      REQUIRE(same[s].range.has_value() == base[s].range.has_value());
      if (base[s].range) CHECK(std::abs(*same[s].range - *base[s].range) < 1e-6);
    }

    // Rotating only the obstacles by one sensor spacing shifts readings by one sensor.
    std::vector<Obstacle> shifted;
    for (const auto& o : obs) {
      shifted.push_back({pose.position() + (o.center - pose.position()).rotated(M_PI / 3),
                         o.radius});
    }
    const auto next = sense_all(pose, shifted, cfg);
    for (int s = 0; s < 6; ++s) {
      const auto& moved = next[(s + 1) % 6];
      REQUIRE(moved.range.has_value() == base[s].range.has_value());
      if (base[s].range) CHECK(std::abs(*moved.range - *base[s].range) < 1e-6);
    }
  }
}

TEST_CASE("moving a detected obstacle away never shortens its reading") {
  const SensorConfig cfg;
  Gen gen(5);
  for (int i = 0; i < 300; ++i) {
    const int id = gen.integer(1, 6);
    const double axis = cfg.axis_angle(id);
    const Vec2 mount = Vec2::unit(axis) * cfg.mount_radius;
    const Vec2 dir = Vec2::unit(axis + gen.uniform(-0.2, 0.2));
    Obstacle ob{mount + dir * gen.uniform(20, 200), gen.uniform(5, 20)};
    std::optional<double> prev = sense_all(Pose2{}, std::vector{ob}, cfg)[id - 1].range;
    if (!prev) continue;
    for (int k = 0; k < 20; ++k) {
      ob.center = ob.center + dir * gen.uniform(0.0, 15.0);
      const auto now = sense_all(Pose2{}, std::vector{ob}, cfg)[id - 1].range;
      if (!now) break;
      CHECK(*now >= *prev);
      prev = now;
    }
  }
}

TEST_CASE("only sensors within half-angle plus disc half-width can see an obstacle") {
  const SensorConfig cfg;
  Gen gen(17);
  for (int i = 0; i < 500; ++i) {
    const Obstacle ob{Vec2::unit(gen.uniform(-M_PI, M_PI)) * gen.uniform(40, 250),
                      gen.uniform(5, 30)};
    const auto r = sense_all(Pose2{}, std::vector{ob}, cfg);
    for (int s = 1; s <= 6; ++s) {
      if (!r[s - 1].range) continue;
      const Vec2 mount = cfg.axis(s) * cfg.mount_radius;
      const Vec2 rel = ob.center - mount;
      const double d = rel.norm();
      const double bearing = std::abs(std::atan2(cfg.axis(s).cross(rel), cfg.axis(s).dot(rel)));
      const double allowed = cfg.beam_half_angle * M_PI / 180.0 +
                             (d > ob.radius ? std::asin(ob.radius / d) : M_PI);
      CHECK(bearing <= allowed + 1e-9);
    }
  }
}

TEST_CASE("sensor noise is seeded and bounded") {
  SensorConfig cfg;
  cfg.noise_amplitude = 1.5;
  const std::vector<Obstacle> obs{{{100.0, 0.0}, 10.0}};
  SensorNoise a(3), b(3), c(4);
  bool differs = false;
  for (int i = 0; i < 50; ++i) {
    const auto ra = sense_all(Pose2{}, obs, cfg, a);
    const auto rb = sense_all(Pose2{}, obs, cfg, b);
    const auto rc = sense_all(Pose2{}, obs, cfg, c);
    CHECK(ra == rb);
    differs = differs || !(ra == rc);
    REQUIRE(ra[0].range);
    CHECK(std::abs(*ra[0].range - 65.0) <= 1.5 + cfg.resolution);
  }
  CHECK(differs);
}
