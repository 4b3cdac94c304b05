/*
 * Copyright 2026 The satfl Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "satfl/error.hpp"
#include "satfl/orbit.hpp"

using namespace satfl::orbit;

namespace {

constexpr double kPi = std::numbers::pi;

// Angle between two positions seen from Earth's centre, degrees.
double central_angle(const EciPosition& a, const EciPosition& b) {
  const double c = (a.x * b.x + a.y * b.y + a.z * b.z) / (a.norm() * b.norm());
  return std::acos(std::clamp(c, -1.0, 1.0)) * 180.0 / kPi;
}

double angle_diff(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 360.0);
  return std::min(d, 360.0 - d);
}

}  // namespace

TEST_SUITE("orbit") {

TEST_CASE("walker star 80:40/5/1 layout") {
  const WalkerSpec spec{WalkerKind::star, 80.0, 40, 5, 1, 500.0};
  const auto sats = generate_walker(spec);
  REQUIRE(sats.size() == 40);
  for (int q = 0; q < 5; ++q) {
    for (int j = 0; j < 8; ++j) {
      const auto& s = sats[static_cast<std::size_t>(q * 8 + j)];
      CHECK(s.inclination_deg == 80.0);
      CHECK(s.altitude_km() == doctest::Approx(500.0).epsilon(1e-12));
      CHECK(angle_diff(s.raan_deg, 36.0 * q) < 1e-9);
      if (j > 0) CHECK(angle_diff(s.initial_phase_deg, sats[q * 8 + j - 1].initial_phase_deg) == doctest::Approx(45.0));
    }
    if (q > 0) CHECK(angle_diff(sats[q * 8].initial_phase_deg, sats[(q - 1) * 8].initial_phase_deg) == doctest::Approx(9.0));
  }
  // in-plane neighbours are 45 degrees apart in space as well
  CHECK(central_angle(propagate(sats[0], 0.0), propagate(sats[1], 0.0)) == doctest::Approx(45.0));
}

TEST_CASE("walker delta and zero phasing") {
  const auto delta = generate_walker({WalkerKind::delta, 60.0, 40, 5, 1, 500.0});
  for (int q = 0; q < 5; ++q) {
    CHECK(angle_diff(delta[q * 8].raan_deg, 72.0 * q) < 1e-9);
    CHECK(delta[q * 8].inclination_deg == 60.0);
  }
  const auto flat = generate_walker({WalkerKind::star, 80.0, 40, 5, 0, 500.0});
  for (int q = 1; q < 5; ++q) {
    for (int j = 0; j < 8; ++j) CHECK(flat[q * 8 + j].initial_phase_deg == flat[j].initial_phase_deg);
  }
}

TEST_CASE("walker rejects t not divisible by p") {
  WalkerSpec bad{WalkerKind::star, 80.0, 40, 6, 1, 500.0};
  CHECK_THROWS_WITH_AS(generate_walker(bad), doctest::Contains("divisible"), satfl::ConfigError);
  bad.planes = 0;
  CHECK_THROWS_AS(bad.validate(), satfl::ConfigError);
}

TEST_CASE("two-body period and closure") {
  const auto leo = OrbitElements::from_altitude(500.0, 53.0, 20.0, 10.0);
  CHECK(std::abs(leo.period() - 5668.144) < 1e-3);
  const auto p0 = propagate(leo, 0.0);
  const auto p1 = propagate(leo, 5668.144);
  CHECK(distance(p0, p1) < 1.0);
  CHECK(p0.norm() == doctest::Approx(leo.semi_major_axis_km).epsilon(1e-12));

  const auto meo = OrbitElements::from_altitude(2000.0, 0.0, 0.0, 0.0);
  CHECK(std::abs(meo.period() - 7622.141) < 1e-3);
}

TEST_CASE("radius conserved over a day") {
  const auto e = OrbitElements::from_altitude(500.0, 80.0, 36.0, 9.0);
  double worst = 0.0;
  for (double t = 0.0; t <= 86400.0; t += 37.0) {
    worst = std::max(worst, std::abs(propagate(e, t).norm() / e.semi_major_axis_km - 1.0));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("phase advances at the mean motion") {
  const auto e = OrbitElements::from_altitude(700.0, 0.0, 0.0, 0.0);
  const double t = 600.0;
  const double expected = e.mean_motion() * t * 180.0 / kPi;
  CHECK(central_angle(propagate(e, 0.0), propagate(e, t)) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("ground station frame") {
  const GroundStation pole{"pole", 90.0, 0.0, 0.2, 10.0};
  for (double t : {0.0, 1234.5, 40000.0}) {
    const auto p = ground_station_eci(pole, t);
    CHECK(std::abs(p.x) < 1e-9);
    CHECK(std::abs(p.y) < 1e-9);
    CHECK(p.norm() == doctest::Approx(6371.2));
  }
  const GroundStation origin{"origin", 0.0, 0.0, 0.0, 10.0};
  const auto p0 = ground_station_eci(origin, 0.0);
  CHECK(p0.x == doctest::Approx(6371.0));
  CHECK(std::abs(p0.y) < 1e-12);
  const auto p1 = ground_station_eci(origin, 2.0 * kPi / kEarthRotationRate);
  CHECK(std::abs(p1.x - 6371.0) < 1e-6);
  CHECK(std::abs(p1.y) < 1e-6);
  CHECK(std::abs(p1.z) < 1e-6);
}

TEST_CASE("elevation against the planar triangle") {
  const GroundStation gs{"eq", 0.0, 0.0, 0.0, 10.0};
  const auto g = ground_station_eci(gs, 0.0);
  const double r = kEarthRadiusKm + 500.0;
  for (double gamma_deg : {0.0, 5.0, 10.0, 15.0, 20.0, 25.0}) {
    const double gamma = gamma_deg * kPi / 180.0;
    const EciPosition s{r * std::cos(gamma), 0.0, r * std::sin(gamma), 0.0};
    const double expected = std::atan2(std::cos(gamma) - kEarthRadiusKm / r, std::sin(gamma)) * 180.0 / kPi;
    CHECK(elevation_deg(g, s) == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("line of sight") {
  const GroundStation gs{"eq", 0.0, 0.0, 0.0, 10.0};
  const auto g = ground_station_eci(gs, 0.0);
  const LinkRule ground{LinkKind::ground, 89.9, 0.0};
  CHECK(visible(g, EciPosition{6871.0, 0.0, 0.0, 0.0}, ground));
  CHECK_FALSE(visible(g, EciPosition{-6871.0, 0.0, 0.0, 0.0}, LinkRule{LinkKind::ground, 0.0, 0.0}));

  const double r = 6871.0;
  auto at = [&](double deg) {
    const double a = deg * kPi / 180.0;
    return EciPosition{r * std::cos(a), r * std::sin(a), 0.0, 0.0};
  };
  const LinkRule space{LinkKind::space, 10.0, 0.0};
  // chord midpoint of a 45 degree pair sits at 6871 cos 22.5 = 6348 km
  CHECK(segment_closest_approach_km(at(0), at(45)) == doctest::Approx(r * std::cos(22.5 * kPi / 180.0)));
  CHECK_FALSE(visible(at(0), at(45), space));
  CHECK(visible(at(0), at(30), space));
  CHECK_FALSE(visible(at(0), at(30), LinkRule{LinkKind::space, 10.0, 300.0}));
  CHECK(segment_closest_approach_km(at(0), at(45)) == segment_closest_approach_km(at(45), at(0)));
}

TEST_CASE("orbit element validation") {
  CHECK_THROWS_AS(OrbitElements::make(6000.0, 10.0, 0.0, 0.0), satfl::ConfigError);
  CHECK_THROWS_AS(OrbitElements::make(7000.0, 190.0, 0.0, 0.0), satfl::ConfigError);
  CHECK(OrbitElements::make(7000.0, 10.0, -30.0, 400.0).raan_deg == doctest::Approx(330.0));
  CHECK(OrbitElements::from_altitude(2500.0, 0, 0, 0).outside_leo_band());
  CHECK_THROWS_AS((GroundStation{"x", 95.0, 0.0, 0.0, 10.0}.validate()), satfl::ConfigError);
}

}  // TEST_SUITE
