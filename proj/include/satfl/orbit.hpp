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

#pragma once

// Circular two-body orbits, Walker constellations, ground stations and
// line-of-sight checks. Angles are degrees at the API boundary and radians
// internally; distances are km, times are seconds.

#include <cstddef>
#include <string>
#include <vector>

namespace satfl::orbit {

inline constexpr double kEarthRadiusKm = 6371.0;
inline constexpr double kEarthMu = 398600.4418;            // km^3/s^2
inline constexpr double kEarthRotationRate = 7.2921159e-5;  // rad/s
inline constexpr double kSpeedOfLightKmS = 299792.458;

double deg_to_rad(double deg);
double rad_to_deg(double rad);
/// Maps an angle in degrees to [0, 360).
double wrap_degrees(double deg);

struct OrbitElements {
  double semi_major_axis_km = kEarthRadiusKm + 500.0;
  double inclination_deg = 0.0;
  double raan_deg = 0.0;
  double initial_phase_deg = 0.0;  // argument of latitude at epoch
  double epoch_s = 0.0;

  /// Validates and normalizes raan/phase. Throws ConfigError.
  static OrbitElements make(double semi_major_axis_km, double inclination_deg, double raan_deg,
                            double initial_phase_deg, double epoch_s = 0.0);
  static OrbitElements from_altitude(double altitude_km, double inclination_deg, double raan_deg,
                                     double initial_phase_deg, double epoch_s = 0.0);

  double altitude_km() const { return semi_major_axis_km - kEarthRadiusKm; }
  double mean_motion() const;  // rad/s
  double period() const;       // s
  /// True if the altitude lies outside the 500..2000 km LEO band.
  bool outside_leo_band() const;
};

enum class WalkerKind { star, delta };

struct WalkerSpec {
  WalkerKind kind = WalkerKind::star;
  double inclination_deg = 80.0;
  int total = 40;
  int planes = 5;
  int phasing = 1;
  double altitude_km = 500.0;

  int per_plane() const { return total / planes; }
  /// Throws ConfigError naming the violated constraint.
  void validate() const;
};

/// Plane-major list of t satellites.
std::vector<OrbitElements> generate_walker(const WalkerSpec& spec);

struct GroundStation {
  std::string name;
  double latitude_deg = 0.0;
  double longitude_deg = 0.0;
  double altitude_km = 0.0;
  double min_elevation_deg = 10.0;

  void validate() const;
};

/// Bremen, Germany at city-level precision.
GroundStation bremen();

struct EciPosition {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double t = 0.0;

  double norm() const;
};

double distance(const EciPosition& a, const EciPosition& b);

/// Rotation of the Earth-fixed frame relative to the inertial one.
struct EarthFrame {
  double greenwich_angle_deg = 0.0;  // Greenwich meridian angle from +x at t = 0
};

EciPosition propagate(const OrbitElements& elem, double t);
EciPosition ground_station_eci(const GroundStation& gs, double t, const EarthFrame& frame = {});

enum class LinkKind { ground, space };

struct LinkRule {
  LinkKind kind = LinkKind::space;
  double min_elevation_deg = 10.0;   // ground links: mask at the station `a`
  double grazing_altitude_km = 0.0;  // space links
};

/// Elevation of `b` above the local horizon of `a`, degrees.
double elevation_deg(const EciPosition& a, const EciPosition& b);
/// Smallest distance of the segment a-b from Earth's centre.
double segment_closest_approach_km(const EciPosition& a, const EciPosition& b);

/// Ground links: `a` is the station. Space links: unobstructed line of sight.
bool visible(const EciPosition& a, const EciPosition& b, const LinkRule& rule);

}  // namespace satfl::orbit
