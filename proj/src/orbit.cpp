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

#include "satfl/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <tuple>

#include "satfl/error.hpp"

namespace satfl::orbit {

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

double wrap_degrees(double deg) {
  double w = std::fmod(deg, 360.0);
  if (w < 0.0) w += 360.0;
  // fmod of a tiny negative value can round to exactly 360
  return w >= 360.0 ? 0.0 : w;
}

OrbitElements OrbitElements::make(double semi_major_axis_km, double inclination_deg,
                                  double raan_deg, double initial_phase_deg, double epoch_s) {
  if (!(semi_major_axis_km > kEarthRadiusKm)) {
    throw ConfigError("semi_major_axis must exceed Earth radius (" +
                      std::to_string(kEarthRadiusKm) + " km), got " +
                      std::to_string(semi_major_axis_km));
  }
  if (!(inclination_deg >= 0.0 && inclination_deg <= 180.0)) {
    throw ConfigError("inclination must lie in [0, 180] degrees, got " +
                      std::to_string(inclination_deg));
  }
  if (!std::isfinite(raan_deg) || !std::isfinite(initial_phase_deg) || !std::isfinite(epoch_s)) {
    throw ConfigError("orbit angles and epoch must be finite");
  }
  OrbitElements e;
  e.semi_major_axis_km = semi_major_axis_km;
  e.inclination_deg = inclination_deg;
  e.raan_deg = wrap_degrees(raan_deg);
  e.initial_phase_deg = wrap_degrees(initial_phase_deg);
  e.epoch_s = epoch_s;
  return e;
}

OrbitElements OrbitElements::from_altitude(double altitude_km, double inclination_deg,
                                           double raan_deg, double initial_phase_deg,
                                           double epoch_s) {
  return make(kEarthRadiusKm + altitude_km, inclination_deg, raan_deg, initial_phase_deg, epoch_s);
}

double OrbitElements::mean_motion() const {
  return std::sqrt(kEarthMu / (semi_major_axis_km * semi_major_axis_km * semi_major_axis_km));
}

double OrbitElements::period() const { return 2.0 * std::numbers::pi / mean_motion(); }

bool OrbitElements::outside_leo_band() const {
  const double alt = altitude_km();
  return alt < 500.0 || alt > 2000.0;
}

void WalkerSpec::validate() const {
  if (planes < 1) throw ConfigError("walker: planes p must be >= 1");
  if (total < planes) throw ConfigError("walker: total t must be >= planes p");
  if (total % planes != 0) {
    throw ConfigError("walker: total t (" + std::to_string(total) +
                      ") must be divisible by planes p (" + std::to_string(planes) + ")");
  }
  if (!(inclination_deg >= 0.0 && inclination_deg <= 180.0)) {
    throw ConfigError("walker: inclination must lie in [0, 180] degrees");
  }
  if (!(altitude_km > 0.0)) throw ConfigError("walker: altitude must be positive");
}

std::vector<OrbitElements> generate_walker(const WalkerSpec& spec) {
  spec.validate();
  const int per_plane = spec.per_plane();
  const double raan_span = spec.kind == WalkerKind::star ? 180.0 : 360.0;
  const double raan_step = raan_span / spec.planes;
  const double in_plane_step = 360.0 * spec.planes / spec.total;
  const double plane_offset = 360.0 * spec.phasing / spec.total;

  std::vector<OrbitElements> sats;
  sats.reserve(static_cast<std::size_t>(spec.total));
  for (int q = 0; q < spec.planes; ++q) {
    for (int j = 0; j < per_plane; ++j) {
      sats.push_back(OrbitElements::from_altitude(spec.altitude_km, spec.inclination_deg,
                                                  q * raan_step,
                                                  j * in_plane_step + q * plane_offset));
    }
  }
  return sats;
}

void GroundStation::validate() const {
  if (!(std::abs(latitude_deg) <= 90.0)) {
    throw ConfigError("ground station '" + name + "': |latitude| must be <= 90 degrees");
  }
  if (!(longitude_deg >= -180.0 && longitude_deg < 180.0)) {
    throw ConfigError("ground station '" + name + "': longitude must lie in [-180, 180)");
  }
  if (!(min_elevation_deg >= 0.0 && min_elevation_deg < 90.0)) {
    throw ConfigError("ground station '" + name + "': min_elevation must lie in [0, 90)");
  }
  if (!std::isfinite(altitude_km)) {
    throw ConfigError("ground station '" + name + "': altitude must be finite");
  }
}

GroundStation bremen() { return GroundStation{"bremen", 53.07, 8.79, 0.0, 10.0}; }

double EciPosition::norm() const { return std::sqrt(x * x + y * y + z * z); }

double distance(const EciPosition& a, const EciPosition& b) {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

EciPosition propagate(const OrbitElements& elem, double t) {
  const double u = deg_to_rad(elem.initial_phase_deg) + elem.mean_motion() * (t - elem.epoch_s);
  const double raan = deg_to_rad(elem.raan_deg);
  const double inc = deg_to_rad(elem.inclination_deg);
  const double cu = std::cos(u), su = std::sin(u);
  const double co = std::cos(raan), so = std::sin(raan);
  const double ci = std::cos(inc), si = std::sin(inc);
  const double a = elem.semi_major_axis_km;
  return EciPosition{a * (co * cu - so * su * ci), a * (so * cu + co * su * ci), a * (su * si), t};
}

EciPosition ground_station_eci(const GroundStation& gs, double t, const EarthFrame& frame) {
  const double r = kEarthRadiusKm + gs.altitude_km;
  const double lat = deg_to_rad(gs.latitude_deg);
  const double theta = deg_to_rad(gs.longitude_deg + frame.greenwich_angle_deg) +
                       kEarthRotationRate * t;
  const double cl = std::cos(lat);
  return EciPosition{r * cl * std::cos(theta), r * cl * std::sin(theta), r * std::sin(lat), t};
}

double elevation_deg(const EciPosition& a, const EciPosition& b) {
  const double dx = b.x - a.x, dy = b.y - a.y, dz = b.z - a.z;
  const double range = std::sqrt(dx * dx + dy * dy + dz * dz);
  const double ra = a.norm();
  if (range == 0.0 || ra == 0.0) return 90.0;
  const double s = (dx * a.x + dy * a.y + dz * a.z) / (range * ra);
  return rad_to_deg(std::asin(std::clamp(s, -1.0, 1.0)));
}

double segment_closest_approach_km(const EciPosition& a_in, const EciPosition& b_in) {
  // Canonical endpoint order keeps the result exactly symmetric.
  const bool swap = std::tie(b_in.x, b_in.y, b_in.z) < std::tie(a_in.x, a_in.y, a_in.z);
  const EciPosition& a = swap ? b_in : a_in;
  const EciPosition& b = swap ? a_in : b_in;
  const double dx = b.x - a.x, dy = b.y - a.y, dz = b.z - a.z;
  const double len2 = dx * dx + dy * dy + dz * dz;
  if (len2 == 0.0) return a.norm();
  double s = -(a.x * dx + a.y * dy + a.z * dz) / len2;
  s = std::clamp(s, 0.0, 1.0);
  const double cx = a.x + s * dx, cy = a.y + s * dy, cz = a.z + s * dz;
  return std::sqrt(cx * cx + cy * cy + cz * cz);
}

bool visible(const EciPosition& a, const EciPosition& b, const LinkRule& rule) {
  if (rule.kind == LinkKind::ground) return elevation_deg(a, b) >= rule.min_elevation_deg;
  return segment_closest_approach_km(a, b) >= kEarthRadiusKm + rule.grazing_altitude_km;
}

}  // namespace satfl::orbit
