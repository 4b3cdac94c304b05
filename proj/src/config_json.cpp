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

#include "satfl/config_json.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "satfl/error.hpp"

namespace satfl {
namespace {

using nlohmann::json;

// Reads one JSON object, remembering which keys were consumed so leftovers
// can be rejected.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  const json* child(const char* key) {
    if (!j_.contains(key)) return nullptr;
    seen_.insert(key);
    return &j_.at(key);
  }

  void get(const char* key, double& out) {
    if (const json* v = child(key)) {
      if (!v->is_number()) fail(key, "a number");
      out = v->get<double>();
    }
  }
  void get(const char* key, int& out) {
    if (const json* v = child(key)) {
      if (!v->is_number_integer()) fail(key, "an integer");
      out = v->get<int>();
    }
  }
  void get(const char* key, std::size_t& out) {
    if (const json* v = child(key)) {
      if (!v->is_number_unsigned()) fail(key, "a non-negative integer");
      out = v->get<std::size_t>();
    }
  }
  void get(const char* key, bool& out) {
    if (const json* v = child(key)) {
      if (!v->is_boolean()) fail(key, "a boolean");
      out = v->get<bool>();
    }
  }
  void get(const char* key, std::string& out) {
    if (const json* v = child(key)) {
      if (!v->is_string()) fail(key, "a string");
      out = v->get<std::string>();
    }
  }

  std::string path(const char* key) const { return path_ + "." + key; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.contains(it.key())) throw ConfigError("unknown key '" + path_ + "." + it.key() + "'");
    }
  }

 private:
  [[noreturn]] void fail(const char* key, const char* what) const {
    throw ConfigError(path_ + "." + key + ": expected " + what);
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

orbit::WalkerSpec parse_walker(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  orbit::WalkerSpec w;
  std::string kind = "star";
  r.get("kind", kind);
  if (kind == "star") {
    w.kind = orbit::WalkerKind::star;
  } else if (kind == "delta") {
    w.kind = orbit::WalkerKind::delta;
  } else {
    throw ConfigError(path + ".kind: expected 'star' or 'delta'");
  }
  r.get("inclination_deg", w.inclination_deg);
  r.get("total", w.total);
  r.get("planes", w.planes);
  r.get("phasing", w.phasing);
  r.get("altitude_km", w.altitude_km);
  r.finish();
  return w;
}

orbit::GroundStation parse_gs(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  orbit::GroundStation gs;
  r.get("name", gs.name);
  r.get("latitude_deg", gs.latitude_deg);
  r.get("longitude_deg", gs.longitude_deg);
  r.get("altitude_km", gs.altitude_km);
  r.get("min_elevation_deg", gs.min_elevation_deg);
  r.finish();
  return gs;
}

template <class T, class F>
std::vector<T> parse_array(const json* j, const std::string& path, F&& each) {
  std::vector<T> out;
  if (!j) return out;
  if (!j->is_array()) throw ConfigError(path + ": expected an array");
  for (std::size_t i = 0; i < j->size(); ++i) out.push_back(each((*j)[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace

ScenarioConfig parse_config(const json& j) {
  ScenarioConfig c;
  ObjectReader root(j, "config");
  root.get("name", c.name);

  if (const json* cj = root.child("constellation")) {
    ObjectReader r(*cj, "config.constellation");
    c.constellation.walkers = parse_array<orbit::WalkerSpec>(
        r.child("walkers"), r.path("walkers"), [](const json& e, const std::string& p) { return parse_walker(e, p); });
    r.get("keep_per_plane", c.constellation.keep_per_plane);
    r.finish();
  }

  c.ground_stations = parse_array<orbit::GroundStation>(
      root.child("ground_stations"), "config.ground_stations",
      [](const json& e, const std::string& p) { return parse_gs(e, p); });

  if (const json* pj = root.child("ps")) {
    ObjectReader r(*pj, "config.ps");
    const bool gs = r.has("ground_station");
    const bool sat = r.has("satellite");
    if (gs == sat) throw ConfigError("config.ps: specify exactly one of 'ground_station' or 'satellite'");
    if (gs) {
      c.ps.kind = PsConfig::Kind::ground_station;
      r.get("ground_station", c.ps.ground_station);
    } else {
      c.ps.kind = PsConfig::Kind::satellite;
      ObjectReader s(*r.child("satellite"), "config.ps.satellite");
      double alt = 2000.0, inc = 0.0, raan = 0.0, phase = 0.0;
      s.get("altitude_km", alt);
      s.get("inclination_deg", inc);
      s.get("raan_deg", raan);
      s.get("initial_phase_deg", phase);
      s.finish();
      c.ps.orbit = orbit::OrbitElements::from_altitude(alt, inc, raan, phase);
    }
    r.finish();
  }

  if (const json* lj = root.child("links")) {
    ObjectReader r(*lj, "config.links");
    r.get("grazing_altitude_km", c.links.grazing_altitude_km);
    r.get("intra_orbit_isl", c.links.intra_orbit_isl);
    r.get("inter_cluster_isl", c.links.inter_cluster_isl);
    r.get("greenwich_angle_deg", c.links.greenwich_angle_deg);
    r.get("step_s", c.links.step_s);
    r.get("refine_s", c.links.refine_s);
    r.finish();
  }

  if (const json* dj = root.child("delay")) {
    ObjectReader r(*dj, "config.delay");
    r.get("compute_time_s", c.delay.compute_time_s);
    r.get("isl_rate_bps", c.delay.isl_rate_bps);
    r.get("ps_sat_rate_bps", c.delay.ps_sat_rate_bps);
    r.get("gs_rate_bps", c.delay.gs_rate_bps);
    r.get("header_bits", c.delay.header_bits);
    r.get("propagation", c.delay.propagation);
    r.get("prediction_error", c.delay.prediction_error);
    r.finish();
  }

  if (const json* tj = root.child("task")) {
    ObjectReader r(*tj, "config.task");
    std::string kind = fl::to_string(c.task.kind);
    std::string partition = fl::to_string(c.task.partition);
    r.get("kind", kind);
    r.get("partition", partition);
    c.task.kind = fl::parse_task_kind(kind);
    c.task.partition = fl::parse_partition(partition);
    r.get("dimension", c.task.dimension);
    r.get("batch_size", c.task.batch_size);
    r.get("learning_rate", c.task.learning_rate);
    r.get("local_steps", c.task.local_steps);
    r.get("samples_per_client", c.task.samples_per_client);
    r.get("test_samples", c.task.test_samples);
    r.get("class_separation", c.task.class_separation);
    r.get("class_shift", c.task.class_shift);
    r.get("mode_angle_deg", c.task.mode_angle_deg);
    r.get("feature_offset", c.task.feature_offset);
    r.get("noise", c.task.noise);
    r.get("condition", c.task.condition);
    r.finish();
  }

  if (const json* sj = root.child("strategy")) {
    ObjectReader r(*sj, "config.strategy");
    r.get("fedasync_alpha", c.strategy.fedasync_alpha);
    r.get("fedasync_exponent", c.strategy.fedasync_exponent);
    r.get("sync_policy", c.strategy.sync_policy);
    r.get("deadline_s", c.strategy.deadline_s);
    r.get("isl_forwarding", c.strategy.isl_forwarding);
    r.get("sink_margin_s", c.strategy.sink_margin_s);
    r.get("missing_cluster", c.strategy.missing_cluster);
    r.get("missing_cluster_timeout_s", c.strategy.missing_cluster_timeout_s);
    r.finish();
  }

  if (const json* rj = root.child("run")) {
    ObjectReader r(*rj, "config.run");
    r.get("horizon_s", c.run.horizon_s);
    std::size_t seed = c.run.seed;
    r.get("seed", seed);
    c.run.seed = seed;
    if (const json* seeds = r.child("seeds")) {
      if (!seeds->is_array()) throw ConfigError("config.run.seeds: expected an array");
      for (const auto& s : *seeds) {
        if (!s.is_number_unsigned()) throw ConfigError("config.run.seeds: expected non-negative integers");
        c.run.seeds.push_back(s.get<std::uint64_t>());
      }
    }
    if (const json* strategies = r.child("strategies")) {
      if (!strategies->is_array()) throw ConfigError("config.run.strategies: expected an array");
      for (const auto& s : *strategies) {
        if (!s.is_string()) throw ConfigError("config.run.strategies: expected strings");
        c.run.strategies.push_back(s.get<std::string>());
      }
    }
    r.get("eval_interval_s", c.run.eval_interval_s);
    r.get("target_accuracy", c.run.target_accuracy);
    r.finish();
  }

  if (const json* thj = root.child("thresholds")) {
    ObjectReader r(*thj, "config.thresholds");
    r.get("duty_cycle", c.thresholds.duty_cycle);
    r.get("max_gap_s", c.thresholds.max_gap_s);
    r.finish();
  }
  c.thresholds.inter_cluster_links = c.links.inter_cluster_isl;

  root.finish();
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

json to_json(const ScenarioConfig& c) {
  json walkers = json::array();
  for (const auto& w : c.constellation.walkers) {
    walkers.push_back({{"kind", w.kind == orbit::WalkerKind::star ? "star" : "delta"},
                       {"inclination_deg", w.inclination_deg},
                       {"total", w.total},
                       {"planes", w.planes},
                       {"phasing", w.phasing},
                       {"altitude_km", w.altitude_km}});
  }
  json gss = json::array();
  for (const auto& gs : c.ground_stations) {
    gss.push_back({{"name", gs.name},
                   {"latitude_deg", gs.latitude_deg},
                   {"longitude_deg", gs.longitude_deg},
                   {"altitude_km", gs.altitude_km},
                   {"min_elevation_deg", gs.min_elevation_deg}});
  }
  json ps;
  if (c.ps.kind == PsConfig::Kind::ground_station) {
    ps = {{"ground_station", c.ps.ground_station}};
  } else {
    ps = {{"satellite",
           {{"altitude_km", c.ps.orbit.altitude_km()},
            {"inclination_deg", c.ps.orbit.inclination_deg},
            {"raan_deg", c.ps.orbit.raan_deg},
            {"initial_phase_deg", c.ps.orbit.initial_phase_deg}}}};
  }
  return {
      {"name", c.name},
      {"constellation", {{"walkers", walkers}, {"keep_per_plane", c.constellation.keep_per_plane}}},
      {"ground_stations", gss},
      {"ps", ps},
      {"links",
       {{"grazing_altitude_km", c.links.grazing_altitude_km},
        {"intra_orbit_isl", c.links.intra_orbit_isl},
        {"inter_cluster_isl", c.links.inter_cluster_isl},
        {"greenwich_angle_deg", c.links.greenwich_angle_deg},
        {"step_s", c.links.step_s},
        {"refine_s", c.links.refine_s}}},
      {"delay",
       {{"compute_time_s", c.delay.compute_time_s},
        {"isl_rate_bps", c.delay.isl_rate_bps},
        {"ps_sat_rate_bps", c.delay.ps_sat_rate_bps},
        {"gs_rate_bps", c.delay.gs_rate_bps},
        {"header_bits", c.delay.header_bits},
        {"propagation", c.delay.propagation},
        {"prediction_error", c.delay.prediction_error}}},
      {"task",
       {{"kind", fl::to_string(c.task.kind)},
        {"dimension", c.task.dimension},
        {"batch_size", c.task.batch_size},
        {"learning_rate", c.task.learning_rate},
        {"local_steps", c.task.local_steps},
        {"partition", fl::to_string(c.task.partition)},
        {"samples_per_client", c.task.samples_per_client},
        {"test_samples", c.task.test_samples},
        {"class_separation", c.task.class_separation},
        {"class_shift", c.task.class_shift},
        {"mode_angle_deg", c.task.mode_angle_deg},
        {"feature_offset", c.task.feature_offset},
        {"noise", c.task.noise},
        {"condition", c.task.condition}}},
      {"strategy",
       {{"fedasync_alpha", c.strategy.fedasync_alpha},
        {"fedasync_exponent", c.strategy.fedasync_exponent},
        {"sync_policy", c.strategy.sync_policy},
        {"deadline_s", c.strategy.deadline_s},
        {"isl_forwarding", c.strategy.isl_forwarding},
        {"sink_margin_s", c.strategy.sink_margin_s},
        {"missing_cluster", c.strategy.missing_cluster},
        {"missing_cluster_timeout_s", c.strategy.missing_cluster_timeout_s}}},
      {"run",
       {{"horizon_s", c.run.horizon_s},
        {"seed", c.run.seed},
        {"seeds", c.run.seeds},
        {"strategies", c.run.strategies},
        {"eval_interval_s", c.run.eval_interval_s},
        {"target_accuracy", c.run.target_accuracy}}},
      {"thresholds", {{"duty_cycle", c.thresholds.duty_cycle}, {"max_gap_s", c.thresholds.max_gap_s}}},
  };
}

}  // namespace satfl
