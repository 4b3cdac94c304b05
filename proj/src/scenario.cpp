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

#include "satfl/scenario.hpp"

#include <cmath>

#include "satfl/error.hpp"

namespace satfl {

std::string to_string(StrategyKind s) {
  switch (s) {
    case StrategyKind::fedavg_sync:
      return "fedavg-sync";
    case StrategyKind::fedavg_isl_aggregation:
      return "fedavg-isl-aggregation";
    case StrategyKind::fedasync:
      return "fedasync";
    case StrategyKind::fedsat:
      return "fedsat";
    case StrategyKind::fedsat_sched:
      return "fedsat-sched";
  }
  return "unknown";
}

StrategyKind parse_strategy(const std::string& s) {
  for (StrategyKind k : all_strategies()) {
    if (to_string(k) == s) return k;
  }
  throw ConfigError("unknown strategy '" + s + "'");
}

std::vector<StrategyKind> all_strategies() {
  return {StrategyKind::fedavg_sync, StrategyKind::fedavg_isl_aggregation, StrategyKind::fedasync,
          StrategyKind::fedsat, StrategyKind::fedsat_sched};
}

void ScenarioConfig::validate() const {
  if (constellation.walkers.empty()) throw ConfigError("no satellites: constellation has no walker specs");
  for (const auto& w : constellation.walkers) w.validate();
  if (constellation.keep_per_plane < 0) throw ConfigError("constellation: keep_per_plane must be >= 0");
  for (const auto& gs : ground_stations) gs.validate();
  if (ps.kind == PsConfig::Kind::ground_station && ps.ground_station >= ground_stations.size()) {
    throw ConfigError("ps: ground_station index " + std::to_string(ps.ground_station) +
                      " out of range (" + std::to_string(ground_stations.size()) + " configured)");
  }
  if (!(links.step_s > 0.0)) throw ConfigError("links: step_s must be positive");
  if (!(links.refine_s > 0.0)) throw ConfigError("links: refine_s must be positive");
  if (!(delay.header_bits >= 0.0)) throw ConfigError("delay: header_bits must be >= 0");
  task.validate();
  if (!(strategy.fedasync_alpha > 0.0 && strategy.fedasync_alpha <= 1.0)) {
    throw ConfigError("strategy: fedasync_alpha must lie in (0, 1]");
  }
  if (!(strategy.fedasync_exponent >= 0.0)) throw ConfigError("strategy: fedasync_exponent must be >= 0");
  if (strategy.isl_forwarding != "aggregate" && strategy.isl_forwarding != "unicast") {
    throw ConfigError("strategy: isl_forwarding must be 'aggregate' or 'unicast'");
  }
  if (strategy.missing_cluster != "wait" && strategy.missing_cluster != "proceed") {
    throw ConfigError("strategy: missing_cluster must be 'wait' or 'proceed'");
  }
  if (!(strategy.sink_margin_s >= 0.0)) throw ConfigError("strategy: sink_margin_s must be >= 0");
  if (!(strategy.missing_cluster_timeout_s > 0.0)) {
    throw ConfigError("strategy: missing_cluster_timeout_s must be positive");
  }
  if (strategy.sync_policy != "greedy" && strategy.sync_policy != "deadline") {
    throw ConfigError("strategy: sync_policy must be 'greedy' or 'deadline'");
  }
  if (strategy.sync_policy == "deadline" && !(strategy.deadline_s > 0.0)) {
    throw ConfigError("strategy: deadline policy needs deadline_s > 0");
  }
  if (!(run.horizon_s >= 0.0)) throw ConfigError("run: horizon_s must be >= 0");
  if (!(run.eval_interval_s > 0.0)) throw ConfigError("run: eval_interval_s must be positive");
  for (const auto& s : run.strategies) parse_strategy(s);
  if (!(thresholds.duty_cycle >= 0.0 && thresholds.duty_cycle <= 1.0)) {
    throw ConfigError("thresholds: duty_cycle must lie in [0, 1]");
  }
  if (!(thresholds.max_gap_s >= 0.0)) throw ConfigError("thresholds: max_gap_s must be >= 0");
}

contact::LinkRules Scenario::link_rules() const {
  return contact::LinkRules{config.links.grazing_altitude_km, config.links.step_s, config.links.refine_s};
}

Scenario build_scenario(const ScenarioConfig& config) {
  config.validate();
  Scenario sc;
  sc.config = config;
  sc.config.thresholds.inter_cluster_links = config.links.inter_cluster_isl;

  std::vector<contact::Node> nodes;
  int plane_counter = 0;
  int common_per_plane = -1;
  for (const auto& w : config.constellation.walkers) {
    const auto sats = orbit::generate_walker(w);
    const int per_plane = w.per_plane();
    const int keep = config.constellation.keep_per_plane > 0
                         ? std::min(config.constellation.keep_per_plane, per_plane)
                         : per_plane;
    for (int q = 0; q < w.planes; ++q) {
      contact::Cluster cluster;
      cluster.plane = plane_counter++;
      for (int j = 0; j < keep; ++j) {
        const auto id = NodeId::sat(static_cast<std::uint32_t>(sc.clients.size()));
        const auto& elem = sats[static_cast<std::size_t>(q * per_plane + j)];
        nodes.push_back({id, elem});
        sc.clients.push_back(id);
        cluster.members.push_back(id);
      }
      sc.clusters.push_back(std::move(cluster));
    }
    if (common_per_plane == -1) {
      common_per_plane = keep;
    } else if (common_per_plane != keep) {
      common_per_plane = 0;
    }
    if (orbit::OrbitElements::from_altitude(w.altitude_km, w.inclination_deg, 0, 0).outside_leo_band()) {
      sc.warnings.push_back("walker altitude " + std::to_string(w.altitude_km) +
                            " km lies outside the 500-2000 km LEO band");
    }
  }
  if (sc.clients.empty()) throw ConfigError("no satellites");
  sc.per_plane = common_per_plane;

  for (std::size_t i = 0; i < config.ground_stations.size(); ++i) {
    nodes.push_back({NodeId::gs(static_cast<std::uint32_t>(i)), config.ground_stations[i]});
  }
  if (config.ps.kind == PsConfig::Kind::ground_station) {
    sc.ps = NodeId::gs(static_cast<std::uint32_t>(config.ps.ground_station));
    sc.ps_link = LinkClass::gs;
  } else {
    sc.ps = NodeId::sat(static_cast<std::uint32_t>(sc.clients.size()));
    sc.ps_link = LinkClass::ps;
    nodes.push_back({sc.ps, config.ps.orbit});
    if (config.ps.orbit.outside_leo_band()) {
      sc.warnings.push_back("PS orbit altitude lies outside the 500-2000 km LEO band");
    }
  }

  contact::NodeCatalog catalog(std::move(nodes), orbit::EarthFrame{config.links.greenwich_angle_deg});
  std::vector<contact::ContactWindow> windows;
  const double horizon = config.run.horizon_s;
  if (horizon > 0.0) {
    std::vector<contact::NodePair> pairs;
    for (NodeId c : sc.clients) pairs.emplace_back(c, sc.ps);
    windows = contact::compute_windows(catalog, pairs, sc.link_rules(), horizon, config.links.step_s);
  }
  sc.graph = contact::TemporalContactGraph(std::move(catalog), sc.clusters, std::move(windows), horizon);

  sc.delay.compute_time_s = config.delay.compute_time_s;
  sc.delay.isl_rate_bps = config.delay.isl_rate_bps;
  sc.delay.ps_sat_rate_bps = config.delay.ps_sat_rate_bps;
  sc.delay.gs_rate_bps = config.delay.gs_rate_bps;
  sc.delay.model_bits = 64.0 * static_cast<double>(config.task.model_dimension()) + config.delay.header_bits;
  sc.delay.propagation = config.delay.propagation;
  sc.delay.prediction_error = config.delay.prediction_error;
  sc.delay.validate();
  return sc;
}

std::string incompatibility(const Scenario& scenario, StrategyKind strategy) {
  if (strategy == StrategyKind::fedavg_isl_aggregation && !scenario.config.links.intra_orbit_isl) {
    return "fedavg-isl-aggregation requires intra-orbit ISLs but the scenario has none";
  }
  if (scenario.config.task.partition == fl::Partition::paper_non_iid &&
      (scenario.clients.size() != 40 || scenario.clusters.size() != 5 || scenario.per_plane != 8)) {
    return "paper-non-iid partition requires 40 satellites in 5 planes of 8";
  }
  return {};
}

}  // namespace satfl
