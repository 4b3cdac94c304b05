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

// Resolved scenario configuration and the immutable geometry built from it.

#include <cstdint>
#include <string>
#include <vector>

#include "satfl/contact_graph.hpp"
#include "satfl/delay_model.hpp"
#include "satfl/orbit.hpp"
#include "satfl/task.hpp"

namespace satfl {

using contact::NodeId;

enum class StrategyKind { fedavg_sync, fedavg_isl_aggregation, fedasync, fedsat, fedsat_sched };

std::string to_string(StrategyKind s);
StrategyKind parse_strategy(const std::string& s);
std::vector<StrategyKind> all_strategies();

struct ConstellationConfig {
  std::vector<orbit::WalkerSpec> walkers;
  int keep_per_plane = 0;  // 0 keeps every satellite; k keeps the first k of each plane
};

struct PsConfig {
  enum class Kind { ground_station, satellite };
  Kind kind = Kind::ground_station;
  std::size_t ground_station = 0;
  orbit::OrbitElements orbit;
};

struct LinkConfig {
  double grazing_altitude_km = 0.0;
  bool intra_orbit_isl = false;
  bool inter_cluster_isl = false;
  double greenwich_angle_deg = 0.0;
  double step_s = 10.0;
  double refine_s = 0.1;
};

struct DelayConfig {
  double compute_time_s = 60.0;
  double isl_rate_bps = 20e6;
  double ps_sat_rate_bps = 20e6;
  double gs_rate_bps = 5e6;
  double header_bits = 8192.0;
  bool propagation = true;
  double prediction_error = 0.0;
};

struct StrategyConfig {
  double fedasync_alpha = 0.6;
  double fedasync_exponent = 0.5;
  std::string sync_policy = "greedy";
  double deadline_s = 0.0;
  std::string isl_forwarding = "aggregate";  // or "unicast"
  double sink_margin_s = 60.0;
  std::string missing_cluster = "wait";      // or "proceed"
  double missing_cluster_timeout_s = 3600.0;
};

struct RunConfig {
  double horizon_s = 86400.0;
  std::uint64_t seed = 1;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> strategies;
  double eval_interval_s = 600.0;
  double target_accuracy = 0.8;
};

struct ScenarioConfig {
  std::string name = "scenario";
  ConstellationConfig constellation;
  std::vector<orbit::GroundStation> ground_stations;
  PsConfig ps;
  LinkConfig links;
  DelayConfig delay;
  fl::TaskSpec task;
  StrategyConfig strategy;
  RunConfig run;
  contact::Thresholds thresholds;

  /// Throws ConfigError on the first inconsistency.
  void validate() const;
};

struct Scenario {
  ScenarioConfig config;
  std::vector<NodeId> clients;  // plane-major
  std::vector<contact::Cluster> clusters;
  int per_plane = 0;
  NodeId ps;
  LinkClass ps_link = LinkClass::gs;
  contact::TemporalContactGraph graph;
  DelayModel delay;
  std::vector<std::string> warnings;

  contact::LinkRules link_rules() const;
};

/// Builds nodes, clusters and all client-to-PS contact windows over the run horizon.
Scenario build_scenario(const ScenarioConfig& config);

/// Strategy/scenario compatibility; empty string if compatible.
std::string incompatibility(const Scenario& scenario, StrategyKind strategy);

}  // namespace satfl
