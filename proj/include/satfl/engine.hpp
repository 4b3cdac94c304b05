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

// Deterministic discrete-event simulation of one FL strategy on a scenario.

#include <cstdint>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "satfl/scenario.hpp"
#include "satfl/trace.hpp"

namespace satfl::sim {

struct MetricsRow {
  double sim_time_s = 0.0;
  std::uint64_t version = 0;
  double loss = 0.0;      // mean training loss over all clients' data
  double accuracy = 0.0;  // held-out test set; NaN for regression
  double bits_gs = 0.0;
  double bits_ring = 0.0;
  double bits_ps = 0.0;
  std::uint64_t ps_msgs = 0;  // updates and aggregates received by the PS
};

struct RunOptions {
  StrategyKind strategy = StrategyKind::fedavg_sync;
  std::uint64_t seed = 1;
  double horizon_s = -1.0;  // negative: use the scenario's horizon
};

struct RunStats {
  std::uint64_t events = 0;
  std::uint64_t rounds_completed = 0;
  std::vector<double> round_completion_s;
  std::uint64_t updates_produced = 0;
  std::uint64_t updates_applied = 0;     // applied individually at the PS
  std::uint64_t updates_aggregated = 0;  // covered by a delivered partial aggregate
  std::uint64_t updates_dropped = 0;
  std::uint64_t transfers_completed = 0;
  std::uint64_t transfers_aborted = 0;
  std::uint64_t transfers_stalled = 0;
  std::uint64_t sink_fallbacks = 0;
  std::uint64_t sink_holds = 0;
  std::vector<std::uint64_t> staleness;  // per asynchronous apply
  double time_to_target_s = std::numeric_limits<double>::quiet_NaN();  // first eval at target
  std::uint64_t final_version = 0;
  double final_loss = 0.0;
  double final_accuracy = 0.0;
  std::vector<double> final_params;
};

struct RunResult {
  std::vector<MetricsRow> metrics;
  std::vector<TraceRecord> trace;
  RunStats stats;
};

/// Training and test data of a run with this seed.
fl::SyntheticData run_data(const Scenario& scenario, std::uint64_t seed);

/// Throws ConfigError if the strategy does not fit the scenario.
RunResult run(const Scenario& scenario, const RunOptions& options);

/// Header: sim_time_s, version, loss, accuracy, bits_gs, bits_ring, bits_ps, ps_msgs.
void write_metrics_csv(std::ostream& out, std::span<const MetricsRow> rows);

}  // namespace satfl::sim
