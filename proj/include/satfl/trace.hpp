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

// Structured event trace and the communication accounting derived from it.

#include <array>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "satfl/delay_model.hpp"

namespace satfl {

enum class TraceEvent {
  round_start,
  round_complete,
  route_plan,
  sink_complete,
  transfer_start,
  transfer_done,
  transfer_abort,
  transfer_stalled,
  window_open,
  compute_done,
  update_produced,
  update_dropped,
  ps_apply,
  decision,
  horizon_exhausted,
  eval,
};

std::string to_string(TraceEvent e);

enum class Payload { none, model, update, aggregate };
std::string to_string(Payload p);

struct TraceRecord {
  std::uint64_t seq = 0;
  double time = 0.0;
  TraceEvent event = TraceEvent::eval;
  std::string node;
  std::string peer;
  Payload payload = Payload::none;
  bool has_link = false;
  LinkClass link = LinkClass::gs;
  double bits = 0.0;
  std::uint64_t version = 0;
  std::uint64_t round = 0;
  std::string detail;
};

/// Columns: seq, time_s, event, node, peer, payload, link, bits, version, round, detail.
void write_trace_csv(std::ostream& out, std::span<const TraceRecord> trace);

struct CommSummary {
  std::array<std::uint64_t, 3> messages{};  // indexed by LinkClass
  std::array<double, 3> bits{};
  std::uint64_t ring_update_transmissions = 0;  // updates and partial aggregates
  std::uint64_t ring_model_transmissions = 0;   // global model relays
  std::uint64_t ps_messages = 0;                // updates/aggregates received by the PS
  std::vector<std::uint64_t> ps_in_degree;      // per completed round, in round order
  std::vector<std::uint64_t> round_scheduled;   // units scheduled at round start, same order
};

/// Totals over completed transfers; `ps` is the PS node label.
CommSummary account(std::span<const TraceRecord> trace, const std::string& ps);

}  // namespace satfl
