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

#include "satfl/trace.hpp"

#include <map>

#include "satfl/csv.hpp"

namespace satfl {

std::string to_string(TraceEvent e) {
  switch (e) {
    case TraceEvent::round_start: return "round-start";
    case TraceEvent::round_complete: return "round-complete";
    case TraceEvent::route_plan: return "route-plan";
    case TraceEvent::sink_complete: return "sink-complete";
    case TraceEvent::transfer_start: return "transfer-start";
    case TraceEvent::transfer_done: return "transfer-done";
    case TraceEvent::transfer_abort: return "transfer-abort";
    case TraceEvent::transfer_stalled: return "transfer-stalled";
    case TraceEvent::window_open: return "window-open";
    case TraceEvent::compute_done: return "compute-done";
    case TraceEvent::update_produced: return "update-produced";
    case TraceEvent::update_dropped: return "update-dropped";
    case TraceEvent::ps_apply: return "ps-apply";
    case TraceEvent::decision: return "decision";
    case TraceEvent::horizon_exhausted: return "horizon-exhausted";
    case TraceEvent::eval: return "eval";
  }
  return "unknown";
}

std::string to_string(Payload p) {
  switch (p) {
    case Payload::none: return "";
    case Payload::model: return "model";
    case Payload::update: return "update";
    case Payload::aggregate: return "aggregate";
  }
  return "";
}

void write_trace_csv(std::ostream& out, std::span<const TraceRecord> trace) {
  csv::Writer w(out);
  w.row({"seq", "time_s", "event", "node", "peer", "payload", "link", "bits", "version", "round", "detail"});
  for (const auto& r : trace) {
    w.row({std::to_string(r.seq), csv::num(r.time, 6), to_string(r.event), r.node, r.peer,
           to_string(r.payload), r.has_link ? to_string(r.link) : "", csv::num(r.bits, 0),
           std::to_string(r.version), std::to_string(r.round), r.detail});
  }
}

CommSummary account(std::span<const TraceRecord> trace, const std::string& ps) {
  CommSummary s;
  std::map<std::uint64_t, std::uint64_t> in_degree;
  std::map<std::uint64_t, std::uint64_t> scheduled;
  std::vector<std::uint64_t> completed;
  for (const auto& r : trace) {
    if (r.event == TraceEvent::round_start) {
      const auto at = r.detail.find("scheduled=");
      if (at != std::string::npos) scheduled[r.round] = std::stoull(r.detail.substr(at + 10));
      continue;
    }
    if (r.event == TraceEvent::round_complete) {
      completed.push_back(r.round);
      continue;
    }
    if (r.event != TraceEvent::transfer_done || !r.has_link) continue;
    const auto li = static_cast<std::size_t>(r.link);
    ++s.messages[li];
    s.bits[li] += r.bits;
    if (r.link == LinkClass::ring) {
      if (r.payload == Payload::model) {
        ++s.ring_model_transmissions;
      } else {
        ++s.ring_update_transmissions;
      }
    }
    if (r.peer == ps && (r.payload == Payload::update || r.payload == Payload::aggregate)) {
      ++s.ps_messages;
      ++in_degree[r.round];
    }
  }
  for (std::uint64_t round : completed) {
    s.ps_in_degree.push_back(in_degree[round]);
    s.round_scheduled.push_back(scheduled[round]);
  }
  return s;
}

}  // namespace satfl
