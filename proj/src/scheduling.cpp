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

#include "satfl/scheduling.hpp"

#include <algorithm>
#include <limits>

#include "satfl/delay_model.hpp"
#include "satfl/error.hpp"
#include "satfl/orbit.hpp"

namespace satfl {

std::string to_string(LinkClass c) {
  switch (c) {
    case LinkClass::gs:
      return "gs";
    case LinkClass::ring:
      return "ring";
    case LinkClass::ps:
      return "ps";
  }
  return "unknown";
}

double DelayModel::rate(LinkClass c) const {
  switch (c) {
    case LinkClass::gs:
      return gs_rate_bps;
    case LinkClass::ring:
      return isl_rate_bps;
    case LinkClass::ps:
      return ps_sat_rate_bps;
  }
  return gs_rate_bps;
}

double DelayModel::propagation_s(double distance_km) const {
  return propagation ? distance_km / orbit::kSpeedOfLightKmS : 0.0;
}

void DelayModel::validate() const {
  if (!(compute_time_s >= 0.0)) throw ConfigError("delay: compute_time must be >= 0");
  if (!(isl_rate_bps > 0.0) || !(ps_sat_rate_bps > 0.0) || !(gs_rate_bps > 0.0)) {
    throw ConfigError("delay: link rates must be positive");
  }
  if (!(model_bits >= 0.0)) throw ConfigError("delay: model size must be >= 0");
  if (!(prediction_error > -1.0)) throw ConfigError("delay: prediction_error must exceed -1");
}

}  // namespace satfl

namespace satfl::fl {

std::optional<double> earliest_fit(std::span<const Interval> windows, double from, double duration) {
  for (const auto& w : windows) {
    const double start = std::max(from, w.start);
    if (start + duration <= w.end) return start;
  }
  return std::nullopt;
}

UnitProjection project_unit(const SyncUnit& unit, double t, double compute_time, double horizon) {
  UnitProjection p;
  p.unit = unit.id;
  const auto down = earliest_fit(unit.windows, t, unit.download_s);
  if (!down) return p;
  p.download_start = *down;
  p.download_end = *down + unit.download_s;
  p.ready = p.download_end + compute_time;
  const auto up = earliest_fit(unit.windows, p.ready, unit.upload_s);
  if (!up) return p;
  p.upload_start = *up;
  p.upload_end = *up + unit.upload_s;
  p.feasible = p.upload_end <= horizon;
  return p;
}

std::vector<std::size_t> GreedyPolicy::select(std::span<const UnitProjection> projections,
                                              double) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < projections.size(); ++i) {
    if (projections[i].feasible) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> DeadlinePolicy::select(std::span<const UnitProjection> projections,
                                                double t) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < projections.size(); ++i) {
    if (projections[i].feasible && projections[i].upload_end <= t + deadline_s_) out.push_back(i);
  }
  if (!out.empty()) return out;
  // Nobody meets the deadline: keep the round alive with the earliest finishers.
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : projections) {
    if (p.feasible) best = std::min(best, p.upload_end);
  }
  for (std::size_t i = 0; i < projections.size(); ++i) {
    if (projections[i].feasible && projections[i].upload_end == best) out.push_back(i);
  }
  return out;
}

std::unique_ptr<SyncPolicy> make_policy(const std::string& name, double deadline_s) {
  if (name == "greedy") return std::make_unique<GreedyPolicy>();
  if (name == "deadline") {
    if (!(deadline_s > 0.0)) throw ConfigError("deadline policy needs a positive deadline_s");
    return std::make_unique<DeadlinePolicy>(deadline_s);
  }
  throw ConfigError("unknown sync scheduling policy '" + name + "'");
}

RoundPlan schedule_sync_round(double t, std::span<const SyncUnit> units, double compute_time,
                              double horizon, const SyncPolicy& policy) {
  std::vector<UnitProjection> projections;
  projections.reserve(units.size());
  for (const auto& u : units) projections.push_back(project_unit(u, t, compute_time, horizon));
  const auto chosen = policy.select(projections, t);
  if (chosen.empty()) {
    throw HorizonExhaustedError("no unit can complete a round started at t=" + std::to_string(t) +
                                " before the horizon");
  }
  RoundPlan plan;
  plan.completion = t;
  for (std::size_t i : chosen) {
    plan.scheduled.push_back(projections[i]);
    plan.completion = std::max(plan.completion, projections[i].upload_end);
  }
  return plan;
}

std::string to_string(ClientDecision d) {
  return d == ClientDecision::idle_until_next ? "idle-until-next" : "download-now";
}

ClientDecision predictive_schedule(const std::optional<Interval>& next_window, double compute_time,
                                   double download_s, double upload_s) {
  if (!next_window) return ClientDecision::download_now;
  return next_window->duration() >= download_s + compute_time + upload_s
             ? ClientDecision::idle_until_next
             : ClientDecision::download_now;
}

}  // namespace satfl::fl
