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

// Client scheduling for synchronous rounds under sporadic connectivity, and
// the predictive idle/download decision used by FedSat with scheduling.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "satfl/contact_graph.hpp"

namespace satfl::fl {

using contact::Interval;

/// Start of the earliest transfer of `duration` beginning at or after `from`
/// that fits entirely inside one window.
std::optional<double> earliest_fit(std::span<const Interval> windows, double from, double duration);

/// Anything that talks to the PS as one unit: a satellite, or a cluster whose
/// windows are the union of its members'.
struct SyncUnit {
  std::size_t id = 0;
  std::vector<Interval> windows;
  double download_s = 0.0;
  double upload_s = 0.0;
};

struct UnitProjection {
  std::size_t unit = 0;
  bool feasible = false;
  double download_start = 0.0;
  double download_end = 0.0;
  double ready = 0.0;  // local update computed
  double upload_start = 0.0;
  double upload_end = 0.0;
};

UnitProjection project_unit(const SyncUnit& unit, double t, double compute_time, double horizon);

class SyncPolicy {
 public:
  virtual ~SyncPolicy() = default;
  virtual std::string name() const = 0;
  /// Indices into `projections` of the units to schedule.
  virtual std::vector<std::size_t> select(std::span<const UnitProjection> projections,
                                          double t) const = 0;
};

/// Every unit that can return its update before the horizon.
class GreedyPolicy final : public SyncPolicy {
 public:
  std::string name() const override { return "greedy"; }
  std::vector<std::size_t> select(std::span<const UnitProjection> projections,
                                  double t) const override;
};

/// Units whose update returns within `deadline_s` of the round start. If none
/// does, the feasible units with the earliest return.
class DeadlinePolicy final : public SyncPolicy {
 public:
  explicit DeadlinePolicy(double deadline_s) : deadline_s_(deadline_s) {}
  std::string name() const override { return "deadline"; }
  std::vector<std::size_t> select(std::span<const UnitProjection> projections,
                                  double t) const override;

 private:
  double deadline_s_;
};

std::unique_ptr<SyncPolicy> make_policy(const std::string& name, double deadline_s);

struct RoundPlan {
  std::vector<UnitProjection> scheduled;
  double completion = 0.0;  // latest upload end among scheduled units
};

/// Throws HorizonExhaustedError when the policy selects nothing.
RoundPlan schedule_sync_round(double t, std::span<const SyncUnit> units, double compute_time,
                              double horizon, const SyncPolicy& policy);

enum class ClientDecision { download_now, idle_until_next };
std::string to_string(ClientDecision d);

/// Idle until the next contact iff that contact is long enough to download,
/// train and upload within it. No next contact means download now.
ClientDecision predictive_schedule(const std::optional<Interval>& next_window, double compute_time,
                                   double download_s, double upload_s);

}  // namespace satfl::fl
