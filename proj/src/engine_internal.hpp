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

// Engine services shared by the strategy implementations.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "satfl/cluster_aggregation.hpp"
#include "satfl/engine.hpp"
#include "satfl/event_queue.hpp"
#include "satfl/task.hpp"

namespace satfl::sim::detail {

/// Aux tag of window-open events that wake an idle client rather than a transfer.
inline constexpr std::uint64_t kClientWake = 1;

struct Message {
  Payload kind = Payload::none;
  fl::ModelVector model;
  fl::ClientUpdate update;
  std::vector<double> client_base;  // model the update was trained from
  isl::PartialAggregate aggregate;
  std::vector<std::uint64_t> uids;  // updates carried
};

struct Transfer {
  std::uint64_t id = 0;
  NodeId from;
  NodeId to;
  LinkClass link = LinkClass::gs;
  Message msg;
  std::uint64_t round = 0;
  bool snapshot_global = false;  // PS download: carry the model current at start
  double started = 0.0;
  int attempts = 0;
};

struct Produced {
  std::uint64_t uid = 0;
  fl::ClientUpdate update;
};

class Engine;

class Strategy {
 public:
  virtual ~Strategy() = default;
  virtual void start(Engine& e) = 0;
  virtual void on_transfer_done(Engine& e, Transfer& t) = 0;
  virtual void on_compute_done(Engine& e, std::uint64_t id) = 0;
  virtual void on_wake(Engine&, std::uint64_t) {}
  virtual void on_ps_apply(Engine&, std::uint64_t, std::uint64_t) {}
};

std::unique_ptr<Strategy> make_sync_strategy(const Engine& e);
std::unique_ptr<Strategy> make_async_strategy(const Engine& e, StrategyKind kind);
std::unique_ptr<Strategy> make_isl_strategy(const Engine& e);

class Engine {
 public:
  Engine(const Scenario& scenario, const RunOptions& options);
  RunResult run();

  double now() const { return queue_.now(); }
  double horizon() const { return horizon_; }
  void schedule(double t, EventKind kind, std::uint64_t id, std::uint64_t aux = 0);

  const Scenario& scenario() const { return sc_; }
  const fl::TaskSpec& task() const { return sc_.config.task; }
  const contact::TemporalContactGraph& graph() const { return sc_.graph; }
  NodeId ps() const { return sc_.ps; }
  std::size_t client_count() const { return sc_.clients.size(); }
  double samples(std::size_t k) const;
  double total_samples() const { return total_samples_; }
  double compute_s() const { return sc_.delay.compute_time_s; }
  double predicted_compute_s() const { return sc_.delay.predicted_compute_s(); }
  LinkClass link_between(NodeId a, NodeId b) const;
  /// Serialization plus propagation over the longest range at which the
  /// pair can still see each other (ring links: their fixed separation).
  double estimate_transfer_s(NodeId a, NodeId b) const;

  const fl::ModelVector& global() const { return global_; }
  void set_global(fl::ModelVector m);
  Produced train(std::size_t client, const fl::ModelVector& base);

  /// Starts as soon as a window is open; aborted and retried if cut off.
  std::uint64_t send(NodeId from, NodeId to, Message msg, std::uint64_t round, bool snapshot_global = false);

  void retire(std::span<const std::uint64_t> uids, bool aggregated);
  void drop(std::span<const std::uint64_t> uids, NodeId where, const std::string& reason);

  void record(TraceEvent ev, NodeId node, std::optional<NodeId> peer, std::uint64_t round,
              const std::string& detail = {});
  RunStats& stats() { return stats_; }

 private:
  void attempt(std::uint64_t id);
  void on_transfer_done(std::uint64_t id);
  void evaluate();
  void record_transfer(TraceEvent ev, const Transfer& t, const std::string& detail = {});

  const Scenario& sc_;
  RunOptions opt_;
  double horizon_ = 0.0;
  EventQueue queue_;
  std::unique_ptr<Strategy> strategy_;

  fl::SyntheticData data_;
  std::vector<fl::Dataset> client_data_;
  double total_samples_ = 0.0;
  fl::ModelVector global_;
  std::vector<std::uint64_t> train_count_;

  std::map<std::uint64_t, Transfer> transfers_;
  std::uint64_t next_transfer_ = 0;
  std::set<std::uint64_t> live_updates_;
  std::uint64_t next_uid_ = 0;
  std::uint64_t current_event_ = 0;

  double bits_[3] = {0.0, 0.0, 0.0};
  std::uint64_t ps_msgs_ = 0;
  std::vector<MetricsRow> metrics_;
  std::vector<TraceRecord> trace_;
  RunStats stats_;
};

}  // namespace satfl::sim::detail
