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

// FedAvg with in-network aggregation on intra-orbit rings. Each round the PS
// hands the global model to one gateway per plane, the ring relays it, and
// updates flow back along a shortest-path tree to a predicted sink that
// uploads a single partial aggregate (or, in unicast mode, every update).

#include <algorithm>
#include <map>
#include <sstream>
#include <vector>

#include "engine_internal.hpp"
#include "satfl/aggregation.hpp"
#include "satfl/csv.hpp"
#include "satfl/error.hpp"
#include "satfl/scheduling.hpp"

namespace satfl::sim::detail {

namespace {

struct MemberState {
  bool own_ready = false;
  bool sent = false;
  fl::ModelVector base;
  fl::ClientUpdate own;
  std::uint64_t own_uid = 0;
  std::vector<isl::PartialAggregate> inbox;
  std::vector<std::uint64_t> inbox_uids;
  std::vector<fl::ClientUpdate> collected;  // unicast, at the sink only
  std::vector<std::uint64_t> collected_uids;
};

struct ClusterState {
  bool scheduled = false;
  isl::SinkChoice choice;
  isl::RoutePlan broadcast;  // tree rooted at the gateway
  std::map<NodeId, MemberState> members;
};

class IslStrategy final : public Strategy {
 public:
  explicit IslStrategy(const Engine& e)
      : unicast_(e.scenario().config.strategy.isl_forwarding == "unicast"),
        proceed_(e.scenario().config.strategy.missing_cluster == "proceed"),
        policy_(fl::make_policy(e.scenario().config.strategy.sync_policy,
                                e.scenario().config.strategy.deadline_s)) {
    const auto& clusters = e.scenario().clusters;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      for (NodeId m : clusters[c].members) cluster_of_[m] = c;
    }
  }

  void start(Engine& e) override { begin_round(e); }

  void on_transfer_done(Engine& e, Transfer& t) override {
    if (t.round != round_ || !open_) {
      e.drop(t.msg.uids, t.to, "late for round " + std::to_string(t.round));
      return;
    }
    if (t.to == e.ps()) {
      if (t.msg.kind == Payload::aggregate) {
        aggregates_.push_back(std::move(t.msg.aggregate));
      } else {
        updates_.push_back(std::move(t.msg.update));
      }
      uids_.insert(uids_.end(), t.msg.uids.begin(), t.msg.uids.end());
      ++received_;
      if (received_ == expected_) e.schedule(e.now(), EventKind::ps_apply, round_, 0);
      return;
    }
    const NodeId m = t.to;
    const std::size_t c = cluster_of_.at(m);
    auto& cs = clusters_.at(c);
    auto& ms = cs.members[m];
    switch (t.msg.kind) {
      case Payload::model:
        ms.base = t.msg.model;
        for (NodeId child : cs.broadcast.children(m)) {
          Message relay;
          relay.kind = Payload::model;
          relay.model = t.msg.model;
          e.send(m, child, std::move(relay), round_);
        }
        e.schedule(e.now() + e.compute_s(), EventKind::compute_done, (round_ << 32) | m.index);
        break;
      case Payload::aggregate:
        ms.inbox.push_back(std::move(t.msg.aggregate));
        ms.inbox_uids.insert(ms.inbox_uids.end(), t.msg.uids.begin(), t.msg.uids.end());
        try_forward(e, c, m);
        break;
      case Payload::update:
        if (m == cs.choice.sink) {
          ms.collected.push_back(std::move(t.msg.update));
          ms.collected_uids.insert(ms.collected_uids.end(), t.msg.uids.begin(), t.msg.uids.end());
          try_upload_unicast(e, c);
        } else {
          e.send(m, cs.choice.plan.parent.at(m), std::move(t.msg), round_);
        }
        break;
      case Payload::none: break;
    }
  }

  void on_compute_done(Engine& e, std::uint64_t id) override {
    if ((id >> 32) != round_ || !open_) return;
    const NodeId m = NodeId::sat(static_cast<std::uint32_t>(id & 0xffffffffu));
    const std::size_t c = cluster_of_.at(m);
    auto& cs = clusters_.at(c);
    auto& ms = cs.members[m];
    auto p = e.train(m.index, ms.base);
    if (unicast_) {
      if (m == cs.choice.sink) {
        ms.collected.push_back(std::move(p.update));
        ms.collected_uids.push_back(p.uid);
        try_upload_unicast(e, c);
      } else {
        Message msg;
        msg.kind = Payload::update;
        msg.update = std::move(p.update);
        msg.uids = {p.uid};
        e.send(m, cs.choice.plan.parent.at(m), std::move(msg), round_);
      }
      return;
    }
    ms.own = std::move(p.update);
    ms.own_uid = p.uid;
    ms.own_ready = true;
    try_forward(e, c, m);
  }

  void on_ps_apply(Engine& e, std::uint64_t round, std::uint64_t timeout) override {
    if (round != round_ || !open_) return;
    if (received_ < expected_) {
      if (!timeout) return;
      if (received_ == 0) {
        e.record(TraceEvent::ps_apply, e.ps(), std::nullopt, round_, "timeout;nothing received;waiting");
        return;
      }
      e.record(TraceEvent::ps_apply, e.ps(), std::nullopt, round_,
               "timeout;proceeding with " + std::to_string(received_) + " of " + std::to_string(expected_));
    }
    if (unicast_) {
      e.set_global(fl::fedavg_aggregate(e.global(), updates_));
      e.retire(uids_, false);
    } else {
      e.set_global(isl::deliver_to_ps(e.global(), aggregates_));
      e.retire(uids_, true);
    }
    e.record(TraceEvent::ps_apply, e.ps(), std::nullopt, round_,
             (unicast_ ? "updates=" : "aggregates=") + std::to_string(received_));
    e.record(TraceEvent::round_complete, e.ps(), std::nullopt, round_);
    ++e.stats().rounds_completed;
    e.stats().round_completion_s.push_back(e.now());
    ++round_;
    begin_round(e);
  }

 private:
  void try_forward(Engine& e, std::size_t c, NodeId m) {
    auto& cs = clusters_.at(c);
    auto& ms = cs.members[m];
    if (!ms.own_ready || ms.sent || ms.inbox.size() < cs.choice.plan.children(m).size()) return;
    Message msg;
    msg.kind = Payload::aggregate;
    msg.aggregate = isl::aggregate_and_forward(ms.own, ms.inbox);
    msg.uids = ms.inbox_uids;
    msg.uids.push_back(ms.own_uid);
    ms.sent = true;
    if (m == cs.choice.sink) {
      sink_complete(e, c);
      e.send(m, e.ps(), std::move(msg), round_);
    } else {
      e.send(m, cs.choice.plan.parent.at(m), std::move(msg), round_);
    }
  }

  void try_upload_unicast(Engine& e, std::size_t c) {
    auto& cs = clusters_.at(c);
    auto& ms = cs.members[cs.choice.sink];
    if (ms.sent || ms.collected.size() < e.scenario().clusters.at(c).size()) return;
    ms.sent = true;
    sink_complete(e, c);
    for (std::size_t i = 0; i < ms.collected.size(); ++i) {
      Message msg;
      msg.kind = Payload::update;
      msg.update = std::move(ms.collected[i]);
      msg.uids = {ms.collected_uids[i]};
      e.send(cs.choice.sink, e.ps(), std::move(msg), round_);
    }
  }

  void sink_complete(Engine& e, std::size_t c) {
    const auto& cs = clusters_.at(c);
    const NodeId sink = cs.choice.sink;
    const bool visible = e.graph().window_at(sink, e.ps(), e.now()).has_value();
    if (!visible) ++e.stats().sink_holds;
    e.record(TraceEvent::sink_complete, sink, e.ps(), round_,
             "plane=" + std::to_string(e.scenario().clusters.at(c).plane) +
                 ";predicted_s=" + csv::num(cs.choice.predicted_completion, 3) +
                 ";actual_s=" + csv::num(e.now(), 3) + (visible ? ";visible" : ";held"));
  }

  // Updates stranded inside the rings when a round closes early.
  void abandon(Engine& e) {
    for (auto& cs : clusters_) {
      for (auto& [node, ms] : cs.members) {
        if (ms.sent) continue;
        if (ms.own_ready) e.drop(std::span(&ms.own_uid, 1), node, "round closed");
        e.drop(ms.inbox_uids, node, "round closed");
        e.drop(ms.collected_uids, node, "round closed");
      }
    }
  }

  void begin_round(Engine& e) {
    abandon(e);
    const auto& sc = e.scenario();
    clusters_.assign(sc.clusters.size(), ClusterState{});
    aggregates_.clear();
    updates_.clear();
    uids_.clear();
    received_ = 0;
    expected_ = 0;
    open_ = false;

    // Every plane is a sync unit whose return is the predicted sink upload.
    std::vector<fl::UnitProjection> projections;
    std::vector<std::size_t> candidates;
    for (std::size_t c = 0; c < sc.clusters.size(); ++c) {
      const auto& cluster = sc.clusters[c];
      auto& cs = clusters_[c];
      isl::SinkTiming timing;
      timing.download_s = e.estimate_transfer_s(e.ps(), cluster.members.front());
      timing.upload_s = timing.download_s;
      timing.hop_s = cluster.size() > 1 ? e.estimate_transfer_s(cluster.members[0], cluster.members[1]) : 0.0;
      timing.compute_s = e.predicted_compute_s();
      timing.margin_s = sc.config.strategy.sink_margin_s;
      try {
        cs.choice = isl::select_sink(e.graph(), cluster, e.ps(), e.now(), timing);
      } catch (const HorizonExhaustedError& err) {
        e.record(TraceEvent::route_plan, e.ps(), std::nullopt, round_,
                 "plane=" + std::to_string(cluster.plane) + ";unschedulable;" + err.what());
        continue;
      }
      std::vector<contact::Interval> sink_windows;
      for (const auto& w : e.graph().windows_between(cs.choice.sink, e.ps())) sink_windows.push_back(w.interval());
      fl::UnitProjection proj;
      proj.unit = c;
      proj.download_start = cs.choice.gateway_receive - timing.download_s;
      proj.download_end = cs.choice.gateway_receive;
      proj.ready = cs.choice.predicted_completion;
      if (const auto up = fl::earliest_fit(sink_windows, proj.ready, timing.upload_s)) {
        proj.upload_start = *up;
        proj.upload_end = *up + timing.upload_s;
        proj.feasible = proj.upload_end <= e.horizon();
      }
      projections.push_back(proj);
      candidates.push_back(c);
    }
    std::vector<bool> chosen(sc.clusters.size(), false);
    for (std::size_t i : policy_->select(projections, e.now())) chosen[candidates[i]] = true;

    for (std::size_t c = 0; c < sc.clusters.size(); ++c) {
      const auto& cluster = sc.clusters[c];
      auto& cs = clusters_[c];
      if (std::find(candidates.begin(), candidates.end(), c) == candidates.end()) continue;
      if (!chosen[c]) {
        e.record(TraceEvent::route_plan, e.ps(), std::nullopt, round_,
                 "plane=" + std::to_string(cluster.plane) + ";deferred by " + policy_->name() + " policy");
        continue;
      }
      cs.scheduled = true;
      cs.broadcast = isl::build_tree(cluster, cs.choice.gateway);
      if (cs.choice.fallback) ++e.stats().sink_fallbacks;
      expected_ += unicast_ ? cluster.size() : 1;

      std::ostringstream tree;
      bool first = true;
      for (const auto& [child, parent] : cs.choice.plan.parent) {
        tree << (first ? "" : "|") << child.str() << ">" << parent.str();
        first = false;
      }
      e.record(TraceEvent::route_plan, cs.choice.sink, cs.choice.gateway, round_,
               "plane=" + std::to_string(cluster.plane) +
                   ";gateway_receive_s=" + csv::num(cs.choice.gateway_receive, 3) +
                   ";predicted_completion_s=" + csv::num(cs.choice.predicted_completion, 3) +
                   (cs.choice.fallback ? ";fallback" : "") + ";tree=" + tree.str());
    }
    if (expected_ == 0) {
      e.record(TraceEvent::horizon_exhausted, e.ps(), std::nullopt, round_, "no plane can be scheduled");
      return;
    }
    open_ = true;
    e.record(TraceEvent::round_start, e.ps(), std::nullopt, round_,
             std::string("forwarding=") + (unicast_ ? "unicast" : "aggregate") +
                 ";scheduled=" + std::to_string(std::count(chosen.begin(), chosen.end(), true)) +
                 ";expected=" + std::to_string(expected_));
    for (const auto& cs : clusters_) {
      if (!cs.scheduled) continue;
      Message m;
      m.kind = Payload::model;
      e.send(e.ps(), cs.choice.gateway, std::move(m), round_, true);
    }
    if (proceed_) {
      const double deadline = e.now() + e.scenario().config.strategy.missing_cluster_timeout_s;
      e.schedule(deadline, EventKind::ps_apply, round_, 1);
    }
  }

  bool unicast_;
  bool proceed_;
  std::unique_ptr<fl::SyncPolicy> policy_;
  std::map<NodeId, std::size_t> cluster_of_;
  std::uint64_t round_ = 0;
  bool open_ = false;
  std::vector<ClusterState> clusters_;
  std::size_t expected_ = 0;
  std::size_t received_ = 0;
  std::vector<isl::PartialAggregate> aggregates_;
  std::vector<fl::ClientUpdate> updates_;
  std::vector<std::uint64_t> uids_;
};

}  // namespace

std::unique_ptr<Strategy> make_isl_strategy(const Engine& e) { return std::make_unique<IslStrategy>(e); }

}  // namespace satfl::sim::detail
