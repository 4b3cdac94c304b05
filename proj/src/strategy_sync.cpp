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

// Synchronous FedAvg over direct client-to-PS links.

#include <map>

#include "engine_internal.hpp"
#include "satfl/aggregation.hpp"
#include "satfl/csv.hpp"
#include "satfl/error.hpp"
#include "satfl/scheduling.hpp"

namespace satfl::sim::detail {

namespace {

class SyncStrategy final : public Strategy {
 public:
  explicit SyncStrategy(const Engine& e)
      : policy_(fl::make_policy(e.scenario().config.strategy.sync_policy,
                                e.scenario().config.strategy.deadline_s)) {}

  void start(Engine& e) override { begin_round(e); }

  void on_transfer_done(Engine& e, Transfer& t) override {
    if (t.msg.kind == Payload::model) {
      const std::size_t k = t.to.index;
      base_[k] = std::move(t.msg.model);
      e.schedule(e.now() + e.compute_s(), EventKind::compute_done, k);
      return;
    }
    received_.push_back(std::move(t.msg.update));
    uids_.insert(uids_.end(), t.msg.uids.begin(), t.msg.uids.end());
    if (received_.size() == expected_) e.schedule(e.now(), EventKind::ps_apply, round_);
  }

  void on_compute_done(Engine& e, std::uint64_t k) override {
    auto p = e.train(k, base_.at(k));
    Message m;
    m.kind = Payload::update;
    m.update = std::move(p.update);
    m.uids = {p.uid};
    e.send(e.scenario().clients.at(k), e.ps(), std::move(m), round_);
  }

  void on_ps_apply(Engine& e, std::uint64_t round, std::uint64_t) override {
    if (round != round_ || received_.size() != expected_) return;
    e.set_global(fl::fedavg_aggregate(e.global(), received_));
    e.retire(uids_, false);
    e.record(TraceEvent::ps_apply, e.ps(), std::nullopt, round_, "updates=" + std::to_string(received_.size()));
    e.record(TraceEvent::round_complete, e.ps(), std::nullopt, round_);
    ++e.stats().rounds_completed;
    e.stats().round_completion_s.push_back(e.now());
    ++round_;
    begin_round(e);
  }

 private:
  void begin_round(Engine& e) {
    received_.clear();
    uids_.clear();
    base_.clear();
    const auto& sc = e.scenario();
    std::vector<fl::SyncUnit> units;
    for (std::size_t k = 0; k < sc.clients.size(); ++k) {
      fl::SyncUnit u;
      u.id = k;
      for (const auto& w : e.graph().windows_between(sc.clients[k], e.ps())) u.windows.push_back(w.interval());
      u.download_s = e.estimate_transfer_s(e.ps(), sc.clients[k]);
      u.upload_s = u.download_s;
      units.push_back(std::move(u));
    }
    fl::RoundPlan plan;
    try {
      plan = fl::schedule_sync_round(e.now(), units, e.predicted_compute_s(), e.horizon(), *policy_);
    } catch (const HorizonExhaustedError& err) {
      e.record(TraceEvent::horizon_exhausted, e.ps(), std::nullopt, round_, err.what());
      return;
    }
    expected_ = plan.scheduled.size();
    e.record(TraceEvent::round_start, e.ps(), std::nullopt, round_,
             "policy=" + policy_->name() + ";scheduled=" + std::to_string(expected_) +
                 ";predicted_completion_s=" + csv::num(plan.completion, 3));
    for (const auto& p : plan.scheduled) {
      Message m;
      m.kind = Payload::model;
      e.send(e.ps(), sc.clients.at(p.unit), std::move(m), round_, true);
    }
  }

  std::unique_ptr<fl::SyncPolicy> policy_;
  std::uint64_t round_ = 0;
  std::size_t expected_ = 0;
  std::map<std::size_t, fl::ModelVector> base_;
  std::vector<fl::ClientUpdate> received_;
  std::vector<std::uint64_t> uids_;
};

}  // namespace

std::unique_ptr<Strategy> make_sync_strategy(const Engine& e) { return std::make_unique<SyncStrategy>(e); }

}  // namespace satfl::sim::detail
