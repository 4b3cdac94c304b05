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

// Asynchronous strategies: FedAsync, FedSat and FedSat with predictive
// scheduling. Each client cycles download, train, upload on its own.

#include <vector>

#include "engine_internal.hpp"
#include "satfl/aggregation.hpp"
#include "satfl/csv.hpp"
#include "satfl/scheduling.hpp"

namespace satfl::sim::detail {

namespace {

class AsyncStrategy final : public Strategy {
 public:
  AsyncStrategy(const Engine& e, StrategyKind kind) : kind_(kind) {
    params_.alpha = e.scenario().config.strategy.fedasync_alpha;
    params_.exponent = e.scenario().config.strategy.fedasync_exponent;
    base_.resize(e.client_count());
  }

  void start(Engine& e) override {
    for (std::size_t k = 0; k < e.client_count(); ++k) request(e, k);
  }

  void on_wake(Engine& e, std::uint64_t k) override { request(e, k); }

  void on_transfer_done(Engine& e, Transfer& t) override {
    if (t.msg.kind == Payload::model) {
      const std::size_t k = t.to.index;
      base_[k] = std::move(t.msg.model);
      e.schedule(e.now() + e.compute_s(), EventKind::compute_done, k);
      return;
    }
    const fl::ClientUpdate& u = t.msg.update;
    const std::uint64_t staleness = e.global().version - u.base_version;
    fl::ModelVector next = kind_ == StrategyKind::fedasync
                               ? fl::fedasync_apply(e.global(), u, t.msg.client_base, params_)
                               : fl::fedsat_apply(e.global(), u, e.total_samples());
    e.set_global(std::move(next));
    e.retire(t.msg.uids, false);
    e.stats().staleness.push_back(staleness);
    e.record(TraceEvent::ps_apply, e.ps(), t.from, e.global().version,
             "staleness=" + std::to_string(staleness));
    request(e, t.from.index);
  }

  void on_compute_done(Engine& e, std::uint64_t k) override {
    auto p = e.train(k, base_[k]);
    Message m;
    m.kind = Payload::update;
    m.update = std::move(p.update);
    m.uids = {p.uid};
    if (kind_ == StrategyKind::fedasync) m.client_base = base_[k].params;
    e.send(e.scenario().clients.at(k), e.ps(), std::move(m), e.global().version);
  }

 private:
  void download(Engine& e, std::size_t k) {
    Message m;
    m.kind = Payload::model;
    e.send(e.ps(), e.scenario().clients.at(k), std::move(m), e.global().version, true);
  }

  void request(Engine& e, std::size_t k) {
    if (kind_ != StrategyKind::fedsat_sched) {
      download(e, k);
      return;
    }
    const NodeId client = e.scenario().clients.at(k);
    const double down = e.estimate_transfer_s(e.ps(), client);
    const double up = down;
    const double compute = e.predicted_compute_s();
    const auto current = e.graph().window_at(client, e.ps(), e.now());
    if (!current) {
      // Out of contact: decide when the next window opens.
      const auto next = e.graph().next_window_after(client, e.ps(), e.now());
      if (next) e.schedule(next->start, EventKind::window_open, k, kClientWake);
      return;
    }
    if (current->end - e.now() >= down + compute + up) {
      e.record(TraceEvent::decision, client, e.ps(), e.global().version, "download-now;fits current window");
      download(e, k);
      return;
    }
    const auto next = e.graph().next_window_after(client, e.ps(), current->end);
    std::optional<contact::Interval> next_interval;
    if (next) next_interval = next->interval();
    const auto d = fl::predictive_schedule(next_interval, compute, down, up);
    e.record(TraceEvent::decision, client, e.ps(), e.global().version,
             fl::to_string(d) + (next ? ";next_window_s=" + csv::num(next->duration(), 1) : ";no next window"));
    if (d == fl::ClientDecision::idle_until_next) {
      e.schedule(next->start, EventKind::window_open, k, kClientWake);
    } else {
      download(e, k);
    }
  }

  StrategyKind kind_;
  fl::FedAsyncParams params_;
  std::vector<fl::ModelVector> base_;
};

}  // namespace

std::unique_ptr<Strategy> make_async_strategy(const Engine& e, StrategyKind kind) {
  return std::make_unique<AsyncStrategy>(e, kind);
}

}  // namespace satfl::sim::detail
