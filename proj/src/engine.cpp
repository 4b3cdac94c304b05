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

#include "satfl/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "engine_internal.hpp"
#include "satfl/csv.hpp"
#include "satfl/error.hpp"

namespace satfl::sim {

namespace detail {

namespace {

constexpr std::uint64_t kDataStream = 0x5eed0001;
constexpr std::uint64_t kPartitionStream = 0x5eed0002;
constexpr std::uint64_t kTrainStream = 0x5eed0003;

}  // namespace

Engine::Engine(const Scenario& scenario, const RunOptions& options)
    : sc_(scenario), opt_(options) {
  horizon_ = options.horizon_s >= 0.0 ? options.horizon_s : sc_.config.run.horizon_s;
  const auto problem = incompatibility(sc_, options.strategy);
  if (!problem.empty()) throw ConfigError(problem);

  const auto& t = task();
  const std::size_t n = sc_.clients.size();
  data_ = run_data(sc_, opt_.seed);
  fl::PartitionLayout layout{sc_.clients, static_cast<int>(sc_.clusters.size()), sc_.per_plane};
  auto parts = fl::partition_data(data_.train, layout, t, fl::mix_seed(opt_.seed, kPartitionStream));
  for (NodeId c : sc_.clients) {
    client_data_.push_back(std::move(parts.at(c)));
    total_samples_ += static_cast<double>(client_data_.back().rows());
  }
  train_count_.assign(n, 0);
  global_.params.assign(t.model_dimension(), 0.0);
  global_.version = 0;

  switch (options.strategy) {
    case StrategyKind::fedavg_sync: strategy_ = make_sync_strategy(*this); break;
    case StrategyKind::fedavg_isl_aggregation: strategy_ = make_isl_strategy(*this); break;
    case StrategyKind::fedasync:
    case StrategyKind::fedsat:
    case StrategyKind::fedsat_sched: strategy_ = make_async_strategy(*this, options.strategy); break;
  }
}

double Engine::samples(std::size_t k) const { return static_cast<double>(client_data_.at(k).rows()); }

void Engine::schedule(double t, EventKind kind, std::uint64_t id, std::uint64_t aux) {
  queue_.push(t, kind, id, aux);
}

LinkClass Engine::link_between(NodeId a, NodeId b) const {
  if (a == sc_.ps || b == sc_.ps) return sc_.ps_link;
  return LinkClass::ring;
}

double Engine::estimate_transfer_s(NodeId a, NodeId b) const {
  const auto& cat = graph().catalog();
  const LinkClass link = link_between(a, b);
  double range = 0.0;
  if (link == LinkClass::ring) {
    range = orbit::distance(cat.position(a, 0.0), cat.position(b, 0.0));
  } else {
    const double ra = cat.position(a, 0.0).norm();
    const double rb = cat.position(b, 0.0).norm();
    if (cat.at(a).is_ground() || cat.at(b).is_ground()) {
      range = std::sqrt(std::max(ra * ra - rb * rb, rb * rb - ra * ra));
    } else {
      const double floor = orbit::kEarthRadiusKm + sc_.config.links.grazing_altitude_km;
      range = std::sqrt(std::max(ra * ra - floor * floor, 0.0)) +
              std::sqrt(std::max(rb * rb - floor * floor, 0.0));
    }
  }
  return sc_.delay.transfer_s(link, range);
}

void Engine::set_global(fl::ModelVector m) {
  fl::check_finite(m.params, "global model v" + std::to_string(m.version), current_event_);
  global_ = std::move(m);
}

Produced Engine::train(std::size_t client, const fl::ModelVector& base) {
  const std::uint64_t seed =
      fl::mix_seed(fl::mix_seed(opt_.seed, kTrainStream + client), train_count_.at(client)++);
  Produced p;
  p.uid = next_uid_++;
  p.update = fl::local_train(base, client_data_.at(client), task(), seed, sc_.clients.at(client));
  live_updates_.insert(p.uid);
  ++stats_.updates_produced;
  record(TraceEvent::update_produced, sc_.clients.at(client), std::nullopt, base.version,
         "uid=" + std::to_string(p.uid));
  return p;
}

void Engine::retire(std::span<const std::uint64_t> uids, bool aggregated) {
  for (auto uid : uids) {
    if (live_updates_.erase(uid) != 1) {
      throw std::logic_error("update " + std::to_string(uid) + " retired twice or never produced");
    }
    if (aggregated) {
      ++stats_.updates_aggregated;
    } else {
      ++stats_.updates_applied;
    }
  }
}

void Engine::drop(std::span<const std::uint64_t> uids, NodeId where, const std::string& reason) {
  for (auto uid : uids) {
    if (live_updates_.erase(uid) != 1) continue;
    ++stats_.updates_dropped;
    record(TraceEvent::update_dropped, where, std::nullopt, 0, "uid=" + std::to_string(uid) + ";" + reason);
  }
}

void Engine::record(TraceEvent ev, NodeId node, std::optional<NodeId> peer, std::uint64_t round,
                    const std::string& detail) {
  TraceRecord r;
  r.seq = trace_.size();
  r.time = now();
  r.event = ev;
  r.node = node.str();
  if (peer) r.peer = peer->str();
  r.version = global_.version;
  r.round = round;
  r.detail = detail;
  trace_.push_back(std::move(r));
}

void Engine::record_transfer(TraceEvent ev, const Transfer& t, const std::string& detail) {
  TraceRecord r;
  r.seq = trace_.size();
  r.time = now();
  r.event = ev;
  r.node = t.from.str();
  r.peer = t.to.str();
  r.payload = t.msg.kind;
  r.has_link = true;
  r.link = t.link;
  r.bits = sc_.delay.model_bits;
  r.version = global_.version;
  r.round = t.round;
  r.detail = detail;
  trace_.push_back(std::move(r));
}

std::uint64_t Engine::send(NodeId from, NodeId to, Message msg, std::uint64_t round, bool snapshot_global) {
  const std::uint64_t id = next_transfer_++;
  Transfer t;
  t.id = id;
  t.from = from;
  t.to = to;
  t.link = link_between(from, to);
  t.msg = std::move(msg);
  t.round = round;
  t.snapshot_global = snapshot_global;
  transfers_.emplace(id, std::move(t));
  attempt(id);
  return id;
}

void Engine::attempt(std::uint64_t id) {
  Transfer& t = transfers_.at(id);
  const double start = now();
  double limit = std::numeric_limits<double>::infinity();
  if (t.link != LinkClass::ring) {
    const auto w = graph().window_at(t.from, t.to, start);
    if (!w) {
      const auto next = graph().next_window_after(t.from, t.to, start);
      if (!next) {
        ++stats_.transfers_stalled;
        record_transfer(TraceEvent::transfer_stalled, t, "no further contact");
        return;
      }
      schedule(next->start, EventKind::window_open, id);
      return;
    }
    limit = w->end;
  }
  if (t.snapshot_global) t.msg.model = global_;
  const auto& cat = graph().catalog();
  const double duration =
      sc_.delay.transfer_s(t.link, orbit::distance(cat.position(t.from, start), cat.position(t.to, start)));
  t.started = start;
  ++t.attempts;
  record_transfer(TraceEvent::transfer_start, t,
                  "attempt=" + std::to_string(t.attempts) + ";duration_s=" + csv::num(duration, 6));
  if (start + duration <= limit) {
    schedule(start + duration, EventKind::transfer_done, id);
  } else {
    schedule(limit, EventKind::window_close, id);
  }
}

void Engine::on_transfer_done(std::uint64_t id) {
  auto node = transfers_.extract(id);
  Transfer& t = node.mapped();
  ++stats_.transfers_completed;
  bits_[static_cast<std::size_t>(t.link)] += sc_.delay.model_bits;
  if (t.to == sc_.ps && (t.msg.kind == Payload::update || t.msg.kind == Payload::aggregate)) ++ps_msgs_;
  record_transfer(TraceEvent::transfer_done, t, "started=" + csv::num(t.started, 6));
  strategy_->on_transfer_done(*this, t);
}

void Engine::evaluate() {
  MetricsRow row;
  row.sim_time_s = now();
  row.version = global_.version;
  row.loss = fl::loss(task(), global_.params, data_.train);
  row.accuracy = fl::accuracy(task(), global_.params, data_.test);
  row.bits_gs = bits_[0];
  row.bits_ring = bits_[1];
  row.bits_ps = bits_[2];
  row.ps_msgs = ps_msgs_;
  metrics_.push_back(row);
  if (std::isnan(stats_.time_to_target_s) && row.accuracy >= sc_.config.run.target_accuracy) {
    stats_.time_to_target_s = row.sim_time_s;
  }
  record(TraceEvent::eval, sc_.ps, std::nullopt, global_.version,
         "loss=" + csv::num(row.loss, 6) + ";accuracy=" + csv::num(row.accuracy, 6));
}

RunResult Engine::run() {
  RunResult out;
  if (!(horizon_ > 0.0)) return out;

  const double interval = sc_.config.run.eval_interval_s;
  schedule(0.0, EventKind::eval, 0);
  strategy_->start(*this);

  while (!queue_.empty() && queue_.top().time <= horizon_) {
    const Event ev = queue_.pop();
    current_event_ = ev.seq;
    ++stats_.events;
    switch (ev.kind) {
      case EventKind::eval: {
        evaluate();
        const double next = static_cast<double>(ev.id + 1) * interval;
        if (next <= horizon_) schedule(next, EventKind::eval, ev.id + 1);
        break;
      }
      case EventKind::window_open: {
        if (ev.aux == kClientWake) {
          strategy_->on_wake(*this, ev.id);
          break;
        }
        const Transfer& t = transfers_.at(ev.id);
        record_transfer(TraceEvent::window_open, t);
        attempt(ev.id);
        break;
      }
      case EventKind::window_close: {
        ++stats_.transfers_aborted;
        record_transfer(TraceEvent::transfer_abort, transfers_.at(ev.id),
                        "started=" + csv::num(transfers_.at(ev.id).started, 6) + ";window closed");
        attempt(ev.id);
        break;
      }
      case EventKind::transfer_done: on_transfer_done(ev.id); break;
      case EventKind::compute_done: strategy_->on_compute_done(*this, ev.id); break;
      case EventKind::ps_apply: strategy_->on_ps_apply(*this, ev.id, ev.aux); break;
    }
  }

  // Whatever is still in flight at the horizon never reaches the PS.
  std::vector<std::uint64_t> pending(live_updates_.begin(), live_updates_.end());
  for (auto uid : pending) {
    live_updates_.erase(uid);
    ++stats_.updates_dropped;
    TraceRecord r;
    r.seq = trace_.size();
    r.time = horizon_;
    r.event = TraceEvent::update_dropped;
    r.node = sc_.ps.str();
    r.version = global_.version;
    r.detail = "uid=" + std::to_string(uid) + ";horizon";
    trace_.push_back(std::move(r));
  }

  stats_.final_version = global_.version;
  stats_.final_params = global_.params;
  stats_.final_loss = fl::loss(task(), global_.params, data_.train);
  stats_.final_accuracy = fl::accuracy(task(), global_.params, data_.test);
  out.metrics = std::move(metrics_);
  out.trace = std::move(trace_);
  out.stats = std::move(stats_);
  return out;
}

}  // namespace detail

fl::SyntheticData run_data(const Scenario& scenario, std::uint64_t seed) {
  const auto& t = scenario.config.task;
  return fl::generate_data(t, t.samples_per_client * scenario.clients.size(),
                           fl::mix_seed(seed, detail::kDataStream));
}

RunResult run(const Scenario& scenario, const RunOptions& options) {
  detail::Engine engine(scenario, options);
  return engine.run();
}

void write_metrics_csv(std::ostream& out, std::span<const MetricsRow> rows) {
  csv::Writer w(out);
  w.row({"sim_time_s", "version", "loss", "accuracy", "bits_gs", "bits_ring", "bits_ps", "ps_msgs"});
  for (const auto& r : rows) {
    w.row({csv::num(r.sim_time_s, 3), std::to_string(r.version), csv::num(r.loss, 9),
           csv::num(r.accuracy, 6), csv::num(r.bits_gs, 0), csv::num(r.bits_ring, 0),
           csv::num(r.bits_ps, 0), std::to_string(r.ps_msgs)});
  }
}

}  // namespace satfl::sim
