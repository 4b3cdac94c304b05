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

#include "satfl/cluster_aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <stdexcept>
#include <string>

#include "satfl/error.hpp"
#include "satfl/kernels.hpp"
#include "satfl/scheduling.hpp"

namespace satfl::isl {

PartialAggregate PartialAggregate::from_update(const fl::ClientUpdate& u) {
  PartialAggregate p;
  p.weighted_sum = u.delta;
  kernels::scale(u.n_samples, p.weighted_sum);
  p.weight_sum = u.n_samples;
  p.covered = {u.client};
  p.base_version = u.base_version;
  return p;
}

std::vector<NodeId> RoutePlan::children(NodeId node) const {
  std::vector<NodeId> out;
  for (const auto& [child, par] : parent) {
    if (par == node) out.push_back(child);
  }
  return out;
}

std::size_t RoutePlan::max_depth() const {
  std::size_t d = 0;
  for (const auto& [node, depth_of] : depth) d = std::max(d, depth_of);
  return d;
}

std::size_t ring_distance(std::size_t n, std::size_t i, std::size_t j) {
  const std::size_t k = (j + n - i) % n;
  return std::min(k, n - k);
}

RoutePlan build_tree(const Cluster& cluster, NodeId sink) {
  const std::size_t n = cluster.size();
  const std::size_t s = cluster.position_of(sink);
  if (s == Cluster::npos) throw std::invalid_argument("sink " + sink.str() + " is not a cluster member");
  RoutePlan plan;
  plan.sink = sink;
  plan.depth[sink] = 0;
  for (std::size_t p = 0; p < n; ++p) {
    if (p == s) continue;
    const std::size_t k = (p + n - s) % n;  // clockwise offset from the sink
    const std::size_t prev = (p + n - 1) % n;
    const std::size_t next = (p + 1) % n;
    std::size_t parent_pos;
    if (k < n - k) {
      parent_pos = prev;
    } else if (k > n - k) {
      parent_pos = next;
    } else {
      parent_pos = cluster.members[prev].index <= cluster.members[next].index ? prev : next;
    }
    plan.parent[cluster.members[p]] = cluster.members[parent_pos];
    plan.depth[cluster.members[p]] = std::min(k, n - k);
  }
  return plan;
}

std::size_t unicast_transmissions(std::size_t n) {
  std::size_t total = 0;
  for (std::size_t k = 1; k < n; ++k) total += std::min(k, n - k);
  return total;
}

PartialAggregate aggregate_and_forward(const fl::ClientUpdate& own,
                                       std::span<const PartialAggregate> incoming) {
  PartialAggregate out = PartialAggregate::from_update(own);
  for (const auto& in : incoming) {
    if (in.base_version != out.base_version) {
      throw SyncError("partial aggregate built on version " + std::to_string(in.base_version) +
                      ", node is on " + std::to_string(out.base_version));
    }
    if (in.weighted_sum.size() != out.weighted_sum.size()) {
      throw std::invalid_argument("partial aggregate dimension mismatch");
    }
    std::vector<NodeId> overlap;
    std::set_intersection(out.covered.begin(), out.covered.end(), in.covered.begin(),
                          in.covered.end(), std::back_inserter(overlap));
    if (!overlap.empty()) {
      throw DoubleCountError("client " + overlap.front().str() + " would be counted twice");
    }
    kernels::axpy(1.0, in.weighted_sum, out.weighted_sum);
    out.weight_sum += in.weight_sum;
    std::vector<NodeId> merged;
    std::merge(out.covered.begin(), out.covered.end(), in.covered.begin(), in.covered.end(),
               std::back_inserter(merged));
    out.covered = std::move(merged);
  }
  return out;
}

fl::ModelVector deliver_to_ps(const fl::ModelVector& base, std::span<const PartialAggregate> aggregates) {
  if (aggregates.empty()) throw SyncError("deliver_to_ps: no aggregates");
  std::vector<double> sum(base.params.size(), 0.0);
  double weight = 0.0;
  for (const auto& a : aggregates) {
    if (a.base_version != base.version) {
      throw SyncError("deliver_to_ps: aggregate built on version " + std::to_string(a.base_version) +
                      ", expected " + std::to_string(base.version));
    }
    if (a.weighted_sum.size() != sum.size()) throw std::invalid_argument("aggregate dimension mismatch");
    kernels::axpy(1.0, a.weighted_sum, sum);
    weight += a.weight_sum;
  }
  if (!(weight > 0.0)) throw SyncError("deliver_to_ps: zero total weight");
  fl::ModelVector out = base;
  kernels::axpy(1.0 / weight, sum, out.params);
  ++out.version;
  return out;
}

RoutePlan plan_round(const Cluster& cluster, NodeId sink, NodeId gateway, double gateway_receive,
                     const SinkTiming& timing) {
  RoutePlan plan = build_tree(cluster, sink);
  const std::size_t n = cluster.size();
  const std::size_t g = cluster.position_of(gateway);
  if (g == Cluster::npos) throw std::invalid_argument("gateway is not a cluster member");

  // Deepest nodes first so every child is complete before its parent.
  std::vector<std::size_t> order(n);
  for (std::size_t p = 0; p < n; ++p) order[p] = p;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return plan.depth.at(cluster.members[a]) > plan.depth.at(cluster.members[b]);
  });
  std::map<NodeId, double> done;
  for (std::size_t p : order) {
    const NodeId node = cluster.members[p];
    const double received =
        gateway_receive + static_cast<double>(ring_distance(n, g, p)) * timing.hop_s;
    double t = received + timing.compute_s;
    for (NodeId c : plan.children(node)) t = std::max(t, done.at(c) + timing.hop_s);
    done[node] = t;
  }
  plan.expected_arrival = std::move(done);
  return plan;
}

namespace {

std::vector<contact::Interval> member_intervals(const contact::TemporalContactGraph& g, NodeId m,
                                                NodeId ps) {
  std::vector<contact::Interval> out;
  for (const auto& w : g.windows_between(m, ps)) out.push_back(w.interval());
  return out;
}

}  // namespace

SinkChoice select_sink(const contact::TemporalContactGraph& g, const Cluster& cluster, NodeId ps,
                       double t, const SinkTiming& timing) {
  SinkChoice choice;
  double best_receive = std::numeric_limits<double>::infinity();
  std::vector<std::vector<contact::Interval>> windows;
  for (NodeId m : cluster.members) {
    windows.push_back(member_intervals(g, m, ps));
    const auto fit = fl::earliest_fit(windows.back(), t, timing.download_s);
    if (!fit) continue;
    const double receive = *fit + timing.download_s;
    if (receive < best_receive || (receive == best_receive && m.index < choice.gateway.index)) {
      best_receive = receive;
      choice.gateway = m;
    }
  }
  if (!std::isfinite(best_receive)) {
    throw HorizonExhaustedError("no member of plane " + std::to_string(cluster.plane) +
                                " can receive the global model after t=" + std::to_string(t));
  }
  choice.gateway_receive = best_receive;

  const double hold = std::max(timing.margin_s, timing.upload_s);
  double best = std::numeric_limits<double>::infinity();
  bool found = false;
  for (std::size_t p = 0; p < cluster.size(); ++p) {
    const NodeId cand = cluster.members[p];
    const double tstar =
        plan_round(cluster, cand, choice.gateway, best_receive, timing).expected_arrival.at(cand);
    choice.completion[cand] = tstar;
    const bool ok = std::any_of(windows[p].begin(), windows[p].end(), [&](const contact::Interval& w) {
      return w.start <= tstar && w.end >= tstar + hold;
    });
    if (ok && (tstar < best || (tstar == best && cand.index < choice.sink.index))) {
      best = tstar;
      choice.sink = cand;
      found = true;
    }
  }

  if (!found) {
    // Nobody sees the PS at completion: take the earliest upload opportunity.
    choice.fallback = true;
    bool have = false;
    double best_upload = 0.0;
    for (std::size_t p = 0; p < cluster.size(); ++p) {
      const NodeId cand = cluster.members[p];
      const auto up = fl::earliest_fit(windows[p], choice.completion.at(cand), timing.upload_s);
      const double key = up ? *up : std::numeric_limits<double>::infinity();
      if (!have || key < best_upload || (key == best_upload && cand.index < choice.sink.index)) {
        have = true;
        best_upload = key;
        choice.sink = cand;
      }
    }
  }
  choice.plan = plan_round(cluster, choice.sink, choice.gateway, best_receive, timing);
  choice.predicted_completion = choice.plan.expected_arrival.at(choice.sink);
  return choice;
}

}  // namespace satfl::isl
