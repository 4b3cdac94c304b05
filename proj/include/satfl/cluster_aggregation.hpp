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

// In-network incremental aggregation for the near-persistent scenario: each
// round a sink is predicted per cluster, a shortest-path tree on the ring is
// built towards it, and every node forwards a single partial aggregate.

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "satfl/contact_graph.hpp"
#include "satfl/task.hpp"

namespace satfl::isl {

using contact::Cluster;
using contact::NodeId;

struct PartialAggregate {
  std::vector<double> weighted_sum;  // sum of n_k * delta_k
  double weight_sum = 0.0;           // sum of n_k
  std::vector<NodeId> covered;       // sorted, distinct
  std::uint64_t base_version = 0;

  static PartialAggregate from_update(const fl::ClientUpdate& u);
};

struct RoutePlan {
  NodeId sink;
  std::map<NodeId, NodeId> parent;        // every member except the sink
  std::map<NodeId, std::size_t> depth;    // hops to the sink
  std::map<NodeId, double> expected_arrival;  // time the node's aggregate is complete

  std::vector<NodeId> children(NodeId node) const;
  std::size_t max_depth() const;
};

/// Hop count between ring positions i and j on a ring of n.
std::size_t ring_distance(std::size_t n, std::size_t i, std::size_t j);

/// Splits the ring into two arcs toward the sink. On even rings the antipodal
/// node attaches to whichever of its neighbours has the lower node index.
RoutePlan build_tree(const Cluster& cluster, NodeId sink);

/// Model-sized transmissions needed to bring every member's update to the sink
/// with plain unicast forwarding: sum of hop counts (n^2/4 for even n).
std::size_t unicast_transmissions(std::size_t n);

/// Combines the node's own update with its children's aggregates. Throws
/// DoubleCountError on overlapping coverage and SyncError on mixed versions.
PartialAggregate aggregate_and_forward(const fl::ClientUpdate& own,
                                       std::span<const PartialAggregate> incoming);

/// base + (sum_c weighted_sum_c) / (sum_c weight_sum_c), version + 1.
fl::ModelVector deliver_to_ps(const fl::ModelVector& base, std::span<const PartialAggregate> aggregates);

struct SinkTiming {
  double download_s = 0.0;  // PS -> gateway member
  double upload_s = 0.0;    // sink -> PS
  double hop_s = 0.0;       // one ring hop
  double compute_s = 60.0;  // predicted local computation
  double margin_s = 60.0;   // sink must see the PS over [t*, t* + margin]
};

struct SinkChoice {
  NodeId sink;
  NodeId gateway;           // member that receives the global model from the PS
  double gateway_receive = 0.0;
  double predicted_completion = 0.0;  // t*: all updates aggregated at the sink
  bool fallback = false;    // no candidate was visible over the margin
  std::map<NodeId, double> completion;  // t* per candidate
  RoutePlan plan;
};

/// Completion time at `sink` when the global model enters the ring at
/// `gateway` at `gateway_receive` and is relayed along shortest ring paths.
RoutePlan plan_round(const Cluster& cluster, NodeId sink, NodeId gateway, double gateway_receive,
                     const SinkTiming& timing);

/// Throws HorizonExhaustedError if no member can receive the model.
SinkChoice select_sink(const contact::TemporalContactGraph& g, const Cluster& cluster, NodeId ps,
                       double t, const SinkTiming& timing);

}  // namespace satfl::isl
