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

// Temporal contact graph: a static vertex set (satellites and ground
// stations), time-edges given by contact windows, and static intra-orbit
// ring subgraphs (clusters) that are always connected.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "satfl/orbit.hpp"

namespace satfl::contact {

enum class NodeKind : std::uint8_t { satellite, ground_station };

struct NodeId {
  NodeKind kind = NodeKind::satellite;
  std::uint32_t index = 0;

  static NodeId sat(std::uint32_t i) { return {NodeKind::satellite, i}; }
  static NodeId gs(std::uint32_t i) { return {NodeKind::ground_station, i}; }

  auto operator<=>(const NodeId&) const = default;
  /// "sat12" / "gs0".
  std::string str() const;
};

using NodePair = std::pair<NodeId, NodeId>;

struct Node {
  NodeId id;
  std::variant<orbit::OrbitElements, orbit::GroundStation> geometry;

  bool is_ground() const { return std::holds_alternative<orbit::GroundStation>(geometry); }
};

/// Immutable set of nodes together with the Earth frame used to place
/// ground stations.
class NodeCatalog {
 public:
  NodeCatalog() = default;
  NodeCatalog(std::vector<Node> nodes, orbit::EarthFrame frame);

  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& at(NodeId id) const;
  bool contains(NodeId id) const;
  orbit::EciPosition position(NodeId id, double t) const;
  const orbit::EarthFrame& frame() const { return frame_; }

 private:
  std::vector<Node> nodes_;
  std::map<NodeId, std::size_t> index_;
  orbit::EarthFrame frame_;
};

struct LinkRules {
  double grazing_altitude_km = 0.0;
  double step_s = 10.0;
  double refine_s = 0.1;
};

/// Ground rule (mask of the station) if either end is a ground station,
/// otherwise a line-of-sight rule.
orbit::LinkRule rule_for(const Node& a, const Node& b, const LinkRules& rules);
bool visible(const NodeCatalog& nodes, NodeId a, NodeId b, double t, const LinkRules& rules);

struct Interval {
  double start = 0.0;
  double end = 0.0;
  double duration() const { return end - start; }
  bool contains(double t) const { return t >= start && t <= end; }
  bool operator==(const Interval&) const = default;
};

struct ContactWindow {
  NodeId a;
  NodeId b;
  double start = 0.0;
  double end = 0.0;

  double duration() const { return end - start; }
  bool contains(double t) const { return t >= start && t <= end; }
  bool covers(double from, double to) const { return from >= start && to <= end; }
  Interval interval() const { return {start, end}; }
};

/// Samples visibility every `step` seconds over [0, horizon] and refines each
/// boundary by bisection to `rules.refine_s`. Output is pair-major in the order
/// of `pairs`, time-ascending within a pair. Passes shorter than `step` that
/// fall between two samples are missed.
std::vector<ContactWindow> compute_windows(const NodeCatalog& nodes, std::span<const NodePair> pairs,
                                           const LinkRules& rules, double horizon, double step);

struct Cluster {
  std::vector<NodeId> members;  // ring order
  int plane = 0;

  std::size_t size() const { return members.size(); }
  /// Ring position of a member, or npos.
  std::size_t position_of(NodeId id) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

class TemporalContactGraph {
 public:
  TemporalContactGraph() = default;
  TemporalContactGraph(NodeCatalog nodes, std::vector<Cluster> clusters,
                       std::vector<ContactWindow> windows, double horizon);

  const NodeCatalog& catalog() const { return nodes_; }
  const std::vector<Cluster>& clusters() const { return clusters_; }
  const std::vector<ContactWindow>& windows() const { return windows_; }
  double horizon() const { return horizon_; }

  /// Windows for the unordered pair {a, b}, time-ascending.
  std::span<const ContactWindow> windows_between(NodeId a, NodeId b) const;

  /// Earliest window between a and b with end > t, if it starts before the horizon.
  std::optional<ContactWindow> next_window_after(NodeId a, NodeId b, double t) const;
  /// Window containing t, if any.
  std::optional<ContactWindow> window_at(NodeId a, NodeId b, double t) const;

  /// Static cluster ring edges.
  std::vector<NodePair> cluster_edges() const;
  /// Edges present at time t: ring edges plus windows containing t.
  std::vector<NodePair> snapshot(double t) const;

 private:
  static NodePair key(NodeId a, NodeId b) { return a < b ? NodePair{a, b} : NodePair{b, a}; }

  NodeCatalog nodes_;
  std::vector<Cluster> clusters_;
  std::vector<ContactWindow> windows_;
  std::map<NodePair, std::pair<std::size_t, std::size_t>> pair_index_;
  double horizon_ = 0.0;
};

/// Sorts and merges overlapping or touching intervals.
std::vector<Interval> merge_intervals(std::vector<Interval> intervals);

/// Union of every member-to-PS window of the cluster.
std::vector<Interval> cluster_windows(const TemporalContactGraph& g, const Cluster& c, NodeId ps);

struct ConnectivityStats {
  double duty_cycle = 0.0;  // fraction of [0, horizon] covered
  double max_gap = 0.0;     // longest uncovered stretch, including leading/trailing gaps
  std::size_t windows = 0;
};

ConnectivityStats connectivity_stats(std::span<const Interval> merged, double horizon);

enum class ScenarioClass { sporadic, near_persistent, inter_cluster };
std::string to_string(ScenarioClass c);

struct Thresholds {
  double duty_cycle = 0.90;
  double max_gap_s = 600.0;
  bool inter_cluster_links = false;
};

struct ClusterReport {
  int plane = 0;
  ConnectivityStats cluster;
  double max_member_duty_cycle = 0.0;
  double ring_clearance_km = 0.0;  // closest approach of ring LOS above the surface
};

struct ScenarioReport {
  ScenarioClass label = ScenarioClass::sporadic;
  std::vector<ClusterReport> clusters;
  std::vector<std::string> notes;
};

ScenarioReport classify(const TemporalContactGraph& g, NodeId ps, const Thresholds& thresholds);

/// Smallest height above the surface of any ring-adjacent line of sight at t.
/// Negative values mean the raw geometry blocks the ring link.
double ring_clearance_km(const NodeCatalog& nodes, const Cluster& c, double t);

/// Columns: node_a, node_b, start_s, end_s.
void write_windows_csv(std::ostream& out, std::span<const ContactWindow> windows);
/// One row per cluster followed by one row per member:
/// row, kind, cluster, intervals ("start-end;start-end").
void write_gantt_csv(std::ostream& out, const TemporalContactGraph& g, NodeId ps);

}  // namespace satfl::contact
