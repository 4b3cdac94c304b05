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

#include "satfl/contact_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "satfl/csv.hpp"
#include "satfl/error.hpp"

namespace satfl::contact {

std::string NodeId::str() const {
  return (kind == NodeKind::satellite ? "sat" : "gs") + std::to_string(index);
}

NodeCatalog::NodeCatalog(std::vector<Node> nodes, orbit::EarthFrame frame)
    : nodes_(std::move(nodes)), frame_(frame) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!index_.emplace(nodes_[i].id, i).second) {
      throw ConfigError("duplicate node id " + nodes_[i].id.str());
    }
    const bool ground = nodes_[i].is_ground();
    if (ground != (nodes_[i].id.kind == NodeKind::ground_station)) {
      throw ConfigError("node " + nodes_[i].id.str() + " has mismatched geometry kind");
    }
  }
}

const Node& NodeCatalog::at(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw ConfigError("unknown node " + id.str());
  return nodes_[it->second];
}

bool NodeCatalog::contains(NodeId id) const { return index_.contains(id); }

orbit::EciPosition NodeCatalog::position(NodeId id, double t) const {
  const Node& n = at(id);
  if (const auto* gs = std::get_if<orbit::GroundStation>(&n.geometry)) {
    return orbit::ground_station_eci(*gs, t, frame_);
  }
  return orbit::propagate(std::get<orbit::OrbitElements>(n.geometry), t);
}

orbit::LinkRule rule_for(const Node& a, const Node& b, const LinkRules& rules) {
  orbit::LinkRule r;
  r.grazing_altitude_km = rules.grazing_altitude_km;
  if (const auto* gs = std::get_if<orbit::GroundStation>(&a.geometry)) {
    r.kind = orbit::LinkKind::ground;
    r.min_elevation_deg = gs->min_elevation_deg;
  } else if (const auto* gsb = std::get_if<orbit::GroundStation>(&b.geometry)) {
    r.kind = orbit::LinkKind::ground;
    r.min_elevation_deg = gsb->min_elevation_deg;
  } else {
    r.kind = orbit::LinkKind::space;
  }
  return r;
}

bool visible(const NodeCatalog& nodes, NodeId a, NodeId b, double t, const LinkRules& rules) {
  const Node& na = nodes.at(a);
  const Node& nb = nodes.at(b);
  const orbit::LinkRule rule = rule_for(na, nb, rules);
  const auto pa = nodes.position(a, t);
  const auto pb = nodes.position(b, t);
  // the ground station is always the observer
  if (rule.kind == orbit::LinkKind::ground && !na.is_ground()) return orbit::visible(pb, pa, rule);
  return orbit::visible(pa, pb, rule);
}

namespace {

double refine_boundary(const NodeCatalog& nodes, NodeId a, NodeId b, const LinkRules& rules,
                       double lo, double hi, bool lo_state) {
  // Bisect to half the requested resolution so the midpoint is within
  // refine_s/4 of the true crossing.
  const double tol = rules.refine_s * 0.5;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (visible(nodes, a, b, mid, rules) == lo_state) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<ContactWindow> compute_windows(const NodeCatalog& nodes, std::span<const NodePair> pairs,
                                           const LinkRules& rules, double horizon, double step) {
  if (!(step > 0.0)) throw ConfigError("contact sampling step must be positive");
  if (!(horizon > 0.0)) throw ConfigError("contact horizon must be positive");
  if (!(rules.refine_s > 0.0)) throw ConfigError("contact refinement must be positive");
  std::vector<ContactWindow> out;
  if (horizon < step) return out;

  for (const auto& [a, b] : pairs) {
    bool prev = visible(nodes, a, b, 0.0, rules);
    double prev_t = 0.0;
    double open = 0.0;
    for (std::size_t k = 1;; ++k) {
      const double t = std::min(static_cast<double>(k) * step, horizon);
      const bool cur = visible(nodes, a, b, t, rules);
      if (cur != prev) {
        const double boundary = refine_boundary(nodes, a, b, rules, prev_t, t, prev);
        if (cur) {
          open = boundary;
        } else if (boundary > open) {
          out.push_back({a, b, open, boundary});
        }
      }
      prev = cur;
      prev_t = t;
      if (t >= horizon) break;
    }
    if (prev && horizon > open) out.push_back({a, b, open, horizon});
  }
  return out;
}

std::size_t Cluster::position_of(NodeId id) const {
  auto it = std::find(members.begin(), members.end(), id);
  return it == members.end() ? npos : static_cast<std::size_t>(it - members.begin());
}

TemporalContactGraph::TemporalContactGraph(NodeCatalog nodes, std::vector<Cluster> clusters,
                                           std::vector<ContactWindow> windows, double horizon)
    : nodes_(std::move(nodes)),
      clusters_(std::move(clusters)),
      windows_(std::move(windows)),
      horizon_(horizon) {
  for (const auto& c : clusters_) {
    if (c.members.empty()) throw ConfigError("cluster " + std::to_string(c.plane) + " is empty");
  }
  for (const auto& w : windows_) {
    if (!(w.start < w.end)) throw ConfigError("contact window with start >= end");
    if (w.start < 0.0 || w.end > horizon_) throw ConfigError("contact window outside horizon");
  }
  std::stable_sort(windows_.begin(), windows_.end(), [](const ContactWindow& x, const ContactWindow& y) {
    const auto kx = key(x.a, x.b), ky = key(y.a, y.b);
    if (kx != ky) return kx < ky;
    return x.start < y.start;
  });
  std::size_t i = 0;
  while (i < windows_.size()) {
    const auto k = key(windows_[i].a, windows_[i].b);
    std::size_t j = i;
    while (j < windows_.size() && key(windows_[j].a, windows_[j].b) == k) {
      if (j > i && windows_[j].start < windows_[j - 1].end) {
        throw ConfigError("overlapping windows for pair " + k.first.str() + "-" + k.second.str());
      }
      ++j;
    }
    pair_index_.emplace(k, std::pair{i, j});
    i = j;
  }
}

std::span<const ContactWindow> TemporalContactGraph::windows_between(NodeId a, NodeId b) const {
  auto it = pair_index_.find(key(a, b));
  if (it == pair_index_.end()) return {};
  return std::span<const ContactWindow>(windows_).subspan(it->second.first,
                                                          it->second.second - it->second.first);
}

std::optional<ContactWindow> TemporalContactGraph::next_window_after(NodeId a, NodeId b,
                                                                     double t) const {
  const auto ws = windows_between(a, b);
  auto it = std::upper_bound(ws.begin(), ws.end(), t,
                             [](double v, const ContactWindow& w) { return v < w.end; });
  if (it == ws.end() || it->start >= horizon_) return std::nullopt;
  return *it;
}

std::optional<ContactWindow> TemporalContactGraph::window_at(NodeId a, NodeId b, double t) const {
  auto w = next_window_after(a, b, t);
  if (w && w->start <= t) return w;
  return std::nullopt;
}

std::vector<NodePair> TemporalContactGraph::cluster_edges() const {
  std::vector<NodePair> edges;
  for (const auto& c : clusters_) {
    const std::size_t n = c.members.size();
    if (n < 2) continue;
    // a ring of two has a single edge
    const std::size_t count = n == 2 ? 1 : n;
    for (std::size_t i = 0; i < count; ++i) edges.push_back(key(c.members[i], c.members[(i + 1) % n]));
  }
  return edges;
}

std::vector<NodePair> TemporalContactGraph::snapshot(double t) const {
  std::vector<NodePair> edges = cluster_edges();
  for (const auto& [k, range] : pair_index_) {
    for (std::size_t i = range.first; i < range.second; ++i) {
      if (windows_[i].contains(t)) {
        edges.push_back(k);
        break;
      }
    }
  }
  return edges;
}

std::vector<Interval> merge_intervals(std::vector<Interval> intervals) {
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& x, const Interval& y) { return x.start < y.start; });
  std::vector<Interval> merged;
  for (const auto& iv : intervals) {
    if (!merged.empty() && iv.start <= merged.back().end) {
      merged.back().end = std::max(merged.back().end, iv.end);
    } else {
      merged.push_back(iv);
    }
  }
  return merged;
}

std::vector<Interval> cluster_windows(const TemporalContactGraph& g, const Cluster& c, NodeId ps) {
  std::vector<Interval> all;
  for (NodeId m : c.members) {
    for (const auto& w : g.windows_between(m, ps)) all.push_back(w.interval());
  }
  return merge_intervals(std::move(all));
}

ConnectivityStats connectivity_stats(std::span<const Interval> merged, double horizon) {
  ConnectivityStats s;
  s.windows = merged.size();
  if (!(horizon > 0.0)) return s;
  double covered = 0.0;
  double cursor = 0.0;
  for (const auto& iv : merged) {
    covered += iv.end - iv.start;
    s.max_gap = std::max(s.max_gap, iv.start - cursor);
    cursor = std::max(cursor, iv.end);
  }
  s.max_gap = std::max(s.max_gap, horizon - cursor);
  s.duty_cycle = std::clamp(covered / horizon, 0.0, 1.0);
  return s;
}

std::string to_string(ScenarioClass c) {
  switch (c) {
    case ScenarioClass::sporadic:
      return "sporadic";
    case ScenarioClass::near_persistent:
      return "near-persistent";
    case ScenarioClass::inter_cluster:
      return "inter-cluster";
  }
  return "unknown";
}

double ring_clearance_km(const NodeCatalog& nodes, const Cluster& c, double t) {
  const std::size_t n = c.members.size();
  if (n < 2) return std::numeric_limits<double>::infinity();
  double clearance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const auto pa = nodes.position(c.members[i], t);
    const auto pb = nodes.position(c.members[(i + 1) % n], t);
    clearance = std::min(clearance, orbit::segment_closest_approach_km(pa, pb) - orbit::kEarthRadiusKm);
  }
  return clearance;
}

ScenarioReport classify(const TemporalContactGraph& g, NodeId ps, const Thresholds& thresholds) {
  if (g.clusters().empty()) throw ConfigError("classification requires at least one cluster");
  ScenarioReport report;
  if (g.horizon() < 86400.0) {
    report.notes.push_back("horizon shorter than 24 h; statistics may not be representative");
  }
  bool persistent = true;
  for (const auto& c : g.clusters()) {
    ClusterReport cr;
    cr.plane = c.plane;
    const auto merged = cluster_windows(g, c, ps);
    cr.cluster = connectivity_stats(merged, g.horizon());
    for (NodeId m : c.members) {
      std::vector<Interval> own;
      for (const auto& w : g.windows_between(m, ps)) own.push_back(w.interval());
      cr.max_member_duty_cycle =
          std::max(cr.max_member_duty_cycle, connectivity_stats(own, g.horizon()).duty_cycle);
    }
    cr.ring_clearance_km = ring_clearance_km(g.catalog(), c, 0.0);
    if (c.members.size() > 1 && cr.ring_clearance_km < 0.0) {
      report.notes.push_back("plane " + std::to_string(c.plane) +
                             ": ring line of sight passes " + csv::num(-cr.ring_clearance_km, 1) +
                             " km below the surface; ring links are modelled as static bit-pipes");
    }
    persistent = persistent && cr.cluster.duty_cycle >= thresholds.duty_cycle &&
                 cr.cluster.max_gap <= thresholds.max_gap_s;
    report.clusters.push_back(cr);
  }
  if (thresholds.inter_cluster_links) {
    report.label = ScenarioClass::inter_cluster;
    report.notes.push_back("inter-cluster links enabled: no strategy implemented for this class");
  } else {
    report.label = persistent ? ScenarioClass::near_persistent : ScenarioClass::sporadic;
  }
  return report;
}

void write_windows_csv(std::ostream& out, std::span<const ContactWindow> windows) {
  csv::Writer w(out);
  w.row({"node_a", "node_b", "start_s", "end_s"});
  for (const auto& cw : windows) {
    w.row({cw.a.str(), cw.b.str(), csv::num(cw.start, 3), csv::num(cw.end, 3)});
  }
}

namespace {

std::string interval_list(std::span<const Interval> ivs) {
  std::string s;
  for (const auto& iv : ivs) {
    if (!s.empty()) s += ';';
    s += csv::num(iv.start, 1) + "-" + csv::num(iv.end, 1);
  }
  return s;
}

}  // namespace

void write_gantt_csv(std::ostream& out, const TemporalContactGraph& g, NodeId ps) {
  csv::Writer w(out);
  w.row({"row", "kind", "cluster", "intervals"});
  for (const auto& c : g.clusters()) {
    const std::string plane = std::to_string(c.plane);
    w.row({"cluster" + plane, "cluster", plane, interval_list(cluster_windows(g, c, ps))});
    for (NodeId m : c.members) {
      std::vector<Interval> own;
      for (const auto& cw : g.windows_between(m, ps)) own.push_back(cw.interval());
      w.row({m.str(), "member", plane, interval_list(own)});
    }
  }
}

}  // namespace satfl::contact
