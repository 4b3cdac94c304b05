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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "satfl/cluster_aggregation.hpp"
#include "satfl/error.hpp"
#include "support.hpp"

using namespace satfl;
using namespace satfl::isl;
using contact::Interval;

namespace {

Cluster ring(std::size_t n) {
  Cluster c;
  for (std::uint32_t i = 0; i < n; ++i) c.members.push_back(NodeId::sat(i));
  return c;
}

fl::ClientUpdate update(NodeId id, std::vector<double> delta, double n, std::uint64_t version = 0) {
  fl::ClientUpdate u;
  u.client = id;
  u.delta = std::move(delta);
  u.n_samples = n;
  u.base_version = version;
  return u;
}

// Runs the tree reduction; returns the sink aggregate and the ring transmissions used.
std::pair<PartialAggregate, std::size_t> reduce(const Cluster& c, const RoutePlan& plan,
                                                const std::map<NodeId, fl::ClientUpdate>& updates) {
  std::vector<NodeId> order = c.members;
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return plan.depth.at(a) > plan.depth.at(b); });
  std::map<NodeId, PartialAggregate> done;
  std::size_t sent = 0;
  for (NodeId node : order) {
    std::vector<PartialAggregate> in;
    for (NodeId ch : plan.children(node)) in.push_back(done.at(ch));
    done[node] = aggregate_and_forward(updates.at(node), in);
    if (node != plan.sink) ++sent;
  }
  return {done.at(plan.sink), sent};
}

contact::TemporalContactGraph ring_graph(const Cluster& c, const std::vector<std::vector<Interval>>& member_windows,
                                         double horizon) {
  std::vector<contact::Node> nodes;
  const auto elem = orbit::OrbitElements::from_altitude(500.0, 0.0, 0.0, 0.0);
  for (NodeId m : c.members) nodes.push_back({m, elem});
  const NodeId ps = NodeId::sat(static_cast<std::uint32_t>(c.size()));
  nodes.push_back({ps, orbit::OrbitElements::from_altitude(2000.0, 0.0, 0.0, 0.0)});
  std::vector<contact::ContactWindow> windows;
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (const auto& iv : member_windows[i]) windows.push_back({c.members[i], ps, iv.start, iv.end});
  }
  return contact::TemporalContactGraph(contact::NodeCatalog(std::move(nodes), {}), {c}, std::move(windows),
                                       horizon);
}

struct OracleChoice {
  NodeId gateway;
  NodeId sink;
  double completion = 0.0;
};

// Exhaustive candidate enumeration from first principles: the sink's
// aggregate is complete once every member's update has travelled its ring
// distance, so t*(s) = max_v(ready_v + d(v, s) * hop).
OracleChoice oracle_sink(const contact::TemporalContactGraph& g, const Cluster& c, NodeId ps, double t,
                         const SinkTiming& timing) {
  const std::size_t n = c.size();
  OracleChoice out;
  double receive = std::numeric_limits<double>::infinity();
  std::size_t gpos = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& w : g.windows_between(c.members[i], ps)) {
      const double start = std::max(t, w.start);
      if (start + timing.download_s <= w.end) {
        if (start + timing.download_s < receive) {
          receive = start + timing.download_s;
          gpos = i;
        }
        break;
      }
    }
  }
  out.gateway = c.members[gpos];
  double best = std::numeric_limits<double>::infinity();
  const double hold = std::max(timing.margin_s, timing.upload_s);
  for (std::size_t s = 0; s < n; ++s) {
    double tstar = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      const double ready = receive + ring_distance(n, gpos, v) * timing.hop_s + timing.compute_s;
      tstar = std::max(tstar, ready + ring_distance(n, v, s) * timing.hop_s);
    }
    bool visible = false;
    for (const auto& w : g.windows_between(c.members[s], ps)) visible = visible || (w.start <= tstar && w.end >= tstar + hold);
    if (visible && tstar < best) {
      best = tstar;
      out.sink = c.members[s];
      out.completion = tstar;
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("cluster") {

TEST_CASE("ring trees") {
  const auto two = build_tree(ring(2), NodeId::sat(0));
  CHECK(two.parent.size() == 1);
  CHECK(two.parent.at(NodeId::sat(1)) == NodeId::sat(0));

  const auto eight = build_tree(ring(8), NodeId::sat(3));
  CHECK(eight.parent.size() == 7);
  CHECK(eight.max_depth() == 4);
  // every member reaches the sink along parents in exactly depth hops
  for (const auto& [node, depth] : eight.depth) {
    NodeId cur = node;
    std::size_t hops = 0;
    while (cur != eight.sink) {
      cur = eight.parent.at(cur);
      ++hops;
    }
    CHECK(hops == depth);
  }
  CHECK_THROWS(build_tree(ring(4), NodeId::sat(9)));
}

TEST_CASE("partial aggregates") {
  const auto leaf = aggregate_and_forward(update(NodeId::sat(5), {1.0, 2.0}, 3.0), {});
  CHECK(leaf.covered == std::vector<NodeId>{NodeId::sat(5)});
  CHECK(leaf.weighted_sum == std::vector<double>{3.0, 6.0});

  const auto a = PartialAggregate::from_update(update(NodeId::sat(1), {1.0, 0.0}, 1.0));
  const auto b = PartialAggregate::from_update(update(NodeId::sat(2), {0.0, 1.0}, 2.0));
  const std::vector<PartialAggregate> kids{a, b};
  const auto own = aggregate_and_forward(update(NodeId::sat(0), {1.0, 1.0}, 1.0), kids);
  CHECK(own.covered == std::vector<NodeId>{NodeId::sat(0), NodeId::sat(1), NodeId::sat(2)});
  CHECK(own.weighted_sum == std::vector<double>{2.0, 3.0});
  CHECK(own.weight_sum == 4.0);

  const std::vector<PartialAggregate> dup{a};
  CHECK_THROWS_AS(aggregate_and_forward(update(NodeId::sat(1), {0.0, 0.0}, 1.0), dup), DoubleCountError);
  const std::vector<PartialAggregate> stale{PartialAggregate::from_update(update(NodeId::sat(3), {0.0, 0.0}, 1.0, 7))};
  CHECK_THROWS_AS(aggregate_and_forward(update(NodeId::sat(0), {0.0, 0.0}, 1.0, 8), stale), SyncError);
}

TEST_CASE("tree reduction equals the centralized weighted sum") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::size_t> size(2, 16);
  std::uniform_real_distribution<double> weight(1.0, 500.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int round = 0; round < 50; ++round) {
    const std::size_t n = size(rng);
    const Cluster c = ring(n);
    const NodeId sink = c.members[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)];
    std::map<NodeId, fl::ClientUpdate> ups;
    std::vector<double> central(11, 0.0);
    double wsum = 0.0;
    for (NodeId m : c.members) {
      std::vector<double> d(11);
      for (auto& x : d) x = normal(rng);
      const double w = weight(rng);
      for (std::size_t j = 0; j < d.size(); ++j) central[j] += w * d[j];
      wsum += w;
      ups.emplace(m, update(m, d, w));
    }
    const auto plan = build_tree(c, sink);
    const auto [agg, sent] = reduce(c, plan, ups);
    CHECK(sent == n - 1);
    CHECK(agg.covered == c.members);
    CHECK(agg.weight_sum == doctest::Approx(wsum).epsilon(1e-14));
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < central.size(); ++j) {
      num += (agg.weighted_sum[j] - central[j]) * (agg.weighted_sum[j] - central[j]);
      den += central[j] * central[j];
    }
    CHECK(std::sqrt(num / den) < 1e-12);
  }
}

TEST_CASE("unicast forwarding cost") {
  for (std::size_t n = 2; n <= 16; ++n) {
    std::size_t hops = 0;
    const auto plan = build_tree(ring(n), NodeId::sat(0));
    for (const auto& [node, d] : plan.depth) hops += d;
    CHECK(unicast_transmissions(n) == hops);
    if (n % 2 == 0) CHECK(unicast_transmissions(n) == n * n / 4);
  }
  CHECK(unicast_transmissions(8) == 16);
}

TEST_CASE("PS delivery") {
  const fl::ModelVector base{{1.0, -1.0}, 3};
  const auto one = aggregate_and_forward(update(NodeId::sat(0), {0.5, 0.25}, 10.0, 3), {});
  const std::vector<PartialAggregate> single{one};
  const auto m = deliver_to_ps(base, single);
  CHECK(m.params == std::vector<double>{1.5, -0.75});
  CHECK(m.version == 4);

  // 5 rings of 8 with equal weights give the plain average of all 40 deltas
  std::vector<PartialAggregate> clusters;
  std::vector<double> total(3, 0.0);
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> small(-50, 50);
  for (std::uint32_t q = 0; q < 5; ++q) {
    Cluster c;
    std::map<NodeId, fl::ClientUpdate> ups;
    for (std::uint32_t j = 0; j < 8; ++j) {
      const NodeId id = NodeId::sat(q * 8 + j);
      c.members.push_back(id);
      std::vector<double> d{double(small(rng)), double(small(rng)), double(small(rng))};
      for (std::size_t k = 0; k < 3; ++k) total[k] += d[k];
      ups.emplace(id, update(id, d, 1.0, 3));
    }
    clusters.push_back(reduce(c, build_tree(c, c.members[q]), ups).first);
  }
  const fl::ModelVector base3{{1.0, -1.0, 0.5}, 3};
  const auto avg = deliver_to_ps(base3, clusters);
  for (std::size_t k = 0; k < 3; ++k) CHECK(avg.params[k] == doctest::Approx(base3.params[k] + total[k] / 40.0).epsilon(1e-15));
  clusters[1].base_version = 2;
  CHECK_THROWS_AS(deliver_to_ps(base3, clusters), SyncError);
  CHECK_THROWS_AS(deliver_to_ps(base3, std::span<const PartialAggregate>{}), SyncError);
}

TEST_CASE("sink with a single visible member") {
  const Cluster c = ring(6);
  std::vector<std::vector<Interval>> w(6);
  w[4] = {{0.0, 1e5}};
  const auto g = ring_graph(c, w, 1e5);
  const NodeId ps = NodeId::sat(6);
  for (double t : {0.0, 500.0, 4000.0}) {
    const auto ch = select_sink(g, c, ps, t, {});
    CHECK(ch.sink == NodeId::sat(4));
    CHECK(ch.gateway == NodeId::sat(4));
    CHECK_FALSE(ch.fallback);
  }
}

TEST_CASE("symmetric ring picks the member opposite the gateway") {
  const Cluster c = ring(8);
  const std::vector<std::vector<Interval>> w(8, {{0.0, 1e5}});
  const auto g = ring_graph(c, w, 1e5);
  SinkTiming timing;
  timing.hop_s = 0.5;
  const auto ch = select_sink(g, c, NodeId::sat(8), 0.0, timing);
  CHECK(ch.gateway == NodeId::sat(0));
  CHECK(ch.sink == NodeId::sat(4));
  CHECK(ch.predicted_completion == doctest::Approx(timing.download_s + timing.compute_s + 4 * 0.5));
  const auto again = select_sink(g, c, NodeId::sat(8), 0.0, timing);
  CHECK(again.sink == ch.sink);
}

TEST_CASE("no member can receive the model") {
  const Cluster c = ring(3);
  const auto g = ring_graph(c, std::vector<std::vector<Interval>>(3), 1000.0);
  CHECK_THROWS_AS(select_sink(g, c, NodeId::sat(3), 0.0, {}), HorizonExhaustedError);
}

TEST_CASE("fallback when nobody sees the PS at completion") {
  const Cluster c = ring(4);
  std::vector<std::vector<Interval>> w(4);
  w[0] = {{0.0, 10.0}};
  w[2] = {{500.0, 900.0}};
  const auto g = ring_graph(c, w, 1000.0);
  const auto ch = select_sink(g, c, NodeId::sat(4), 0.0, {});
  CHECK(ch.fallback);
  CHECK(ch.sink == NodeId::sat(2));
}

TEST_CASE("equatorial golden plane matches the exhaustive oracle") {
  const auto sc = build_scenario(test::golden("fig4_equatorial2000"));
  const auto& cluster = sc.clusters.at(1);
  SinkTiming timing;
  timing.download_s = sc.delay.transfer_s(LinkClass::ps, 2000.0);
  timing.upload_s = timing.download_s;
  timing.hop_s = sc.delay.transfer_s(LinkClass::ring, 5000.0);
  timing.compute_s = sc.delay.predicted_compute_s();
  for (double t : {0.0, 1800.0, 5400.0, 20000.0}) {
    const auto oracle = oracle_sink(sc.graph, cluster, sc.ps, t, timing);
    const auto ch = select_sink(sc.graph, cluster, sc.ps, t, timing);
    CHECK(ch.gateway == oracle.gateway);
    if (ch.fallback) continue;
    CHECK(ch.sink == oracle.sink);
    CHECK(ch.predicted_completion == doctest::Approx(oracle.completion).epsilon(1e-12));
  }
}

}  // TEST_SUITE
