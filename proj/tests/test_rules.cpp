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
#include <random>

#include "satfl/aggregation.hpp"
#include "satfl/error.hpp"

using namespace satfl;
using namespace satfl::fl;

namespace {

ClientUpdate update(std::vector<double> delta, double n, std::uint64_t version = 0, std::uint32_t id = 0) {
  ClientUpdate u;
  u.delta = std::move(delta);
  u.n_samples = n;
  u.base_version = version;
  u.client = NodeId::sat(id);
  return u;
}

}  // namespace

TEST_SUITE("rules") {

TEST_CASE("fedavg arithmetic") {
  const ModelVector base{{1.0, 2.0, 3.0}, 5};
  {
    const std::vector<ClientUpdate> one{update({0.5, -1.0, 2.0}, 10, 5)};
    const auto m = fedavg_aggregate(base, one);
    CHECK(m.params == std::vector<double>{1.5, 1.0, 5.0});
    CHECK(m.version == 6);
  }
  {
    const std::vector<ClientUpdate> cancel{update({1, 1, 1}, 4, 5, 0), update({-1, -1, -1}, 4, 5, 1)};
    CHECK(fedavg_aggregate(base, cancel).params == base.params);
  }
  {
    const std::vector<ClientUpdate> weighted{update({4, 4, 4}, 3, 5, 0), update({0, 0, 0}, 1, 5, 1)};
    CHECK(fedavg_aggregate(base, weighted).params == std::vector<double>{4.0, 5.0, 6.0});
  }
  {
    const std::vector<ClientUpdate> zeros{update({0, 0, 0}, 7, 5, 0), update({0, 0, 0}, 2, 5, 1)};
    CHECK(fedavg_aggregate(base, zeros).params == base.params);
  }
  {
    const std::vector<ClientUpdate> mixed{update({1, 1, 1}, 1, 5, 0), update({1, 1, 1}, 1, 4, 1)};
    CHECK_THROWS_AS(fedavg_aggregate(base, mixed), SyncError);
  }
}

TEST_CASE("fedsat incremental rule") {
  ModelVector g{{0.0, 0.0}, 0};
  const auto m = fedsat_apply(g, update({4.0, -8.0}, 25), 100.0);
  CHECK(m.params == std::vector<double>{1.0, -2.0});
  CHECK(m.version == 1);

  // N equal clients with the same delta move the model by exactly that delta
  ModelVector h{{0.0, 0.0}, 0};
  for (int k = 0; k < 8; ++k) h = fedsat_apply(h, update({0.5, 1.5}, 10), 80.0);
  CHECK(h.params == std::vector<double>{0.5, 1.5});

  // arrival order does not change the endpoint for fixed deltas
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<ClientUpdate> ups;
  for (int k = 0; k < 6; ++k) ups.push_back(update({normal(rng), normal(rng)}, 1.0 + k, 0, k));
  std::vector<int> order{0, 1, 2, 3, 4, 5};
  ModelVector ref{{0.0, 0.0}, 0};
  for (int k : order) ref = fedsat_apply(ref, ups[k], 21.0);
  std::shuffle(order.begin(), order.end(), rng);
  ModelVector alt{{0.0, 0.0}, 0};
  for (int k : order) alt = fedsat_apply(alt, ups[k], 21.0);
  for (int j = 0; j < 2; ++j) CHECK(alt.params[j] == doctest::Approx(ref.params[j]).epsilon(1e-14));
}

TEST_CASE("fedasync mixing") {
  CHECK(fedasync_mixing({1.0, 0.5}, 0) == 1.0);
  CHECK(fedasync_mixing({0.6, 0.5}, 3) == doctest::Approx(0.3));
  CHECK(fedasync_mixing({0.6, 0.0}, 99) == 0.6);

  const ModelVector global{{10.0, 10.0}, 0};
  const std::vector<double> base{10.0, 10.0};
  const auto full = fedasync_apply(global, update({1.0, -1.0}, 5), base, {1.0, 0.5});
  CHECK(full.params == std::vector<double>{11.0, 9.0});

  // stale update: mixed against the current model, built from the old base
  const ModelVector later{{20.0, 20.0}, 3};
  const std::vector<double> old{0.0, 0.0};
  const auto m = fedasync_apply(later, update({4.0, 8.0}, 5, 0), old, {0.6, 0.5});
  CHECK(m.params[0] == doctest::Approx(0.7 * 20.0 + 0.3 * 4.0));
  CHECK(m.params[1] == doctest::Approx(0.7 * 20.0 + 0.3 * 8.0));
  CHECK(m.version == 4);
}

}  // TEST_SUITE
