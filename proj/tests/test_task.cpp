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

#include <cmath>
#include <random>
#include <set>

#include "satfl/error.hpp"
#include "satfl/task.hpp"

#include <Eigen/Dense>

using namespace satfl;
using namespace satfl::fl;

namespace {

TaskSpec quadratic_spec() {
  TaskSpec t;
  t.kind = TaskKind::quadratic_least_squares;
  t.partition = Partition::iid;
  t.dimension = 6;
  t.samples_per_client = 50;
  t.batch_size = 50;
  t.local_steps = 1;
  t.test_samples = 100;
  return t;
}

TaskSpec logistic_spec() {
  TaskSpec t;
  t.kind = TaskKind::logistic_2class;
  t.partition = Partition::paper_non_iid;
  t.class_shift = 3.0;
  return t;
}

PartitionLayout layout_40() {
  PartitionLayout l;
  for (std::uint32_t i = 0; i < 40; ++i) l.clients.push_back(NodeId::sat(i));
  l.planes = 5;
  l.per_plane = 8;
  return l;
}

std::vector<double> random_point(std::mt19937_64& rng, std::size_t n, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  std::vector<double> p(n);
  for (auto& x : p) x = normal(rng);
  return p;
}

void check_gradient(const TaskSpec& task, const Dataset& data, std::mt19937_64& rng) {
  const std::size_t m = task.model_dimension();
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = random_point(rng, m, 0.5);
    const auto g = full_gradient(task, p, data);
    for (std::size_t j = 0; j < m; ++j) {
      const double h = 1e-5 * std::max(1.0, std::abs(p[j]));
      auto hi = p, lo = p;
      hi[j] += h;
      lo[j] -= h;
      const double fd = (loss(task, hi, data) - loss(task, lo, data)) / (2.0 * h);
      const double scale = std::max(std::abs(g[j]), 1e-3);
      CHECK(std::abs(fd - g[j]) / scale < 1e-6);
    }
  }
}

}  // namespace

TEST_SUITE("task") {

TEST_CASE("analytic gradients match central differences") {
  std::mt19937_64 rng(3);
  {
    const auto task = quadratic_spec();
    const auto data = generate_data(task, 200, 5);
    check_gradient(task, data.train, rng);
  }
  {
    const auto task = logistic_spec();
    const auto data = generate_data(task, 200, 5);
    check_gradient(task, data.train, rng);
  }
}

TEST_CASE("one full-batch step equals -lr times the closed-form gradient") {
  const auto task = quadratic_spec();
  const auto data = generate_data(task, task.samples_per_client, 11);
  const auto& ds = data.train;
  const std::size_t n = ds.rows(), d = ds.cols;
  Eigen::MatrixXd X(n, d);
  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) X(i, j) = ds.row(i)[j];
    y(i) = ds.labels[i];
  }
  const Eigen::MatrixXd A = X.transpose() * X / static_cast<double>(n);
  const Eigen::VectorXd b = X.transpose() * y / static_cast<double>(n);

  std::mt19937_64 rng(9);
  ModelVector model{random_point(rng, d, 1.0), 4};
  const auto u = local_train(model, ds, task, 1);
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(model.params.data(), d);
  const Eigen::VectorXd expected = -task.learning_rate * (A * w - b);
  for (std::size_t j = 0; j < d; ++j) CHECK(u.delta[j] == doctest::Approx(expected(j)).epsilon(1e-12));
  CHECK(u.base_version == 4);
  CHECK(u.n_samples == static_cast<double>(n));

  // stationary point: no movement
  const Eigen::VectorXd opt = A.ldlt().solve(b);
  ModelVector at_opt{std::vector<double>(opt.data(), opt.data() + d), 0};
  const auto still = local_train(at_opt, ds, task, 1);
  for (double v : still.delta) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("logistic delta is bounded by lr * steps * max feature norm") {
  auto task = logistic_spec();
  task.local_steps = 7;
  const auto data = generate_data(task, 300, 2);
  double bound = 0.0;
  for (std::size_t i = 0; i < data.train.rows(); ++i) {
    double s = 1.0;
    for (double x : data.train.row(i)) s += x * x;
    bound = std::max(bound, std::sqrt(s));
  }
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    ModelVector m{random_point(rng, task.model_dimension(), 3.0), 0};
    const auto u = local_train(m, data.train, task, static_cast<std::uint64_t>(trial));
    double n2 = 0.0;
    for (double v : u.delta) n2 += v * v;
    CHECK(std::sqrt(n2) <= task.learning_rate * task.local_steps * bound * (1.0 + 1e-12));
  }
}

TEST_CASE("iid partition splits evenly") {
  auto task = logistic_spec();
  task.partition = Partition::iid;
  const auto data = generate_data(task, 4000, 1);
  const auto parts = partition_data(data.train, layout_40(), task, 1);
  REQUIRE(parts.size() == 40);
  for (const auto& [id, ds] : parts) CHECK(ds.rows() == 100);
}

TEST_CASE("non-iid split keeps the group-A components on 20 clients") {
  const auto task = logistic_spec();
  const auto data = generate_data(task, 40 * task.samples_per_client, 1);
  const auto parts = partition_data(data.train, layout_40(), task, 1);
  int group_a = 0;
  for (const auto& [id, ds] : parts) {
    std::set<int> modes(ds.modes.begin(), ds.modes.end());
    std::set<double> labels(ds.labels.begin(), ds.labels.end());
    CHECK(modes.size() == 1);
    CHECK(labels.size() == 2);
    const bool expect_a = id.index < 16 || (id.index >= 16 && id.index < 20);
    CHECK((*modes.begin() == 0) == expect_a);
    if (*modes.begin() == 0) ++group_a;
  }
  CHECK(group_a == 20);

  const auto again = partition_data(data.train, layout_40(), task, 1);
  for (const auto& [id, ds] : parts) {
    CHECK(ds.features == again.at(id).features);
    CHECK(ds.labels == again.at(id).labels);
  }
}

TEST_CASE("non-iid split needs the 40/5/8 layout and class labels") {
  const auto task = logistic_spec();
  const auto data = generate_data(task, 400, 1);
  PartitionLayout small = layout_40();
  small.clients.resize(10);
  small.planes = 5;
  small.per_plane = 2;
  CHECK_THROWS_AS(partition_data(data.train, small, task, 1), ConfigError);
  auto q = quadratic_spec();
  q.partition = Partition::paper_non_iid;
  CHECK_THROWS_AS(q.validate(), ConfigError);
}

TEST_CASE("data generation is deterministic and test set independent of train size") {
  const auto task = logistic_spec();
  const auto a = generate_data(task, 100, 8);
  const auto b = generate_data(task, 100, 8);
  const auto c = generate_data(task, 500, 8);
  CHECK(a.train.features == b.train.features);
  CHECK(a.test.features == c.test.features);
  CHECK(a.test.labels == c.test.labels);
}

TEST_CASE("divergence reports the failing step") {
  auto task = quadratic_spec();
  task.learning_rate = 1e150;
  task.local_steps = 10;
  const auto data = generate_data(task, task.samples_per_client, 1);
  ModelVector m{std::vector<double>(task.dimension, 1.0), 0};
  try {
    local_train(m, data.train, task, 1);
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(e.step() > 0);
    CHECK(e.step() < 10);
  }
  std::vector<double> bad{1.0, std::nan("")};
  CHECK_THROWS_AS(check_finite(bad, "test", 3), DivergenceError);
}

TEST_CASE("a constant predictor scores one half") {
  const auto task = logistic_spec();
  const auto data = generate_data(task, 100, 4);
  const std::vector<double> zero(task.model_dimension(), 0.0);
  CHECK(accuracy(task, zero, data.test) == doctest::Approx(0.5));
  const auto q = quadratic_spec();
  const auto qd = generate_data(q, 10, 4);
  CHECK(std::isnan(accuracy(q, std::vector<double>(6, 0.0), qd.test)));
}

}  // TEST_SUITE
