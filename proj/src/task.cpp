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

#include "satfl/task.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numbers>
#include <limits>
#include <numeric>
#include <random>

#include "satfl/error.hpp"
#include "satfl/kernels.hpp"

namespace satfl::fl {

std::string to_string(TaskKind k) {
  return k == TaskKind::logistic_2class ? "logistic-2class" : "quadratic-least-squares";
}

std::string to_string(Partition p) { return p == Partition::iid ? "iid" : "paper-non-iid"; }

TaskKind parse_task_kind(const std::string& s) {
  if (s == "logistic-2class") return TaskKind::logistic_2class;
  if (s == "quadratic-least-squares") return TaskKind::quadratic_least_squares;
  throw ConfigError("unknown task kind '" + s + "'");
}

Partition parse_partition(const std::string& s) {
  if (s == "iid") return Partition::iid;
  if (s == "paper-non-iid") return Partition::paper_non_iid;
  throw ConfigError("unknown partition scheme '" + s + "'");
}

std::size_t TaskSpec::model_dimension() const {
  return kind == TaskKind::logistic_2class ? dimension + 1 : dimension;
}

void TaskSpec::validate() const {
  if (dimension == 0) throw ConfigError("task: dimension must be positive");
  if (batch_size == 0) throw ConfigError("task: batch_size must be positive");
  if (!(learning_rate > 0.0)) throw ConfigError("task: learning_rate must be positive");
  if (local_steps == 0) throw ConfigError("task: local_steps must be positive");
  if (samples_per_client == 0) throw ConfigError("task: samples_per_client must be positive");
  if (batch_size > samples_per_client) {
    throw ConfigError("task: batch_size exceeds the per-client sample count");
  }
  if (test_samples == 0) throw ConfigError("task: test_samples must be positive");
  if (!(condition >= 1.0)) throw ConfigError("task: condition must be >= 1");
  if (!(noise >= 0.0) || !(class_separation >= 0.0) || !std::isfinite(feature_offset) ||
      !std::isfinite(class_shift)) {
    throw ConfigError("task: data shape parameters must be finite and non-negative");
  }
  if (!(mode_angle_deg >= 0.0 && mode_angle_deg <= 180.0)) {
    throw ConfigError("task: mode_angle_deg must lie in [0, 180]");
  }
  if (partition == Partition::paper_non_iid && kind != TaskKind::logistic_2class) {
    throw ConfigError("task: paper-non-iid partition needs class labels (logistic-2class)");
  }
}

void Dataset::push_back(std::span<const double> x, double y, int mode) {
  features.insert(features.end(), x.begin(), x.end());
  labels.push_back(y);
  modes.push_back(mode);
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

std::vector<double> random_unit(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(d);
  double n2 = 0.0;
  while (n2 < 1e-12) {
    for (auto& x : v) x = normal(rng);
    n2 = kernels::scalar::dot(v.data(), v.data(), d);
  }
  kernels::scalar::scale(1.0 / std::sqrt(n2), v.data(), d);
  return v;
}

// Removes the components of v along the given unit vectors and normalizes.
// Returns false when nothing is left.
bool orthonormalize(std::vector<double>& v, std::initializer_list<const std::vector<double>*> basis) {
  const std::size_t d = v.size();
  for (const auto* b : basis) {
    const double p = kernels::scalar::dot(b->data(), v.data(), d);
    kernels::scalar::axpy(-p, b->data(), v.data(), d);
  }
  const double n2 = kernels::scalar::dot(v.data(), v.data(), d);
  if (n2 <= 1e-12) return false;
  kernels::scalar::scale(1.0 / std::sqrt(n2), v.data(), d);
  return true;
}

// means[mode][label]
struct MixtureShape {
  std::vector<double> means[2][2];
};

MixtureShape mixture_shape(const TaskSpec& task, std::mt19937_64& rng) {
  const std::size_t d = task.dimension;
  const auto u0 = random_unit(rng, d);
  auto w = random_unit(rng, d);
  if (!orthonormalize(w, {&u0})) w.assign(d, 0.0);
  auto v = random_unit(rng, d);
  if (!orthonormalize(v, {&u0, &w})) v.assign(d, 0.0);
  const double theta = task.mode_angle_deg * std::numbers::pi / 180.0;
  std::vector<double> u1(d);
  for (std::size_t j = 0; j < d; ++j) u1[j] = std::cos(theta) * u0[j] + std::sin(theta) * w[j];

  MixtureShape m;
  for (int mode = 0; mode < 2; ++mode) {
    const auto& u = mode == 0 ? u0 : u1;
    for (int label = 0; label < 2; ++label) {
      const double along = task.class_shift + (label ? 0.5 : -0.5) * task.class_separation;
      auto& mean = m.means[mode][label];
      mean.resize(d);
      for (std::size_t j = 0; j < d; ++j) mean[j] = task.feature_offset * v[j] + along * u[j];
    }
  }
  return m;
}

// Rows cycle through (label, mode) so every component is equally frequent.
void draw_logistic(const MixtureShape& shape, std::size_t count, std::mt19937_64& rng, Dataset& out) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t d = shape.means[0][0].size();
  std::vector<double> x(d);
  for (std::size_t i = 0; i < count; ++i) {
    const int label = static_cast<int>(i % 2);
    const int mode = static_cast<int>((i / 2) % 2);
    const auto& mean = shape.means[mode][label];
    for (std::size_t j = 0; j < d; ++j) x[j] = mean[j] + normal(rng);
    out.push_back(x, label, mode);
  }
}

void draw_quadratic(const TaskSpec& task, std::span<const double> truth, std::size_t count,
                    std::mt19937_64& rng, Dataset& out) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t d = task.dimension;
  std::vector<double> x(d);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double frac = d > 1 ? static_cast<double>(j) / static_cast<double>(d - 1) : 0.0;
      x[j] = std::pow(task.condition, 0.5 * frac) * normal(rng);
    }
    const double y = kernels::scalar::dot(x.data(), truth.data(), d) + task.noise * normal(rng);
    out.push_back(x, y);
  }
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(-s z)) for s in {-1, +1}, computed without overflow.
double logistic_loss(double z, double label) {
  const double m = label > 0.5 ? z : -z;
  return m > 0.0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
}

}  // namespace

SyntheticData generate_data(const TaskSpec& task, std::size_t train_samples, std::uint64_t seed) {
  task.validate();
  std::mt19937_64 rng(mix_seed(seed, 0xda7a));
  SyntheticData out;
  out.train.cols = out.test.cols = task.dimension;
  if (task.kind == TaskKind::logistic_2class) {
    const auto shape = mixture_shape(task, rng);
    draw_logistic(shape, task.test_samples, rng, out.test);
    draw_logistic(shape, train_samples, rng, out.train);
  } else {
    std::normal_distribution<double> normal(0.0, 1.0);
    out.truth.resize(task.dimension);
    for (auto& w : out.truth) w = normal(rng);
    draw_quadratic(task, out.truth, task.test_samples, rng, out.test);
    draw_quadratic(task, out.truth, train_samples, rng, out.train);
  }
  return out;
}

namespace {

Dataset gather(const Dataset& data, std::span<const std::size_t> rows) {
  Dataset out;
  out.cols = data.cols;
  out.features.reserve(rows.size() * data.cols);
  out.labels.reserve(rows.size());
  for (std::size_t r : rows) out.push_back(data.row(r), data.labels[r], data.modes[r]);
  return out;
}

// Splits `rows` into `parts` contiguous chunks; the first (size % parts)
// chunks get one extra element.
std::vector<std::span<const std::size_t>> split_even(std::span<const std::size_t> rows,
                                                     std::size_t parts) {
  std::vector<std::span<const std::size_t>> out;
  const std::size_t base = rows.size() / parts;
  const std::size_t extra = rows.size() % parts;
  std::size_t offset = 0;
  for (std::size_t k = 0; k < parts; ++k) {
    const std::size_t len = base + (k < extra ? 1 : 0);
    out.push_back(rows.subspan(offset, len));
    offset += len;
  }
  return out;
}

}  // namespace

std::map<NodeId, Dataset> partition_data(const Dataset& data, const PartitionLayout& layout,
                                         const TaskSpec& task, std::uint64_t seed) {
  const std::size_t n_clients = layout.clients.size();
  if (n_clients == 0) throw ConfigError("partition: no clients");
  std::mt19937_64 rng(mix_seed(seed, 0x9a27));
  std::map<NodeId, Dataset> out;

  auto assign = [&](std::span<const NodeId> clients, std::vector<std::size_t> rows) {
    std::shuffle(rows.begin(), rows.end(), rng);
    const auto chunks = split_even(rows, clients.size());
    for (std::size_t k = 0; k < clients.size(); ++k) {
      if (chunks[k].empty()) throw ConfigError("partition: client " + clients[k].str() + " gets no samples");
      out.emplace(clients[k], gather(data, chunks[k]));
    }
  };

  if (task.partition == Partition::iid) {
    std::vector<std::size_t> rows(data.rows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    assign(layout.clients, std::move(rows));
    return out;
  }

  if (task.kind != TaskKind::logistic_2class) {
    throw ConfigError("partition: paper-non-iid needs a classification task");
  }
  if (n_clients != 40 || layout.planes != 5 || layout.per_plane != 8) {
    throw ConfigError("partition: paper-non-iid requires 40 satellites in 5 planes of 8");
  }
  std::vector<NodeId> group_a, group_b;
  for (std::size_t k = 0; k < n_clients; ++k) {
    const std::size_t plane = k / 8, slot = k % 8;
    const bool in_a = plane < 2 || (plane == 2 && slot < 4);
    (in_a ? group_a : group_b).push_back(layout.clients[k]);
  }
  std::vector<std::size_t> mode0, mode1;
  for (std::size_t r = 0; r < data.rows(); ++r) (data.modes[r] == 0 ? mode0 : mode1).push_back(r);
  assign(group_a, std::move(mode0));
  assign(group_b, std::move(mode1));
  return out;
}

double loss(const TaskSpec& task, std::span<const double> params, const Dataset& data) {
  const std::size_t d = data.cols;
  double total = 0.0;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const double z = kernels::dot(data.row(i), params.first(d));
    if (task.kind == TaskKind::logistic_2class) {
      total += logistic_loss(z + params[d], data.labels[i]);
    } else {
      const double r = z - data.labels[i];
      total += 0.5 * r * r;
    }
  }
  return data.rows() ? total / static_cast<double>(data.rows()) : 0.0;
}

std::vector<double> gradient(const TaskSpec& task, std::span<const double> params,
                             const Dataset& data, std::span<const std::size_t> rows) {
  const std::size_t d = data.cols;
  std::vector<double> g(task.model_dimension(), 0.0);
  if (rows.empty()) return g;
  const double inv = 1.0 / static_cast<double>(rows.size());
  std::span<double> gw(g.data(), d);
  for (std::size_t r : rows) {
    const double z = kernels::dot(data.row(r), params.first(d));
    double residual;
    if (task.kind == TaskKind::logistic_2class) {
      residual = sigmoid(z + params[d]) - data.labels[r];
      g[d] += residual * inv;
    } else {
      residual = z - data.labels[r];
    }
    kernels::axpy(residual * inv, data.row(r), gw);
  }
  return g;
}

std::vector<double> full_gradient(const TaskSpec& task, std::span<const double> params,
                                  const Dataset& data) {
  std::vector<std::size_t> rows(data.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return gradient(task, params, data, rows);
}

double accuracy(const TaskSpec& task, std::span<const double> params, const Dataset& data) {
  if (task.kind != TaskKind::logistic_2class) return std::numeric_limits<double>::quiet_NaN();
  if (data.rows() == 0) return 0.0;
  const std::size_t d = data.cols;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const double z = kernels::dot(data.row(i), params.first(d)) + params[d];
    correct += (z >= 0.0) == (data.labels[i] > 0.5);
  }
  return static_cast<double>(correct) / static_cast<double>(data.rows());
}

void check_finite(std::span<const double> params, const std::string& context, std::size_t event) {
  for (double v : params) {
    if (!std::isfinite(v)) throw DivergenceError(context + ": non-finite parameter", event);
  }
}

ClientUpdate local_train(const ModelVector& model, const Dataset& data, const TaskSpec& task,
                         std::uint64_t seed, NodeId client) {
  if (model.params.size() != task.model_dimension()) {
    throw ConfigError("local_train: model dimension does not match task");
  }
  if (data.rows() == 0) throw ConfigError("local_train: empty dataset for " + client.str());
  std::vector<double> local = model.params;
  const std::size_t n = data.rows();
  const std::size_t batch = std::min(task.batch_size, n);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  const bool full_batch = batch == n;
  std::size_t cursor = n;

  for (std::size_t step = 0; step < task.local_steps; ++step) {
    std::span<const std::size_t> rows;
    if (full_batch) {
      rows = order;
    } else {
      if (cursor + batch > n) {
        std::shuffle(order.begin(), order.end(), rng);
        cursor = 0;
      }
      rows = std::span<const std::size_t>(order).subspan(cursor, batch);
      cursor += batch;
    }
    const auto g = gradient(task, local, data, rows);
    const double g2 = kernels::dot(g, g);
    if (!std::isfinite(g2)) throw DivergenceError("local_train: non-finite gradient", step);
    kernels::axpy(-task.learning_rate, g, local);
  }

  ClientUpdate u;
  u.delta = std::move(local);
  kernels::axpy(-1.0, model.params, u.delta);
  u.base_version = model.version;
  u.n_samples = static_cast<double>(n);
  u.client = client;
  return u;
}

}  // namespace satfl::fl
