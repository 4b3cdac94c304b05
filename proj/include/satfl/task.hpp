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

// Desk-scale learning tasks: quadratic least squares (closed-form optimum)
// and two-class logistic regression on a synthetic Gaussian mixture.

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "satfl/contact_graph.hpp"

namespace satfl::fl {

using contact::NodeId;

enum class TaskKind { quadratic_least_squares, logistic_2class };
enum class Partition { iid, paper_non_iid };

std::string to_string(TaskKind k);
std::string to_string(Partition p);
TaskKind parse_task_kind(const std::string& s);
Partition parse_partition(const std::string& s);

struct TaskSpec {
  TaskKind kind = TaskKind::logistic_2class;
  std::size_t dimension = 10;  // feature count
  std::size_t batch_size = 100;
  double learning_rate = 0.1;
  std::size_t local_steps = 5;
  Partition partition = Partition::paper_non_iid;

  std::size_t samples_per_client = 250;
  std::size_t test_samples = 2000;

  // Logistic mixture: each label has two modes. Mode m has a unit class axis
  // u_m, with mode_angle_deg between u_0 and u_1, and label means
  // shift * u_m +/- separation/2 * u_m plus a common offset along a direction
  // orthogonal to both axes. The non-IID split gives mode 0 to group A.
  double class_separation = 3.0;
  double class_shift = 0.0;
  double mode_angle_deg = 90.0;
  double feature_offset = 0.0;
  // Quadratic: targets y = F x_true + noise; feature scales span [1, sqrt(condition)].
  double noise = 0.1;
  double condition = 10.0;

  /// Model parameters: weights plus a bias for the logistic task.
  std::size_t model_dimension() const;
  void validate() const;
};

struct ModelVector {
  std::vector<double> params;
  std::uint64_t version = 0;
};

/// Row-major features with one label per row.
struct Dataset {
  std::size_t cols = 0;
  std::vector<double> features;
  std::vector<double> labels;
  std::vector<int> modes;  // mixture mode per row; 0 for the quadratic task

  std::size_t rows() const { return labels.size(); }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(features).subspan(i * cols, cols);
  }
  void push_back(std::span<const double> x, double y, int mode = 0);
};

struct SyntheticData {
  Dataset train;
  Dataset test;
  std::vector<double> truth;  // quadratic: generating weights
};

/// The test set is drawn first so it is independent of the training size.
SyntheticData generate_data(const TaskSpec& task, std::size_t train_samples, std::uint64_t seed);

struct PartitionLayout {
  std::vector<NodeId> clients;  // plane-major order
  int planes = 0;
  int per_plane = 0;
};

/// paper-non-iid: the mode-0 components of both labels spread evenly over
/// planes 0 and 1 and the first four satellites of plane 2; the mode-1
/// components over the remaining 20 satellites.
std::map<NodeId, Dataset> partition_data(const Dataset& data, const PartitionLayout& layout,
                                         const TaskSpec& task, std::uint64_t seed);

double loss(const TaskSpec& task, std::span<const double> params, const Dataset& data);
/// Gradient of the mean loss over the given rows.
std::vector<double> gradient(const TaskSpec& task, std::span<const double> params,
                             const Dataset& data, std::span<const std::size_t> rows);
std::vector<double> full_gradient(const TaskSpec& task, std::span<const double> params,
                                  const Dataset& data);
/// Classification accuracy; NaN for the regression task.
double accuracy(const TaskSpec& task, std::span<const double> params, const Dataset& data);

struct ClientUpdate {
  std::vector<double> delta;  // local model minus base global model
  std::uint64_t base_version = 0;
  double n_samples = 0.0;
  NodeId client;
};

/// Runs task.local_steps mini-batch SGD steps starting from `model`.
/// Throws DivergenceError with the failing step on a non-finite gradient.
ClientUpdate local_train(const ModelVector& model, const Dataset& data, const TaskSpec& task,
                         std::uint64_t seed, NodeId client = {});

/// Throws DivergenceError if any parameter is NaN or infinite.
void check_finite(std::span<const double> params, const std::string& context, std::size_t event);

/// Deterministic seed mixing (splitmix64 finalizer).
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace satfl::fl
