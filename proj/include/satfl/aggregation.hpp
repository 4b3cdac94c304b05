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

// Parameter-server update rules.

#include <span>

#include "satfl/task.hpp"

namespace satfl::fl {

/// Synchronous FedAvg step: base + sum_k (n_k / sum_j n_j) delta_k, version + 1.
/// Throws SyncError if any update was computed on another version.
ModelVector fedavg_aggregate(const ModelVector& base, std::span<const ClientUpdate> updates);

/// FedSat: the FedAvg rule applied incrementally, one arrival at a time.
/// `total_samples` is the sample count over all N clients.
ModelVector fedsat_apply(ModelVector global, const ClientUpdate& u, double total_samples);

struct FedAsyncParams {
  double alpha = 0.6;     // mixing rate in (0, 1]
  double exponent = 0.5;  // polynomial staleness exponent a >= 0
};

/// alpha * (1 + staleness)^(-a)
double fedasync_mixing(const FedAsyncParams& p, std::uint64_t staleness);

/// FedAsync: global <- (1 - a_t) global + a_t (client_base + delta).
/// `client_base` is the model the client trained from (version u.base_version).
ModelVector fedasync_apply(ModelVector global, const ClientUpdate& u,
                           std::span<const double> client_base, const FedAsyncParams& p);

}  // namespace satfl::fl
