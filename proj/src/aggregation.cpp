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

#include "satfl/aggregation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "satfl/error.hpp"
#include "satfl/kernels.hpp"

namespace satfl::fl {
namespace {

void require_dimension(const ModelVector& m, const ClientUpdate& u) {
  if (u.delta.size() != m.params.size()) {
    throw std::invalid_argument("update from " + u.client.str() + " has dimension " +
                                std::to_string(u.delta.size()) + ", model has " +
                                std::to_string(m.params.size()));
  }
}

}  // namespace

ModelVector fedavg_aggregate(const ModelVector& base, std::span<const ClientUpdate> updates) {
  if (updates.empty()) throw SyncError("fedavg: no updates to aggregate");
  double total = 0.0;
  for (const auto& u : updates) {
    require_dimension(base, u);
    if (u.base_version != base.version) {
      throw SyncError("fedavg: update from " + u.client.str() + " built on version " +
                      std::to_string(u.base_version) + ", expected " + std::to_string(base.version));
    }
    total += u.n_samples;
  }
  if (!(total > 0.0)) throw SyncError("fedavg: total sample weight must be positive");
  ModelVector out = base;
  for (const auto& u : updates) kernels::axpy(u.n_samples / total, u.delta, out.params);
  ++out.version;
  return out;
}

ModelVector fedsat_apply(ModelVector global, const ClientUpdate& u, double total_samples) {
  require_dimension(global, u);
  if (!(total_samples > 0.0)) throw std::invalid_argument("fedsat: total sample weight must be positive");
  kernels::axpy(u.n_samples / total_samples, u.delta, global.params);
  ++global.version;
  return global;
}

double fedasync_mixing(const FedAsyncParams& p, std::uint64_t staleness) {
  return p.alpha * std::pow(1.0 + static_cast<double>(staleness), -p.exponent);
}

ModelVector fedasync_apply(ModelVector global, const ClientUpdate& u,
                           std::span<const double> client_base, const FedAsyncParams& p) {
  require_dimension(global, u);
  if (client_base.size() != global.params.size()) {
    throw std::invalid_argument("fedasync: client base has wrong dimension");
  }
  if (!(p.alpha > 0.0 && p.alpha <= 1.0)) throw std::invalid_argument("fedasync: alpha must lie in (0, 1]");
  if (u.base_version > global.version) {
    throw SyncError("fedasync: update from " + u.client.str() + " is ahead of the global model");
  }
  const double a = fedasync_mixing(p, global.version - u.base_version);
  for (std::size_t i = 0; i < global.params.size(); ++i) {
    const double local = client_base[i] + u.delta[i];
    global.params[i] = (1.0 - a) * global.params[i] + a * local;
  }
  ++global.version;
  return global;
}

}  // namespace satfl::fl
