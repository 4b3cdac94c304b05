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

#include <cstddef>
#include <string>

namespace satfl {

enum class LinkClass { gs, ring, ps };
std::string to_string(LinkClass c);

/// Deterministic computation and communication delays. Transfer duration is
/// model_bits / rate plus the propagation delay at transfer start.
struct DelayModel {
  double compute_time_s = 60.0;
  double isl_rate_bps = 20e6;
  double ps_sat_rate_bps = 20e6;  // satellite <-> PS satellite
  double gs_rate_bps = 5e6;       // satellite <-> ground station
  double model_bits = model_size_bits(10);
  bool propagation = true;
  /// Multiplicative error on the compute time used for predictions only.
  double prediction_error = 0.0;

  /// 8 bytes per parameter plus a 1 KiB header.
  static double model_size_bits(std::size_t model_dimension) {
    return 64.0 * static_cast<double>(model_dimension) + 8192.0;
  }

  double rate(LinkClass c) const;
  double serialization_s(LinkClass c) const { return model_bits / rate(c); }
  double propagation_s(double distance_km) const;
  double transfer_s(LinkClass c, double distance_km) const {
    return serialization_s(c) + propagation_s(distance_km);
  }
  double predicted_compute_s() const { return compute_time_s * (1.0 + prediction_error); }

  /// Throws ConfigError on non-positive rates or negative durations.
  void validate() const;
};

}  // namespace satfl
