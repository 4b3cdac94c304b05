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

// Dense vector kernels used by local training and aggregation.
//
// Every kernel has a scalar reference implementation. On x86-64 an AVX2
// variant is compiled into a separate translation unit and selected at
// runtime when the CPU reports AVX2 and FMA. `axpy` and `scale` are
// bit-identical across variants; `dot` differs only in summation order.

#include <cstddef>
#include <span>
#include <string_view>

namespace satfl::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  double (*dot)(const double* x, const double* y, std::size_t n);
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  void (*scale)(double a, double* x, std::size_t n);
};

namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(double a, double* x, std::size_t n);
}  // namespace scalar

namespace avx2 {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(double a, double* x, std::size_t n);
}  // namespace avx2

/// True if the variant is compiled in and supported by this CPU.
bool available(Isa isa);

/// Best available variant on this machine.
Isa detect();

/// Process-wide selection; throws std::invalid_argument if unavailable.
void select(Isa isa);
Isa active();
const KernelTable& table(Isa isa);

std::string_view name(Isa isa);
/// Parses "scalar", "avx2" or "auto".
Isa parse_isa(std::string_view text);

// Dispatching front-ends.
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double a, std::span<const double> x, std::span<double> y);
void scale(double a, std::span<double> x);

}  // namespace satfl::kernels
