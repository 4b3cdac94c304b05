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

#include <atomic>
#include <cassert>
#include <stdexcept>
#include <string>

#include "satfl/kernels.hpp"

namespace satfl::kernels {
namespace {

constexpr KernelTable kScalarTable{Isa::scalar, &scalar::dot, &scalar::axpy, &scalar::scale};

#if defined(SATFL_HAVE_AVX2_TU)
constexpr KernelTable kAvx2Table{Isa::avx2, &avx2::dot, &avx2::axpy, &avx2::scale};
#endif

bool cpu_has_avx2() {
#if defined(SATFL_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* initial_table() { return &table(detect()); }

std::atomic<const KernelTable*>& active_table() {
  static std::atomic<const KernelTable*> current{initial_table()};
  return current;
}

}  // namespace

bool available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
      return cpu_has_avx2();
  }
  return false;
}

Isa detect() { return available(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

const KernelTable& table(Isa isa) {
#if defined(SATFL_HAVE_AVX2_TU)
  if (isa == Isa::avx2) {
    if (!cpu_has_avx2()) throw std::invalid_argument("avx2 kernels not supported on this CPU");
    return kAvx2Table;
  }
#else
  if (isa == Isa::avx2) throw std::invalid_argument("avx2 kernels not compiled in");
#endif
  return kScalarTable;
}

void select(Isa isa) { active_table().store(&table(isa), std::memory_order_release); }

Isa active() { return active_table().load(std::memory_order_acquire)->isa; }

std::string_view name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

Isa parse_isa(std::string_view text) {
  if (text == "scalar") return Isa::scalar;
  if (text == "avx2") return Isa::avx2;
  if (text == "auto") return detect();
  throw std::invalid_argument("unknown kernel variant '" + std::string(text) + "'");
}

double dot(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  return active_table().load(std::memory_order_relaxed)->dot(x.data(), y.data(), x.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  active_table().load(std::memory_order_relaxed)->axpy(a, x.data(), y.data(), x.size());
}

void scale(double a, std::span<double> x) {
  active_table().load(std::memory_order_relaxed)->scale(a, x.data(), x.size());
}

}  // namespace satfl::kernels
