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

#include <stdexcept>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "satfl/kernels.hpp"

using namespace satfl::kernels;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar reference values") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  std::vector<double> y{1, 1, 1, 1, 1};
  CHECK(scalar::dot(x.data(), y.data(), 5) == 15.0);
  scalar::axpy(2.0, x.data(), y.data(), 5);
  CHECK(y == std::vector<double>{3, 5, 7, 9, 11});
  scalar::scale(0.5, y.data(), 5);
  CHECK(y == std::vector<double>{1.5, 2.5, 3.5, 4.5, 5.5});
  CHECK(scalar::dot(x.data(), y.data(), 0) == 0.0);
}

TEST_CASE("avx2 matches scalar on every tail length") {
  if (!available(Isa::avx2)) {
    MESSAGE("AVX2 not available on this host; equivalence skipped");
    return;
  }
  std::mt19937_64 rng(7);
  for (std::size_t n = 0; n <= 67; ++n) {
    const auto x = random_vector(rng, n);
    const auto y0 = random_vector(rng, n);

    auto ys = y0, yv = y0;
    scalar::axpy(-1.7, x.data(), ys.data(), n);
    avx2::axpy(-1.7, x.data(), yv.data(), n);
    CHECK(same_bits(ys, yv));

    auto ss = x, sv = x;
    scalar::scale(3.25, ss.data(), n);
    avx2::scale(3.25, sv.data(), n);
    CHECK(same_bits(ss, sv));

    const double ds = scalar::dot(x.data(), y0.data(), n);
    const double dv = avx2::dot(x.data(), y0.data(), n);
    double abs_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) abs_sum += std::abs(x[i] * y0[i]);
    CHECK(std::abs(ds - dv) <= 1e-14 * (abs_sum + 1.0));
  }
}

TEST_CASE("dispatch follows the selected variant") {
  const Isa before = active();
  select(Isa::scalar);
  CHECK(active() == Isa::scalar);
  const std::vector<double> x{1, 2, 3};
  CHECK(dot(x, x) == 14.0);
  if (available(Isa::avx2)) {
    select(Isa::avx2);
    CHECK(active() == Isa::avx2);
    CHECK(dot(x, x) == 14.0);
  } else {
    CHECK_THROWS_AS(select(Isa::avx2), std::invalid_argument);
  }
  select(before);
}

TEST_CASE("isa names round-trip") {
  CHECK(parse_isa("scalar") == Isa::scalar);
  CHECK(name(Isa::avx2) == "avx2");
  CHECK(parse_isa("auto") == detect());
  CHECK_THROWS(parse_isa("sse9"));
}

}  // TEST_SUITE
