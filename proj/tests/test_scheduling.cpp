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

#include "satfl/error.hpp"
#include "satfl/scheduling.hpp"

using namespace satfl;
using namespace satfl::fl;

TEST_SUITE("scheduling") {

TEST_CASE("earliest fit") {
  const std::vector<Interval> w{{100, 150}, {300, 500}};
  CHECK(*earliest_fit(w, 0, 30) == 100.0);
  CHECK(*earliest_fit(w, 130, 30) == 300.0);
  CHECK(*earliest_fit(w, 130, 20) == 130.0);
  CHECK_FALSE(earliest_fit(w, 480, 30).has_value());
}

TEST_CASE("always-connected unit completes after compute plus transfers") {
  const SyncUnit u{0, {{0, 1e6}}, 2.5, 4.0};
  const auto p = project_unit(u, 10.0, 60.0, 1e6);
  CHECK(p.feasible);
  CHECK(p.upload_end == doctest::Approx(10.0 + 2.5 + 60.0 + 4.0));
}

TEST_CASE("cold start waits for every unit's second contact") {
  // each unit sees the PS twice; compute is longer than any pass
  const double c = 1800.0;
  std::vector<SyncUnit> units{
      {0, {{600, 1050}, {6500, 6700}}, 1.0, 1.0},
      {1, {{6200, 6500}, {11900, 12300}}, 1.0, 1.0},
      {2, {{17300, 17800}, {23200, 23400}}, 1.0, 1.0},
      {3, {{22900, 23200}, {28600, 29000}}, 1.0, 1.0},
      {4, {{34000, 34500}, {39900, 40200}}, 1.0, 1.0},
  };
  const auto plan = schedule_sync_round(0.0, units, c, 86400.0, GreedyPolicy{});
  REQUIRE(plan.scheduled.size() == 5);
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(plan.scheduled[k].download_start == units[k].windows[0].start);
    CHECK(plan.scheduled[k].upload_start == units[k].windows[1].start);
  }
  CHECK(plan.completion == doctest::Approx(39901.0));
  CHECK(plan.completion > 9 * 3600.0);
}

TEST_CASE("deadline policy keeps units that return in time") {
  std::vector<SyncUnit> units{
      {0, {{0, 1e5}}, 1.0, 1.0},
      {1, {{900, 3000}}, 1.0, 1.0},
      {2, {{100, 150}, {20000, 20100}}, 1.0, 1.0},
  };
  const auto greedy = schedule_sync_round(0.0, units, 60.0, 86400.0, GreedyPolicy{});
  CHECK(greedy.scheduled.size() == 3);
  CHECK(greedy.completion == doctest::Approx(20001.0));

  const auto deadline = schedule_sync_round(0.0, units, 60.0, 86400.0, DeadlinePolicy(3000.0));
  REQUIRE(deadline.scheduled.size() == 2);
  CHECK(deadline.scheduled[0].unit == 0);
  CHECK(deadline.scheduled[1].unit == 1);
  CHECK(deadline.completion == doctest::Approx(962.0));

  // nobody inside the deadline: earliest finisher only
  const auto tight = schedule_sync_round(0.0, units, 60.0, 86400.0, DeadlinePolicy(10.0));
  REQUIRE(tight.scheduled.size() == 1);
  CHECK(tight.scheduled[0].unit == 0);
}

TEST_CASE("no unit before the horizon") {
  std::vector<SyncUnit> units{{0, {{100, 200}}, 1.0, 1.0}};
  CHECK_THROWS_AS(schedule_sync_round(0.0, units, 500.0, 86400.0, GreedyPolicy{}), HorizonExhaustedError);
  CHECK_THROWS_AS(make_policy("fastest", 0), ConfigError);
  CHECK_THROWS_AS(make_policy("deadline", 0), ConfigError);
  CHECK(make_policy("deadline", 10)->name() == "deadline");
}

TEST_CASE("predictive idle decision") {
  CHECK(predictive_schedule(Interval{0, 30}, 60, 1, 1) == ClientDecision::download_now);
  CHECK(predictive_schedule(Interval{0, 62}, 60, 1, 1) == ClientDecision::idle_until_next);
  CHECK(predictive_schedule(Interval{0, 61.9}, 60, 1, 1) == ClientDecision::download_now);
  CHECK(predictive_schedule(Interval{5, 5.5}, 0, 0, 0) == ClientDecision::idle_until_next);
  CHECK(predictive_schedule(std::nullopt, 60, 1, 1) == ClientDecision::download_now);
  CHECK(to_string(ClientDecision::idle_until_next) == "idle-until-next");
}

}  // TEST_SUITE
