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

// satfl: contact analysis, scenario classification and FL simulation sweeps.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "satfl/config_json.hpp"
#include "satfl/contact_graph.hpp"
#include "satfl/csv.hpp"
#include "satfl/engine.hpp"
#include "satfl/error.hpp"
#include "satfl/kernels.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct CommonArgs {
  std::string config;
  double horizon = -1.0;
  double step = -1.0;
};

satfl::ScenarioConfig load(const CommonArgs& a) {
  auto cfg = satfl::load_config(a.config);
  if (a.horizon >= 0.0) cfg.run.horizon_s = a.horizon;
  if (a.step > 0.0) cfg.links.step_s = a.step;
  cfg.validate();
  return cfg;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw satfl::Error("cannot write " + p.string());
  return f;
}

void make_dir(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw satfl::Error("cannot create directory " + p.string() + ": " + ec.message());
}

void print_warnings(const satfl::Scenario& sc) {
  for (const auto& w : sc.warnings) std::cerr << "warning: " << w << "\n";
}

json report_json(const satfl::contact::ScenarioReport& r) {
  json clusters = json::array();
  for (const auto& c : r.clusters) {
    clusters.push_back({{"plane", c.plane},
                        {"duty_cycle", c.cluster.duty_cycle},
                        {"max_gap_s", c.cluster.max_gap},
                        {"windows", c.cluster.windows},
                        {"max_member_duty_cycle", c.max_member_duty_cycle},
                        {"ring_clearance_km", c.ring_clearance_km}});
  }
  return {{"label", satfl::contact::to_string(r.label)}, {"notes", r.notes}, {"clusters", clusters}};
}

int cmd_contacts(const CommonArgs& a, const std::string& out) {
  const auto sc = satfl::build_scenario(load(a));
  print_warnings(sc);
  make_dir(out);
  {
    auto f = open_out(fs::path(out) / "windows.csv");
    satfl::contact::write_windows_csv(f, sc.graph.windows());
  }
  {
    auto f = open_out(fs::path(out) / "gantt.csv");
    satfl::contact::write_gantt_csv(f, sc.graph, sc.ps);
  }
  std::cout << sc.graph.windows().size() << " windows written to " << out << "\n";
  return 0;
}

int cmd_classify(const CommonArgs& a) {
  const auto sc = satfl::build_scenario(load(a));
  print_warnings(sc);
  const auto report = satfl::contact::classify(sc.graph, sc.ps, sc.config.thresholds);
  std::cout << report_json(report).dump(2) << "\n";
  return 0;
}

struct Job {
  satfl::StrategyKind strategy;
  std::uint64_t seed;
};

struct JobResult {
  satfl::sim::RunStats stats;
  std::uint64_t ps_msgs = 0;
  std::string error;
};

json stats_json(const satfl::sim::RunStats& s) {
  json ttt = std::isnan(s.time_to_target_s) ? json(nullptr) : json(s.time_to_target_s);
  return {{"events", s.events},
          {"rounds_completed", s.rounds_completed},
          {"updates_produced", s.updates_produced},
          {"updates_applied", s.updates_applied},
          {"updates_aggregated", s.updates_aggregated},
          {"updates_dropped", s.updates_dropped},
          {"transfers_completed", s.transfers_completed},
          {"transfers_aborted", s.transfers_aborted},
          {"transfers_stalled", s.transfers_stalled},
          {"sink_fallbacks", s.sink_fallbacks},
          {"sink_holds", s.sink_holds},
          {"time_to_target_s", ttt},
          {"final_version", s.final_version},
          {"final_accuracy", s.final_accuracy},
          {"final_loss", s.final_loss}};
}

JobResult run_job(const satfl::Scenario& sc, const Job& job, const fs::path& dir) {
  JobResult r;
  satfl::sim::RunOptions opt;
  opt.strategy = job.strategy;
  opt.seed = job.seed;
  auto result = satfl::sim::run(sc, opt);
  make_dir(dir);
  {
    auto f = open_out(dir / "metrics.csv");
    satfl::sim::write_metrics_csv(f, result.metrics);
  }
  {
    auto f = open_out(dir / "trace.csv");
    satfl::write_trace_csv(f, result.trace);
  }
  auto cfg = sc.config;
  cfg.run.seed = job.seed;
  cfg.run.seeds = {job.seed};
  cfg.run.strategies = {satfl::to_string(job.strategy)};
  json manifest = {{"config", satfl::to_json(cfg)},
                   {"strategy", satfl::to_string(job.strategy)},
                   {"seed", job.seed},
                   {"kernels", std::string(satfl::kernels::name(satfl::kernels::active()))},
                   {"warnings", sc.warnings},
                   {"stats", stats_json(result.stats)}};
  {
    auto f = open_out(dir / "manifest.json");
    f << manifest.dump(2) << "\n";
  }
  r.ps_msgs = result.metrics.empty() ? 0 : result.metrics.back().ps_msgs;
  r.stats = std::move(result.stats);
  return r;
}

int cmd_simulate(const CommonArgs& a, const std::string& out, std::vector<std::string> strategies,
                 std::vector<std::uint64_t> seeds, std::optional<std::uint64_t> seed, unsigned jobs) {
  const auto cfg = load(a);
  if (strategies.empty()) strategies = cfg.run.strategies;
  if (strategies.empty()) {
    for (auto s : satfl::all_strategies()) strategies.push_back(satfl::to_string(s));
  }
  if (seeds.empty()) seeds = seed ? std::vector<std::uint64_t>{*seed} : cfg.run.seeds;
  if (seeds.empty()) seeds = {cfg.run.seed};
  std::vector<satfl::StrategyKind> kinds;
  for (const auto& s : strategies) kinds.push_back(satfl::parse_strategy(s));

  const auto sc = satfl::build_scenario(cfg);
  print_warnings(sc);
  std::vector<satfl::StrategyKind> runnable;
  for (auto k : kinds) {
    const auto why = satfl::incompatibility(sc, k);
    if (why.empty()) {
      runnable.push_back(k);
    } else {
      std::cerr << "skipping " << satfl::to_string(k) << ": " << why << "\n";
    }
  }
  if (runnable.empty()) throw satfl::ConfigError("no runnable strategy for this scenario");

  std::vector<Job> queue;
  for (auto k : runnable) {
    for (auto s : seeds) queue.push_back({k, s});
  }
  std::vector<JobResult> results(queue.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < queue.size(); i = next++) {
      const auto& job = queue[i];
      const fs::path dir = fs::path(out) / satfl::to_string(job.strategy) / ("seed" + std::to_string(job.seed));
      try {
        results[i] = run_job(sc, job, dir);
      } catch (const std::exception& e) {
        results[i].error = e.what();
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(queue.size())));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  make_dir(out);
  auto f = open_out(fs::path(out) / "summary.csv");
  satfl::csv::Writer w(f);
  w.row({"strategy", "seed", "time_to_target_s", "final_accuracy", "final_loss", "final_version", "rounds",
         "ps_msgs", "updates_produced", "updates_dropped", "error"});
  int rc = 0;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    const auto& r = results[i];
    const auto& s = r.stats;
    std::vector<std::string> row = {satfl::to_string(queue[i].strategy), std::to_string(queue[i].seed),
                                    satfl::csv::num(s.time_to_target_s, 3), satfl::csv::num(s.final_accuracy, 6),
                                    satfl::csv::num(s.final_loss, 6), std::to_string(s.final_version),
                                    std::to_string(s.rounds_completed), std::to_string(r.ps_msgs),
                                    std::to_string(s.updates_produced), std::to_string(s.updates_dropped),
                                    r.error};
    w.row(row);
    std::cout << row[0] << " seed " << row[1] << ": time_to_target_s=" << row[2] << " accuracy=" << row[3]
              << " version=" << row[5];
    if (!r.error.empty()) {
      std::cout << " error=" << r.error;
      rc = kExitRuntime;
    }
    std::cout << "\n";
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated learning in satellite constellations: contacts, classification, simulation"};
  app.require_subcommand(1);
  std::string kernels = "auto";
  app.add_option("--kernels", kernels, "Numeric kernels: auto, scalar or avx2")->capture_default_str();

  CommonArgs common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "Scenario JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--horizon", common.horizon, "Override the horizon in seconds");
    sub->add_option("--step", common.step, "Override the contact sampling step in seconds");
  };

  std::string out = "out";
  auto* contacts = app.add_subcommand("contacts", "Write contact windows and Gantt rows");
  add_common(contacts);
  contacts->add_option("--out", out, "Output directory")->capture_default_str();

  auto* classify = app.add_subcommand("classify", "Print the scenario class as JSON");
  add_common(classify);

  auto* simulate = app.add_subcommand("simulate", "Run strategies over seeds");
  add_common(simulate);
  simulate->add_option("--out", out, "Output directory")->capture_default_str();
  std::vector<std::string> strategies;
  std::vector<std::uint64_t> seeds;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  simulate->add_option("--strategies", strategies, "Strategies to run")->delimiter(',');
  simulate->add_option("--seeds", seeds, "Seeds to run")->delimiter(',');
  simulate->add_option("--seed", seed, "Single seed");
  simulate->add_option("--jobs", jobs, "Concurrent runs")->capture_default_str()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  try {
    try {
      satfl::kernels::select(satfl::kernels::parse_isa(kernels));
    } catch (const std::invalid_argument& e) {
      throw satfl::ConfigError(e.what());
    }
    if (*contacts) return cmd_contacts(common, out);
    if (*classify) return cmd_classify(common);
    return cmd_simulate(common, out, strategies, seeds, seed, jobs);
  } catch (const satfl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
