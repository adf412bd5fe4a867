//
// Copyright 2026 The Spectrum Sharing Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Command-line front end: budgets, single epochs, sweeps and self-checks.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "spectrum/errors.h"
#include "spectrum/experiments.h"
#include "spectrum/mediator.h"
#include "spectrum/records.h"
#include "spectrum/scenario.h"
#include "spectrum/verify.h"

namespace {

using namespace spectrum;

struct Flags {
  std::optional<std::uint64_t> seed;
  std::string config;
  std::optional<int> runs;
  bool no_noise = false;
  std::string out;
  std::string format = "csv";
  bool charts = false;
  std::string experiment;
  int steps = 10;
};

ScenarioSpec ResolveSpec(const Flags& f) {
  ScenarioSpec spec;
  if (!f.config.empty()) spec = LoadScenarioFile(f.config);
  if (f.seed) spec.seed = *f.seed;
  if (f.runs) spec.runs = *f.runs;
  spec.Validate();
  return spec;
}

// Writes to <out>/<name> when --out is set, otherwise to stdout.
void Emit(const Flags& f, const std::string& name, const std::string& body) {
  if (f.out.empty()) {
    std::cout << body;
    return;
  }
  std::filesystem::create_directories(f.out);
  const std::string path = (std::filesystem::path(f.out) / name).string();
  WriteTextFile(path, body);
  std::cerr << "wrote " << path << "\n";
}

void EmitChart(const Flags& f, const std::string& name,
               const std::string& svg) {
  if (!f.charts) return;
  if (f.out.empty()) {
    throw ParameterError("--charts needs --out");
  }
  Emit(f, name, svg);
}

std::string Ext(const Flags& f) { return f.format == "json" ? ".json" : ".csv"; }

int RunBounds(const Flags& f) {
  const ScenarioSpec s = ResolveSpec(f);
  const ApproximationBudget b =
      EtaBudget(s.n, s.m, s.k, s.Gamma(), s.Alpha(), s.beta, s.epsilon,
                s.delta, s.periods);
  if (f.format == "json") {
    ChannelsRow row{s.k, b.periods, b};
    Emit(f, "bounds.json", ChannelsJson({row}));
  } else {
    std::string body = "quantity,value\n";
    body += "zeta," + FormatDouble(b.zeta) + "\n";
    body += "alpha," + FormatDouble(b.alpha) + "\n";
    body += "e1," + FormatDouble(b.e1) + "\n";
    body += "e2," + FormatDouble(b.e2) + "\n";
    body += "eta," + FormatDouble(b.eta) + "\n";
    body += "xi," + FormatDouble(b.xi) + "\n";
    body += "T," + std::to_string(b.periods) + "\n";
    Emit(f, "bounds.csv", body);
  }
  return 0;
}

int RunSimulate(const Flags& f) {
  const ScenarioSpec s = ResolveSpec(f);
  const auto start = std::chrono::steady_clock::now();
  const Scenario scenario = GenScenario(s);
  const std::vector<bool> opt_in = AssignOptIn(s.n, s.optin_ratio, s.seed);
  const std::vector<Report> reports =
      CollectReports(scenario.submitted.probabilities, opt_in);
  EpochOptions options;
  options.periods = s.periods;
  options.threshold = s.sparcost_threshold;
  const EpochResult epoch =
      RunEpoch(scenario.game, reports, {s.epsilon, s.delta, 0.0}, s.beta,
               {s.seed, !f.no_noise}, options);
  RunRecord record = MakeRunRecord(s, scenario, epoch, !f.no_noise);
  record.wall_clock_s = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
  Emit(f, "run.json", RunRecordToJson(record));
  std::cerr << "epoch finished in " << record.wall_clock_s << " s\n";
  return 0;
}

std::vector<ChartSeries> SeriesByPeriods(
    const std::vector<int>& periods,
    const std::function<void(int, ChartSeries&)>& fill) {
  std::vector<ChartSeries> out;
  for (int t : periods) {
    ChartSeries s;
    s.name = "T=" + std::to_string(t);
    fill(t, s);
    out.push_back(std::move(s));
  }
  return out;
}

int RunExperiment(const Flags& f) {
  const ScenarioSpec s = ResolveSpec(f);
  const bool json = f.format == "json";
  if (f.experiment == "users") {
    const auto rows =
        ExperimentUsers(s, DefaultUserCounts(), DefaultPeriods());
    Emit(f, "users" + Ext(f), json ? UsersJson(rows) : UsersCsv(rows));
    EmitChart(f, "users.svg",
              LineChartSvg("eta versus users", "n", "eta",
                           SeriesByPeriods(DefaultPeriods(),
                                           [&](int t, ChartSeries& c) {
                                             for (const auto& r : rows) {
                                               if (r.periods != t) continue;
                                               c.x.push_back(r.n);
                                               c.y.push_back(r.budget.eta);
                                             }
                                           })));
  } else if (f.experiment == "channels") {
    const auto rows =
        ExperimentChannels(s, DefaultChannelCounts(), DefaultPeriods());
    Emit(f, "channels" + Ext(f), json ? ChannelsJson(rows) : ChannelsCsv(rows));
    EmitChart(f, "channels.svg",
              LineChartSvg("eta per channel", "k", "eta / k",
                           SeriesByPeriods(DefaultPeriods(),
                                           [&](int t, ChartSeries& c) {
                                             for (const auto& r : rows) {
                                               if (r.periods != t) continue;
                                               c.x.push_back(r.k);
                                               c.y.push_back(r.eta_per_channel());
                                             }
                                           })));
  } else if (f.experiment == "optin") {
    const auto rows =
        ExperimentOptIn(s, DefaultOptInRatios(), s.runs, !f.no_noise);
    Emit(f, "optin" + Ext(f), json ? OptInJson(rows) : OptInCsv(rows));
    std::vector<std::string> labels;
    std::vector<double> gaps;
    for (const auto& r : rows) {
      labels.push_back(FormatDouble(r.optin_ratio));
      gaps.push_back(r.gap.value_or(0.0));
    }
    EmitChart(f, "optin.svg",
              BarChartSvg("opt-in minus opt-out utility", "gap", labels, gaps));
  } else if (f.experiment == "dynamics") {
    const Scenario scenario = GenScenario(s);
    const auto rows = ExperimentDynamics(scenario.world, f.steps);
    Emit(f, "dynamics" + Ext(f), json ? DynamicsJson(rows) : DynamicsCsv(rows));
    std::vector<ChartSeries> series(scenario.world.cells.size());
    for (std::size_t c = 0; c < series.size(); ++c) {
      series[c].name = "cell " + std::to_string(c);
    }
    for (const auto& r : rows) {
      series[r.cell].x.push_back(r.step);
      series[r.cell].y.push_back(r.users);
    }
    EmitChart(f, "dynamics.svg",
              LineChartSvg("users per cell", "step", "users", series));
  } else {
    throw ParameterError("unknown experiment '" + f.experiment + "'");
  }
  return 0;
}

int RunVerify(const Flags& f) {
  const std::uint64_t seed = f.seed.value_or(1);
  int failures = 0;
  for (const CheckResult& r : RunPropertySuites(seed)) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name;
    if (!r.passed) std::cout << ": " << r.detail;
    std::cout << "\n";
    failures += !r.passed;
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Private mediated spectrum sharing simulator"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--seed", f.seed, "Master seed");
  app.add_option("--config", f.config, "Flat JSON scenario file")
      ->check(CLI::ExistingFile);
  app.add_option("--runs", f.runs, "Monte Carlo runs")->check(CLI::PositiveNumber);
  app.add_flag("--no-noise", f.no_noise, "Disable every privacy noise draw");
  app.add_option("--out", f.out, "Output directory (stdout when omitted)");
  app.add_option("--format", f.format, "Table format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--charts", f.charts, "Also write SVG charts");

  auto* bounds = app.add_subcommand("bounds", "Print zeta, E1, E2 and eta");
  auto* simulate = app.add_subcommand("simulate", "Run one mediator epoch");
  auto* experiment = app.add_subcommand("experiment", "Run a sweep");
  experiment->add_option("name", f.experiment, "users|channels|optin|dynamics")
      ->required()
      ->check(CLI::IsMember({"users", "channels", "optin", "dynamics"}));
  experiment->add_option("--steps", f.steps, "Dynamics steps")
      ->check(CLI::NonNegativeNumber);
  auto* verify = app.add_subcommand("verify", "Run property self-checks");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*bounds) return RunBounds(f);
    if (*simulate) return RunSimulate(f);
    if (*experiment) return RunExperiment(f);
    if (*verify) return RunVerify(f);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
