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

// CSV/JSON serialization of experiment tables and run records, and small
// self-contained SVG charts. Doubles are written in shortest round-trip
// form.

#ifndef SPECTRUM_RECORDS_H_
#define SPECTRUM_RECORDS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spectrum/experiments.h"
#include "spectrum/mediator.h"
#include "spectrum/scenario.h"

namespace spectrum {

inline constexpr char kUsersCsvHeader[] = "n,T,zeta,alpha,e1,e2,eta";
inline constexpr char kChannelsCsvHeader[] =
    "k,T,zeta,alpha,e1,e2,eta,eta_per_channel";
inline constexpr char kOptInCsvHeader[] =
    "optin_ratio,runs,mean_utility_optin,mean_utility_optout,gap,t_statistic,"
    "p_value,significant";
inline constexpr char kDynamicsCsvHeader[] = "step,cell,channels,users,moved";

std::string FormatDouble(double v);

std::string UsersCsv(const std::vector<UsersRow>& rows);
std::string ChannelsCsv(const std::vector<ChannelsRow>& rows);
// Absent values are empty fields.
std::string OptInCsv(const std::vector<TruthfulnessResult>& rows);
std::string DynamicsCsv(const std::vector<DynamicsRow>& rows);

// Arrays of objects keyed by the CSV column names.
std::string UsersJson(const std::vector<UsersRow>& rows);
std::string ChannelsJson(const std::vector<ChannelsRow>& rows);
std::string OptInJson(const std::vector<TruthfulnessResult>& rows);
std::string DynamicsJson(const std::vector<DynamicsRow>& rows);

struct PeriodMetric {
  int period = 0;
  // Mean published aggregator over opt-in users' allowed channels.
  double mean_published = 0.0;
  double mean_loss = 0.0;
  // Mean absolute change of the strategy entries in this period.
  double mean_step = 0.0;

  bool operator==(const PeriodMetric&) const = default;
};

struct RunRecord {
  ScenarioSpec scenario;
  std::uint64_t seed = 0;
  bool noise_enabled = true;
  ApproximationBudget budget;
  int periods = 0;
  double step = 0.0;
  double epsilon0 = 0.0;
  PrivacyLedger privacy;
  int sparcost_fallbacks = 0;
  int support_fallbacks = 0;
  int opt_in_users = 0;
  std::vector<PeriodMetric> period_metrics;
  // Expected utility of each user when everyone follows the suggestions.
  std::vector<double> utilities;
  double mean_utility = 0.0;
  std::optional<double> max_regret;
  std::vector<std::vector<double>> suggestions;
  // Measured by the caller; never serialized.
  double wall_clock_s = 0.0;
};

RunRecord MakeRunRecord(const ScenarioSpec& spec, const Scenario& scenario,
                        const EpochResult& epoch, bool noise_enabled);

std::string RunRecordToJson(const RunRecord& record);
RunRecord RunRecordFromJson(const std::string& text);

// Throws IoError naming the path on failure.
void WriteTextFile(const std::string& path, const std::string& contents);
std::string ReadTextFile(const std::string& path);

struct ChartSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

std::string LineChartSvg(const std::string& title, const std::string& x_label,
                         const std::string& y_label,
                         const std::vector<ChartSeries>& series);
std::string BarChartSvg(const std::string& title, const std::string& y_label,
                        const std::vector<std::string>& labels,
                        const std::vector<double>& values);

}  // namespace spectrum

#endif  // SPECTRUM_RECORDS_H_
