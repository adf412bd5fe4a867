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

#include "spectrum/records.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "spectrum/errors.h"

namespace spectrum {
namespace {

using Json = nlohmann::ordered_json;

std::string Optional(const std::optional<double>& v) {
  return v ? FormatDouble(*v) : std::string();
}

Json OptionalJson(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json BudgetJson(const ApproximationBudget& b) {
  Json j;
  j["zeta"] = b.zeta;
  j["alpha"] = b.alpha;
  j["e1"] = b.e1;
  j["e2"] = b.e2;
  j["eta"] = b.eta;
  j["xi"] = b.xi;
  j["periods"] = b.periods;
  j["periods_overridden"] = b.periods_overridden;
  return j;
}

ApproximationBudget BudgetFromJson(const Json& j) {
  ApproximationBudget b;
  b.zeta = j.at("zeta").get<double>();
  b.alpha = j.at("alpha").get<double>();
  b.e1 = j.at("e1").get<double>();
  b.e2 = j.at("e2").get<double>();
  b.eta = j.at("eta").get<double>();
  b.xi = j.at("xi").get<double>();
  b.periods = j.at("periods").get<int>();
  b.periods_overridden = j.at("periods_overridden").get<bool>();
  return b;
}

std::string EscapeXml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#ff7f0e", "#9467bd", "#8c564b"};

std::string Num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void OpenSvg(std::ostringstream& os, const std::string& title) {
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
     << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
     << kHeight << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
     << "font-family=\"sans-serif\" font-size=\"16\">" << EscapeXml(title)
     << "</text>\n";
}

void Axes(std::ostringstream& os, const std::string& x_label,
          const std::string& y_label, double y_lo, double y_hi) {
  const double x0 = kLeft;
  const double y0 = kHeight - kBottom;
  const double x1 = kWidth - kRight;
  os << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1
     << "\" y2=\"" << y0 << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0
     << "\" y2=\"" << kTop << "\" stroke=\"black\"/>\n"
     << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 12
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"12\">"
     << EscapeXml(x_label) << "</text>\n"
     << "<text x=\"16\" y=\"" << (kTop + y0) / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\""
     << " transform=\"rotate(-90 16 " << (kTop + y0) / 2 << ")\">"
     << EscapeXml(y_label) << "</text>\n"
     << "<text x=\"" << x0 - 6 << "\" y=\"" << y0
     << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
     << Num(y_lo) << "</text>\n"
     << "<text x=\"" << x0 - 6 << "\" y=\"" << kTop + 10
     << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
     << Num(y_hi) << "</text>\n";
}

}  // namespace

std::string FormatDouble(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), v);
  return std::string(buffer, result.ptr);
}

std::string UsersCsv(const std::vector<UsersRow>& rows) {
  std::string out = std::string(kUsersCsvHeader) + "\n";
  for (const UsersRow& r : rows) {
    const ApproximationBudget& b = r.budget;
    out += std::to_string(r.n) + "," + std::to_string(r.periods) + "," +
           FormatDouble(b.zeta) + "," + FormatDouble(b.alpha) + "," +
           FormatDouble(b.e1) + "," + FormatDouble(b.e2) + "," +
           FormatDouble(b.eta) + "\n";
  }
  return out;
}

std::string ChannelsCsv(const std::vector<ChannelsRow>& rows) {
  std::string out = std::string(kChannelsCsvHeader) + "\n";
  for (const ChannelsRow& r : rows) {
    const ApproximationBudget& b = r.budget;
    out += std::to_string(r.k) + "," + std::to_string(r.periods) + "," +
           FormatDouble(b.zeta) + "," + FormatDouble(b.alpha) + "," +
           FormatDouble(b.e1) + "," + FormatDouble(b.e2) + "," +
           FormatDouble(b.eta) + "," + FormatDouble(r.eta_per_channel()) +
           "\n";
  }
  return out;
}

std::string OptInCsv(const std::vector<TruthfulnessResult>& rows) {
  std::string out = std::string(kOptInCsvHeader) + "\n";
  for (const TruthfulnessResult& r : rows) {
    out += FormatDouble(r.optin_ratio) + "," + std::to_string(r.runs) + "," +
           Optional(r.mean_utility_optin) + "," +
           Optional(r.mean_utility_optout) + "," + Optional(r.gap) + "," +
           Optional(r.t_statistic) + "," + Optional(r.p_value) + "," +
           (r.significant ? "true" : "false") + "\n";
  }
  return out;
}

std::string DynamicsCsv(const std::vector<DynamicsRow>& rows) {
  std::string out = std::string(kDynamicsCsvHeader) + "\n";
  for (const DynamicsRow& r : rows) {
    out += std::to_string(r.step) + "," + std::to_string(r.cell) + "," +
           std::to_string(r.channels) + "," + std::to_string(r.users) + "," +
           std::to_string(r.moved) + "\n";
  }
  return out;
}

std::string UsersJson(const std::vector<UsersRow>& rows) {
  Json out = Json::array();
  for (const UsersRow& r : rows) {
    Json j;
    j["n"] = r.n;
    j["T"] = r.periods;
    j["zeta"] = r.budget.zeta;
    j["alpha"] = r.budget.alpha;
    j["e1"] = r.budget.e1;
    j["e2"] = r.budget.e2;
    j["eta"] = r.budget.eta;
    out.push_back(std::move(j));
  }
  return out.dump(2) + "\n";
}

std::string ChannelsJson(const std::vector<ChannelsRow>& rows) {
  Json out = Json::array();
  for (const ChannelsRow& r : rows) {
    Json j;
    j["k"] = r.k;
    j["T"] = r.periods;
    j["zeta"] = r.budget.zeta;
    j["alpha"] = r.budget.alpha;
    j["e1"] = r.budget.e1;
    j["e2"] = r.budget.e2;
    j["eta"] = r.budget.eta;
    j["eta_per_channel"] = r.eta_per_channel();
    out.push_back(std::move(j));
  }
  return out.dump(2) + "\n";
}

std::string OptInJson(const std::vector<TruthfulnessResult>& rows) {
  Json out = Json::array();
  for (const TruthfulnessResult& r : rows) {
    Json j;
    j["optin_ratio"] = r.optin_ratio;
    j["runs"] = r.runs;
    j["mean_utility_optin"] = OptionalJson(r.mean_utility_optin);
    j["mean_utility_optout"] = OptionalJson(r.mean_utility_optout);
    j["gap"] = OptionalJson(r.gap);
    j["t_statistic"] = OptionalJson(r.t_statistic);
    j["p_value"] = OptionalJson(r.p_value);
    j["significant"] = r.significant;
    out.push_back(std::move(j));
  }
  return out.dump(2) + "\n";
}

std::string DynamicsJson(const std::vector<DynamicsRow>& rows) {
  Json out = Json::array();
  for (const DynamicsRow& r : rows) {
    Json j;
    j["step"] = r.step;
    j["cell"] = r.cell;
    j["channels"] = r.channels;
    j["users"] = r.users;
    j["moved"] = r.moved;
    out.push_back(std::move(j));
  }
  return out.dump(2) + "\n";
}

RunRecord MakeRunRecord(const ScenarioSpec& spec, const Scenario& scenario,
                        const EpochResult& epoch, bool noise_enabled) {
  const GameSpec& game = scenario.game;
  RunRecord r;
  r.scenario = spec;
  r.seed = epoch.seed;
  r.noise_enabled = noise_enabled;
  r.budget = epoch.budget;
  r.periods = epoch.params.periods;
  r.step = epoch.params.step;
  r.epsilon0 = epoch.params.epsilon0;
  r.privacy = epoch.privacy;
  r.sparcost_fallbacks = epoch.sparcost_fallbacks;
  r.support_fallbacks = epoch.support_fallbacks;
  for (const ConstraintSet& c : epoch.csets) r.opt_in_users += !c.opt_out;

  const Trajectory& tr = epoch.learner.trajectory;
  for (int t = 0; t < tr.periods(); ++t) {
    PeriodMetric m;
    m.period = t + 1;
    double published = 0.0;
    double loss = 0.0;
    int cells = 0;
    int users = 0;
    for (int i = 0; i < game.n; ++i) {
      const ConstraintSet& c = epoch.csets[i];
      if (c.opt_out) continue;
      ++users;
      for (int d = 0; d < game.k; ++d) {
        loss += tr.losses[t](i, d);
        if (!c.allowed[d]) continue;
        published += tr.published[t](i, d);
        ++cells;
      }
    }
    double step = 0.0;
    const auto& before = tr.played[t].data();
    const auto& after = tr.played[t + 1].data();
    for (std::size_t e = 0; e < before.size(); ++e) {
      step += std::abs(after[e] - before[e]);
    }
    m.mean_published = cells > 0 ? published / cells : 0.0;
    m.mean_loss = users > 0 ? loss / (users * game.k) : 0.0;
    m.mean_step = before.empty() ? 0.0 : step / before.size();
    r.period_metrics.push_back(m);
  }

  const ContributionTable q(game.Contention());
  double total = 0.0;
  for (int i = 0; i < game.n; ++i) {
    const double u = ExpectedUtility(game, i, game.played_action[i], q,
                                     epoch.suggestions.rows);
    r.utilities.push_back(u);
    total += u;
  }
  r.mean_utility = total / game.n;
  if (epoch.regret) r.max_regret = epoch.regret->max;
  for (int i = 0; i < game.n; ++i) {
    const auto row = epoch.suggestions.rows.row(i);
    r.suggestions.emplace_back(row.begin(), row.end());
  }
  return r;
}

std::string RunRecordToJson(const RunRecord& r) {
  Json doc;
  doc["scenario"] = Json::parse(ScenarioToJson(r.scenario));
  doc["seed"] = r.seed;
  doc["noise_enabled"] = r.noise_enabled;
  doc["budget"] = BudgetJson(r.budget);
  doc["periods"] = r.periods;
  doc["step"] = r.step;
  doc["epsilon0"] = r.epsilon0;
  Json privacy;
  privacy["sparcost_epsilon"] = r.privacy.sparcost_epsilon;
  privacy["rexp_epsilon"] = r.privacy.rexp_epsilon;
  privacy["per_round_epsilon"] = r.privacy.per_round_epsilon;
  privacy["delta"] = r.privacy.delta;
  privacy["total_epsilon"] = r.privacy.total_epsilon();
  doc["privacy"] = std::move(privacy);
  doc["sparcost_fallbacks"] = r.sparcost_fallbacks;
  doc["support_fallbacks"] = r.support_fallbacks;
  doc["opt_in_users"] = r.opt_in_users;
  Json metrics = Json::array();
  for (const PeriodMetric& m : r.period_metrics) {
    Json j;
    j["period"] = m.period;
    j["mean_published"] = m.mean_published;
    j["mean_loss"] = m.mean_loss;
    j["mean_step"] = m.mean_step;
    metrics.push_back(std::move(j));
  }
  doc["period_metrics"] = std::move(metrics);
  doc["utilities"] = r.utilities;
  doc["mean_utility"] = r.mean_utility;
  doc["max_regret"] = OptionalJson(r.max_regret);
  doc["suggestions"] = r.suggestions;
  return doc.dump(2) + "\n";
}

RunRecord RunRecordFromJson(const std::string& text) {
  RunRecord r;
  try {
    const Json doc = Json::parse(text);
    r.scenario = ParseScenarioJson(doc.at("scenario").dump());
    r.seed = doc.at("seed").get<std::uint64_t>();
    r.noise_enabled = doc.at("noise_enabled").get<bool>();
    r.budget = BudgetFromJson(doc.at("budget"));
    r.periods = doc.at("periods").get<int>();
    r.step = doc.at("step").get<double>();
    r.epsilon0 = doc.at("epsilon0").get<double>();
    const Json& privacy = doc.at("privacy");
    r.privacy.sparcost_epsilon = privacy.at("sparcost_epsilon").get<double>();
    r.privacy.rexp_epsilon = privacy.at("rexp_epsilon").get<double>();
    r.privacy.per_round_epsilon = privacy.at("per_round_epsilon").get<double>();
    r.privacy.delta = privacy.at("delta").get<double>();
    r.sparcost_fallbacks = doc.at("sparcost_fallbacks").get<int>();
    r.support_fallbacks = doc.at("support_fallbacks").get<int>();
    r.opt_in_users = doc.at("opt_in_users").get<int>();
    for (const Json& j : doc.at("period_metrics")) {
      r.period_metrics.push_back({j.at("period").get<int>(),
                                  j.at("mean_published").get<double>(),
                                  j.at("mean_loss").get<double>(),
                                  j.at("mean_step").get<double>()});
    }
    r.utilities = doc.at("utilities").get<std::vector<double>>();
    r.mean_utility = doc.at("mean_utility").get<double>();
    if (!doc.at("max_regret").is_null()) {
      r.max_regret = doc.at("max_regret").get<double>();
    }
    r.suggestions =
        doc.at("suggestions").get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("malformed run record: ") + e.what());
  }
  return r;
}

void WriteTextFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << contents;
  if (!out) throw IoError("write failed for " + path);
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string LineChartSvg(const std::string& title, const std::string& x_label,
                         const std::string& y_label,
                         const std::vector<ChartSeries>& series) {
  double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
  for (const ChartSeries& s : series) {
    if (s.x.size() != s.y.size()) {
      throw ParameterError("chart series '" + s.name + "' is ragged");
    }
    for (std::size_t p = 0; p < s.x.size(); ++p) {
      x_lo = std::min(x_lo, s.x[p]);
      x_hi = std::max(x_hi, s.x[p]);
      y_lo = std::min(y_lo, s.y[p]);
      y_hi = std::max(y_hi, s.y[p]);
    }
  }
  if (!std::isfinite(x_lo)) x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
  if (x_hi == x_lo) x_hi = x_lo + 1;
  if (y_hi == y_lo) y_hi = y_lo + 1;
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * pw; };
  auto py = [&](double y) {
    return kHeight - kBottom - (y - y_lo) / (y_hi - y_lo) * ph;
  };

  std::ostringstream os;
  OpenSvg(os, title);
  Axes(os, x_label, y_label, y_lo, y_hi);
  os << "<text x=\"" << kLeft << "\" y=\"" << kHeight - kBottom + 14
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"10\">"
     << Num(x_lo) << "</text>\n"
     << "<text x=\"" << kWidth - kRight << "\" y=\"" << kHeight - kBottom + 14
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"10\">"
     << Num(x_hi) << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % std::size(kPalette)];
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"2\" points=\"";
    for (std::size_t p = 0; p < series[s].x.size(); ++p) {
      os << (p ? " " : "") << Num(px(series[s].x[p])) << ','
         << Num(py(series[s].y[p]));
    }
    os << "\"/>\n";
    os << "<text x=\"" << kWidth - kRight + 10 << "\" y=\""
       << kTop + 16 * (s + 1) << "\" fill=\"" << color
       << "\" font-family=\"sans-serif\" font-size=\"12\">"
       << EscapeXml(series[s].name) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string BarChartSvg(const std::string& title, const std::string& y_label,
                        const std::vector<std::string>& labels,
                        const std::vector<double>& values) {
  if (labels.size() != values.size()) {
    throw ParameterError("bar labels and values differ in length");
  }
  double y_lo = 0.0;
  double y_hi = 0.0;
  for (double v : values) {
    y_lo = std::min(y_lo, v);
    y_hi = std::max(y_hi, v);
  }
  if (y_hi == y_lo) y_hi = y_lo + 1;
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto py = [&](double y) {
    return kHeight - kBottom - (y - y_lo) / (y_hi - y_lo) * ph;
  };
  std::ostringstream os;
  OpenSvg(os, title);
  Axes(os, "", y_label, y_lo, y_hi);
  const double slot = values.empty() ? pw : pw / values.size();
  for (std::size_t b = 0; b < values.size(); ++b) {
    const double x = kLeft + slot * b + slot * 0.2;
    const double top = py(std::max(values[b], 0.0));
    const double bottom = py(std::min(values[b], 0.0));
    os << "<rect x=\"" << Num(x) << "\" y=\"" << Num(top) << "\" width=\""
       << Num(slot * 0.6) << "\" height=\"" << Num(bottom - top)
       << "\" fill=\"" << kPalette[0] << "\"/>\n"
       << "<text x=\"" << Num(x + slot * 0.3) << "\" y=\""
       << kHeight - kBottom + 14
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"11\">"
       << EscapeXml(labels[b]) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace spectrum
