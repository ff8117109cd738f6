#include "cdnsim/analysis.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "cdnsim/error.hpp"
#include "cdnsim/util.hpp"

namespace cdnsim {

double quantile_sorted(const std::vector<double>& sorted_values, double p) {
  if (sorted_values.empty()) throw Error("empty-series", "quantile of nothing");
  double h = static_cast<double>(sorted_values.size() - 1) * p;
  size_t lo = static_cast<size_t>(h);
  if (lo + 1 >= sorted_values.size()) return sorted_values.back();
  double frac = h - static_cast<double>(lo);
  return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

BoxStats summarize(const std::vector<std::optional<double>>& values) {
  BoxStats stats;
  std::vector<double> present;
  present.reserve(values.size());
  for (const auto& v : values) {
    if (v) present.push_back(*v);
    else ++stats.missing_count;
  }
  if (present.empty()) throw Error("empty-series", "no present values to summarize");
  std::sort(present.begin(), present.end());

  stats.n = static_cast<int>(present.size());
  stats.median = quantile_sorted(present, 0.5);
  stats.q1 = quantile_sorted(present, 0.25);
  stats.q3 = quantile_sorted(present, 0.75);
  stats.iqr = stats.q3 - stats.q1;

  double fence_low = stats.q1 - 1.5 * stats.iqr;
  double fence_high = stats.q3 + 1.5 * stats.iqr;
  double sum = 0.0;
  bool any_kept = false;
  for (double v : present) {
    sum += v;
    if (v < fence_low || v > fence_high) {
      stats.outliers.push_back(v);
      continue;
    }
    if (!any_kept) {
      stats.whisker_low = v;
      any_kept = true;
    }
    stats.whisker_high = v;
  }
  stats.mean = sum / static_cast<double>(stats.n);
  return stats;
}

TimeseriesPlotData timeseries_with_mean(const MetricSeries& series,
                                        const std::string& column) {
  size_t col = 0;
  for (; col < series.columns.size(); ++col) {
    if (series.columns[col] == column) break;
  }
  if (col == series.columns.size()) {
    throw Error("unknown-column", column + " is not a series column");
  }
  TimeseriesPlotData data;
  double sum = 0.0;
  int n = 0;
  for (const auto& row : series.rows) {
    const auto& v = row.values[col];
    data.points.emplace_back(row.timestamp, v);
    if (v) {
      sum += *v;
      ++n;
    }
  }
  if (n == 0) throw Error("empty-series", column + " has no present values");
  data.mean = sum / n;
  return data;
}

const char* trend_name(Trend t) {
  switch (t) {
    case Trend::increasing: return "increasing";
    case Trend::decreasing: return "decreasing";
    case Trend::flat: return "flat";
  }
  return "flat";
}

namespace {

std::vector<std::optional<double>> pool_columns(const MetricSeries& series) {
  std::vector<std::optional<double>> pooled;
  pooled.reserve(series.rows.size() * series.columns.size());
  for (const auto& row : series.rows) {
    pooled.insert(pooled.end(), row.values.begin(), row.values.end());
  }
  return pooled;
}

// Net movement beyond the tolerance decides the direction; a step against
// the direction by more than the tolerance breaks it.
Trend classify_trend(const std::vector<double>& ordered_means, double tolerance_ms) {
  if (ordered_means.size() < 2) return Trend::flat;
  bool can_increase = true, can_decrease = true;
  for (size_t i = 1; i < ordered_means.size(); ++i) {
    double step = ordered_means[i] - ordered_means[i - 1];
    if (step < -tolerance_ms) can_increase = false;
    if (step > tolerance_ms) can_decrease = false;
  }
  double net = ordered_means.back() - ordered_means.front();
  if (can_increase && net > tolerance_ms) return Trend::increasing;
  if (can_decrease && net < -tolerance_ms) return Trend::decreasing;
  return Trend::flat;
}

}  // namespace

ConfigStats summarize_config(const MetricSeries& rtt, const MetricSeries& cpu) {
  ConfigStats stats;
  stats.server_count = static_cast<int>(rtt.columns.size());
  stats.rtt = summarize(pool_columns(rtt));
  stats.cpu = summarize(pool_columns(cpu));
  stats.rtt_mean_ms = stats.rtt.mean;
  stats.cpu_mean_pct = stats.cpu.mean;
  return stats;
}

std::vector<std::string> ordered_config_names(const TradeoffReport& report) {
  std::vector<std::string> names;
  for (const auto& [name, _] : report.per_config) names.push_back(name);
  std::sort(names.begin(), names.end(), [&](const std::string& a, const std::string& b) {
    int sa = report.per_config.at(a).server_count;
    int sb = report.per_config.at(b).server_count;
    if (sa != sb) return sa < sb;
    return a < b;
  });
  return names;
}

TradeoffReport tradeoff_report(const ConfigDatasets& datasets) {
  if (datasets.size() < 2) {
    throw Error("insufficient-configs", "tradeoff report needs at least two configurations");
  }
  TradeoffReport report;
  for (const auto& [name, pair] : datasets) {
    report.per_config[name] = summarize_config(pair.first, pair.second);
  }

  std::vector<std::string> order = ordered_config_names(report);
  std::vector<double> means;
  for (const auto& name : order) means.push_back(report.per_config.at(name).rtt_mean_ms);
  report.rtt_trend = classify_trend(means, 1.0);

  double cpu_median_low = 0.0, cpu_median_high = 0.0;
  bool first = true;
  for (const auto& name : order) {
    const ConfigStats& c = report.per_config.at(name);
    if (first) {
      cpu_median_low = cpu_median_high = c.cpu.median;
      first = false;
    } else {
      cpu_median_low = std::min(cpu_median_low, c.cpu.median);
      cpu_median_high = std::max(cpu_median_high, c.cpu.median);
    }
    report.narrative.push_back(
        name + " (" + std::to_string(c.server_count) + " servers): RTT median " +
        format_fixed(c.rtt.median, 1) + " ms, mean " + format_fixed(c.rtt_mean_ms, 1) +
        " ms, IQR " + format_fixed(c.rtt.iqr, 1) + " ms [q1 " +
        format_fixed(c.rtt.q1, 1) + ", q3 " + format_fixed(c.rtt.q3, 1) +
        "]; CPU median " + format_fixed(c.cpu.median, 1) + "%, mean " +
        format_fixed(c.cpu_mean_pct, 1) + "%.");
  }
  report.narrative.push_back(
      "Mean RTT moves from " + format_fixed(means.front(), 1) + " ms (" + order.front() +
      ") to " + format_fixed(means.back(), 1) + " ms (" + order.back() +
      "); trend: " + trend_name(report.rtt_trend) + ".");
  report.narrative.push_back(
      "CPU medians stay within [" + format_fixed(cpu_median_low, 1) + ", " +
      format_fixed(cpu_median_high, 1) + "]% across configurations.");
  return report;
}

std::string tradeoff_report_json(const TradeoffReport& report) {
  nlohmann::ordered_json j;
  j["rtt_trend"] = trend_name(report.rtt_trend);
  j["configs"] = nlohmann::ordered_json::object();
  for (const auto& name : ordered_config_names(report)) {
    const ConfigStats& c = report.per_config.at(name);
    auto box = [](const BoxStats& b) {
      return nlohmann::ordered_json{{"n", b.n},
                                    {"median", b.median},
                                    {"q1", b.q1},
                                    {"q3", b.q3},
                                    {"iqr", b.iqr},
                                    {"whisker_low", b.whisker_low},
                                    {"whisker_high", b.whisker_high},
                                    {"mean", b.mean},
                                    {"outlier_count", b.outliers.size()},
                                    {"missing_count", b.missing_count}};
    };
    j["configs"][name] = {{"server_count", c.server_count},
                          {"rtt", box(c.rtt)},
                          {"cpu", box(c.cpu)},
                          {"rtt_mean_ms", c.rtt_mean_ms},
                          {"cpu_mean_pct", c.cpu_mean_pct}};
  }
  j["narrative"] = report.narrative;
  return j.dump(2) + "\n";
}

}  // namespace cdnsim
