#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cdnsim/metrics_recorder.hpp"

namespace cdnsim {

struct BoxStats {
  int n = 0;  // present values
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;
  double whisker_low = 0.0;   // min of non-outlier data
  double whisker_high = 0.0;  // max of non-outlier data
  double mean = 0.0;
  std::vector<double> outliers;  // beyond the 1.5*IQR fences, ascending
  int missing_count = 0;
};

// Quantile of sorted data at fraction p by linear interpolation between
// order statistics: h = (n-1)*p, value = v[floor(h)] + frac(h)*(v[floor(h)+1]-v[floor(h)]).
double quantile_sorted(const std::vector<double>& sorted_values, double p);

// Absences are dropped into missing_count; Tukey 1.5*IQR outlier rule.
// Throws Error("empty-series") when no value is present.
BoxStats summarize(const std::vector<std::optional<double>>& values);

struct TimeseriesPlotData {
  // One point per row; absent value = gap in the trace.
  std::vector<std::pair<std::string, std::optional<double>>> points;
  double mean = 0.0;  // over present values
};

// Throws Error("unknown-column") / Error("empty-series").
TimeseriesPlotData timeseries_with_mean(const MetricSeries& series,
                                        const std::string& column);

enum class Trend { increasing, decreasing, flat };
const char* trend_name(Trend t);

struct ConfigStats {
  int server_count = 0;  // column count of the RTT series
  BoxStats rtt;
  BoxStats cpu;
  double rtt_mean_ms = 0.0;
  double cpu_mean_pct = 0.0;
};

struct TradeoffReport {
  std::map<std::string, ConfigStats> per_config;
  Trend rtt_trend = Trend::flat;
  std::vector<std::string> narrative;
};

// name -> (rtt series, cpu series)
using ConfigDatasets = std::map<std::string, std::pair<MetricSeries, MetricSeries>>;

// Pools every column of each series into one distribution.
ConfigStats summarize_config(const MetricSeries& rtt, const MetricSeries& cpu);

// Cross-configuration comparison. Configs are ordered by server count (name
// as tie-break) regardless of map order; the RTT trend classifies the mean
// progression along that order with a 1 ms tolerance on each step.
// Throws Error("insufficient-configs") for fewer than two configs.
TradeoffReport tradeoff_report(const ConfigDatasets& datasets);

// Config names in trend order (server count, then name).
std::vector<std::string> ordered_config_names(const TradeoffReport& report);

std::string tradeoff_report_json(const TradeoffReport& report);

}  // namespace cdnsim
