#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cdnsim/http.hpp"
#include "cdnsim/origin.hpp"
#include "cdnsim/random.hpp"
#include "cdnsim/util.hpp"

namespace cdnsim {

enum class MetricKind { rtt, cpu };

// Column-oriented telemetry: one timestamped row per round, one value per
// server/instance, absences kept as data.
struct MetricSeries {
  struct Row {
    std::string timestamp;
    std::vector<std::optional<double>> values;
    bool operator==(const Row&) const = default;
  };

  MetricKind metric = MetricKind::rtt;
  std::vector<std::string> columns;
  std::vector<Row> rows;

  bool operator==(const MetricSeries&) const = default;
};

// raw + Poisson(lambda); expectation raw + lambda.
double modified_rtt(double raw_rtt_ms, double lambda_ms, Rng& rng);

// CSV dialect: header "timestamp,<col1>,<col2>,...", comma separator, "\n"
// line endings, "N/A" for absent values, no quoting.
void write_series_csv(const MetricSeries& series, const std::filesystem::path& path);

// Strict reader for the dialect above; ragged rows or unparsable values give
// Error("parse-error") naming the row.
MetricSeries load_series_csv(const std::filesystem::path& path, MetricKind kind);

// Produces the raw (pre-noise) RTT for one server, absent on failure. The
// probe's own elapsed time is the measurement.
using RttProber = std::function<std::optional<double>(ActivityContext&, const NodeId&)>;

struct PingRecorderOptions {
  std::vector<NodeId> servers;
  int num_pings = 1000;
  double interval_s = 1.0;
  double lambda_ms = 200.0;
  std::filesystem::path csv_path;
};

// Runs num_pings rounds on a fixed time grid (round k starts interval_s
// after round k-1), probing every server and appending one CSV row per round
// as it completes. Returns the series the file contains.
MetricSeries record_ping_rounds(ActivityContext& ctx, const RttProber& probe,
                                const PingRecorderOptions& options,
                                const Timebase& timebase);

// Utilization from Prometheus counter deltas between consecutive scrapes of
// the same instance: 100 * d(active)/d(total) + Poisson(lambda). The first
// scrape, a zero total delta, and scrape failures all yield absent.
class CpuUtilizationFetcher {
 public:
  CpuUtilizationFetcher(HttpFetcher& fetcher, double lambda_pct)
      : fetcher_(fetcher), lambda_pct_(lambda_pct) {}

  std::optional<double> fetch(ActivityContext& ctx, const std::string& instance,
                              const std::string& metrics_url, Rng& rng);

 private:
  HttpFetcher& fetcher_;
  double lambda_pct_;
  std::map<std::string, CpuCounters> previous_;
};

struct CpuLoggerOptions {
  std::vector<std::pair<std::string, std::string>> targets;  // (instance, metrics URL)
  int iterations = 1500;
  double interval_s = 2.0;
  double lambda_pct = 30.0;
  std::filesystem::path csv_path;
};

MetricSeries log_cpu(ActivityContext& ctx, HttpFetcher& fetcher,
                     const CpuLoggerOptions& options, const Timebase& timebase);

}  // namespace cdnsim
