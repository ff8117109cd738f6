#include "cdnsim/metrics_recorder.hpp"

#include "cdnsim/csv.hpp"
#include "cdnsim/error.hpp"
#include "cdnsim/prometheus.hpp"

namespace cdnsim {

double modified_rtt(double raw_rtt_ms, double lambda_ms, Rng& rng) {
  if (raw_rtt_ms < 0) throw Error("invalid-rtt", "raw rtt must be nonnegative");
  return raw_rtt_ms + static_cast<double>(poisson_sample(lambda_ms, rng));
}

namespace {

std::vector<std::string> series_header(const MetricSeries& series) {
  std::vector<std::string> header;
  header.reserve(series.columns.size() + 1);
  header.push_back("timestamp");
  header.insert(header.end(), series.columns.begin(), series.columns.end());
  return header;
}

std::vector<std::string> series_row(const MetricSeries::Row& row) {
  std::vector<std::string> fields;
  fields.reserve(row.values.size() + 1);
  fields.push_back(row.timestamp);
  for (const auto& v : row.values) {
    fields.push_back(v ? format_double(*v) : "N/A");
  }
  return fields;
}

}  // namespace

void write_series_csv(const MetricSeries& series, const std::filesystem::path& path) {
  CsvWriter writer(path.string());
  writer.write_row(series_header(series));
  for (const auto& row : series.rows) writer.write_row(series_row(row));
}

MetricSeries load_series_csv(const std::filesystem::path& path, MetricKind kind) {
  std::vector<std::vector<std::string>> rows = read_csv_rows(path.string());
  if (rows.empty()) throw Error("parse-error", path.string() + ": missing header");
  const auto& header = rows.front();
  if (header.size() < 2 || header[0] != "timestamp") {
    throw Error("parse-error",
                path.string() + ": header must be timestamp,<column>,...");
  }
  MetricSeries series;
  series.metric = kind;
  series.columns.assign(header.begin() + 1, header.end());
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto& fields = rows[r];
    if (fields.size() != header.size()) {
      throw Error("parse-error", path.string() + ": row " + std::to_string(r + 1) +
                                     ": expected " + std::to_string(header.size()) +
                                     " fields, got " + std::to_string(fields.size()));
    }
    MetricSeries::Row row;
    row.timestamp = fields[0];
    if (!series.rows.empty() && row.timestamp < series.rows.back().timestamp) {
      throw Error("parse-error", path.string() + ": row " + std::to_string(r + 1) +
                                     ": timestamps must be nondecreasing");
    }
    for (size_t c = 1; c < fields.size(); ++c) {
      if (fields[c] == "N/A") {
        row.values.emplace_back(std::nullopt);
        continue;
      }
      try {
        row.values.emplace_back(parse_double(fields[c]));
      } catch (const Error&) {
        throw Error("parse-error", path.string() + ": row " + std::to_string(r + 1) +
                                       ", column " + header[c] + ": bad value '" +
                                       fields[c] + "'");
      }
    }
    series.rows.push_back(std::move(row));
  }
  return series;
}

MetricSeries record_ping_rounds(ActivityContext& ctx, const RttProber& probe,
                                const PingRecorderOptions& options,
                                const Timebase& timebase) {
  if (options.servers.empty()) {
    throw Error("invalid-config", "ping recorder needs at least one server");
  }
  MetricSeries series;
  series.metric = MetricKind::rtt;
  series.columns = options.servers;

  CsvWriter writer(options.csv_path.string());
  writer.write_row(series_header(series));

  const double start = ctx.now_ms();
  for (int round = 0; round < options.num_pings; ++round) {
    ctx.sleep_until_ms(start + round * options.interval_s * 1000.0);
    MetricSeries::Row row;
    row.timestamp = timebase.iso8601(ctx.now_ms());
    for (const NodeId& server : options.servers) {
      std::optional<double> raw = probe(ctx, server);
      if (raw) {
        row.values.emplace_back(modified_rtt(*raw, options.lambda_ms, ctx.rng()));
      } else {
        row.values.emplace_back(std::nullopt);
      }
    }
    writer.write_row(series_row(row));
    series.rows.push_back(std::move(row));
  }
  return series;
}

std::optional<double> CpuUtilizationFetcher::fetch(ActivityContext& ctx,
                                                   const std::string& instance,
                                                   const std::string& metrics_url,
                                                   Rng& rng) {
  FetchOutcome o = fetcher_.fetch_once(ctx, metrics_url);
  if (!o.ok || o.response.status != 200) return std::nullopt;

  CpuCounters current;
  current.instance = instance;
  bool saw_total = false, saw_active = false;
  std::vector<CounterSample> samples;
  try {
    samples = parse_prometheus_text(o.response.body);
  } catch (const Error&) {
    return std::nullopt;
  }
  for (const CounterSample& s : samples) {
    if (s.name != "cdn_cpu_seconds_total") continue;
    std::string inst, mode;
    for (const auto& [k, v] : s.labels) {
      if (k == "instance") inst = v;
      if (k == "mode") mode = v;
    }
    if (inst != instance) continue;
    if (mode == "total") {
      current.total_cpu_s = s.value;
      saw_total = true;
    } else if (mode == "active") {
      current.active_cpu_s = s.value;
      saw_active = true;
    }
  }
  if (!saw_total || !saw_active) return std::nullopt;

  auto prev = previous_.find(instance);
  bool have_delta = prev != previous_.end();
  std::optional<double> result;
  if (have_delta) {
    double d_total = current.total_cpu_s - prev->second.total_cpu_s;
    double d_active = current.active_cpu_s - prev->second.active_cpu_s;
    if (d_total > 0) {
      result = 100.0 * d_active / d_total +
               static_cast<double>(poisson_sample(lambda_pct_, rng));
    }
  }
  previous_[instance] = current;
  return result;
}

MetricSeries log_cpu(ActivityContext& ctx, HttpFetcher& fetcher,
                     const CpuLoggerOptions& options, const Timebase& timebase) {
  if (options.targets.empty()) {
    throw Error("invalid-config", "cpu logger needs at least one target");
  }
  MetricSeries series;
  series.metric = MetricKind::cpu;
  for (const auto& [instance, url] : options.targets) series.columns.push_back(instance);

  CsvWriter writer(options.csv_path.string());
  writer.write_row(series_header(series));

  CpuUtilizationFetcher cpu(fetcher, options.lambda_pct);
  const double start = ctx.now_ms();
  for (int round = 0; round < options.iterations; ++round) {
    ctx.sleep_until_ms(start + round * options.interval_s * 1000.0);
    MetricSeries::Row row;
    row.timestamp = timebase.iso8601(ctx.now_ms());
    for (const auto& [instance, url] : options.targets) {
      row.values.push_back(cpu.fetch(ctx, instance, url, ctx.rng()));
    }
    writer.write_row(series_row(row));
    series.rows.push_back(std::move(row));
  }
  return series;
}

}  // namespace cdnsim
