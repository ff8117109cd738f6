#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cdnsim/analysis.hpp"
#include "cdnsim/scenario.hpp"

namespace cdnsim {

// Per-request gateway coordination cost for a fleet of n servers:
// per_server_ms * (n - 4), floored at zero. The four-server testbed is the
// calibration baseline, so only servers beyond it add coordination latency.
double coordination_overhead_ms(int server_count, double per_server_ms = 3.0);

struct RunOptions {
  bool quick = false;  // cap both recorders at 100 rounds
  std::vector<NodeId> down_servers;
  std::optional<uint64_t> seed_override;
  double overhead_per_server_ms = 3.0;
  bool wall = false;  // real HTTP listeners regardless of scenario clock_mode
  int wall_base_port = 18080;
  double client_throttle_bytes_per_s = 262144.0;
};

struct RunArtifacts {
  std::string run_id;
  ExperimentConfig config_snapshot;
  std::filesystem::path scenario_json;
  std::filesystem::path ping_csv;
  std::filesystem::path cpu_csv;
  std::vector<std::filesystem::path> stream_reports;
  std::filesystem::path decision_log;
  std::filesystem::path mutation_log;
  std::filesystem::path report_dir;
  // The recorders' output, kept in memory so callers can pool runs without
  // re-parsing the CSVs they just wrote.
  MetricSeries rtt_series;
  MetricSeries cpu_series;
};

// Accepts a preset name or a path to a scenario JSON file.
// Throws Error("io-error" | "parse-error" | "unknown-field").
ExperimentConfig load_scenario(const std::string& name_or_path);

// Full experiment lifecycle: validate, build the topology and transport,
// provision one default video on every origin, start the delay mutator and
// both recorders, run a looping client session, then summarize and plot the
// collected series. Virtual-clock runs are byte-deterministic per seed.
// Throws Error("invalid-scenario"); later failures carry the phase name.
RunArtifacts run_experiment(const ExperimentConfig& scenario,
                            const std::filesystem::path& out_dir,
                            const RunOptions& options = {});

struct SuiteResult {
  TradeoffReport report;
  std::vector<RunArtifacts> runs;
  std::filesystem::path report_dir;
};

// Runs every entry (preset name or scenario file path) into out_dir/<label>,
// then builds the cross-config comparison and the four-figure plot set under
// out_dir/report. File paths are labelled by their stem.
// Throws Error("insufficient-configs") for fewer than two entries and
// Error("invalid-scenario") when two entries collapse to one label.
SuiteResult run_suite(const std::vector<std::string>& presets,
                      const std::filesystem::path& out_dir,
                      const RunOptions& options = {});

}  // namespace cdnsim
