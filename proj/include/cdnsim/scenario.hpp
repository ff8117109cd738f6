#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cdnsim {

enum class Profile { testbed, edge };
enum class ClockMode { virtual_clock, wall };

struct DelayMutatorConfig {
  int min_delay_ms = 200;
  int max_delay_ms = 800;
  double sleep_lambda_s = 5.0;
  bool enabled = true;
};

struct RecorderConfig {
  int num_pings = 1000;
  double ping_interval_s = 1.0;
  int cpu_iterations = 1500;
  double cpu_interval_s = 2.0;
  std::string ping_output_path = "ping_results1000.csv";
  std::string cpu_output_path = "cpu_results.csv";
};

// One experiment scenario: node roles, per-server base RTTs, noise
// parameters and run cadence. Fully determines a virtual run together with
// the seed.
struct ExperimentConfig {
  Profile profile = Profile::testbed;
  int server_count = 4;
  std::vector<double> base_rtt_ms;
  double rtt_noise_lambda_ms = 200.0;
  double cpu_noise_lambda_pct = 30.0;
  DelayMutatorConfig delay_mutator;
  RecorderConfig recorder;
  uint64_t seed = 0;
  ClockMode clock_mode = ClockMode::virtual_clock;
};

struct Violation {
  std::string code;
  std::string message;
};

// Every invariant violation as data; empty result means the config is valid.
std::vector<Violation> validate_config(const ExperimentConfig& config);

// Strict scenario-file parsing: unknown fields (top level or nested) are
// rejected. Throws Error("parse-error" | "unknown-field").
ExperimentConfig scenario_from_json(const std::string& text);
std::string scenario_to_json(const ExperimentConfig& config);

// Built-in scenarios: "testbed-4", "testbed-8", "testbed-12", "edge-2".
bool is_preset(const std::string& name);
ExperimentConfig preset_scenario(const std::string& name);
std::vector<std::string> preset_names();

const char* profile_name(Profile p);
const char* clock_mode_name(ClockMode m);

}  // namespace cdnsim
