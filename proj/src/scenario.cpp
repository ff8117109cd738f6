#include "cdnsim/scenario.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

#include "cdnsim/error.hpp"

namespace cdnsim {

using nlohmann::ordered_json;

std::vector<Violation> validate_config(const ExperimentConfig& config) {
  std::vector<Violation> out;
  auto add = [&out](const char* code, std::string msg) {
    out.push_back(Violation{code, std::move(msg)});
  };

  if (config.server_count < 1) {
    add("server-count-min", "server_count must be >= 1");
  }
  if (static_cast<int>(config.base_rtt_ms.size()) != config.server_count) {
    add("base-rtt-size", "base_rtt_ms must have exactly server_count entries");
  }
  for (size_t i = 0; i < config.base_rtt_ms.size(); ++i) {
    double v = config.base_rtt_ms[i];
    if (!(v >= 0) || !std::isfinite(v)) {
      add("base-rtt-negative", "base_rtt_ms[" + std::to_string(i) + "] must be >= 0");
    }
  }
  if (!(config.rtt_noise_lambda_ms >= 0) || !std::isfinite(config.rtt_noise_lambda_ms)) {
    add("rtt-noise-lambda-negative", "rtt_noise_lambda_ms must be >= 0");
  }
  if (!(config.cpu_noise_lambda_pct >= 0) || !std::isfinite(config.cpu_noise_lambda_pct)) {
    add("cpu-noise-lambda-negative", "cpu_noise_lambda_pct must be >= 0");
  }

  const DelayMutatorConfig& dm = config.delay_mutator;
  if (dm.min_delay_ms < 0) {
    add("delay-min-negative", "delay_mutator.min_delay_ms must be >= 0");
  }
  if (dm.min_delay_ms > dm.max_delay_ms) {
    add("delay-bounds-ordered", "delay bounds ordered: min_delay_ms <= max_delay_ms required");
  }
  if (!(dm.sleep_lambda_s > 0) || !std::isfinite(dm.sleep_lambda_s)) {
    add("sleep-lambda-positive", "delay_mutator.sleep_lambda_s must be > 0");
  }

  const RecorderConfig& rc = config.recorder;
  if (rc.num_pings < 1) {
    add("recorder-num-pings", "recorder.num_pings must be >= 1");
  }
  if (rc.cpu_iterations < 1) {
    add("recorder-cpu-iterations", "recorder.cpu_iterations must be >= 1");
  }
  if (!(rc.ping_interval_s > 0)) {
    add("recorder-ping-interval", "recorder.ping_interval_s must be > 0");
  }
  if (!(rc.cpu_interval_s > 0)) {
    add("recorder-cpu-interval", "recorder.cpu_interval_s must be > 0");
  }
  if (rc.ping_output_path.empty()) {
    add("recorder-ping-path", "recorder.ping_output_path must be nonempty");
  }
  if (rc.cpu_output_path.empty()) {
    add("recorder-cpu-path", "recorder.cpu_output_path must be nonempty");
  }
  return out;
}

namespace {

void reject_unknown_keys(const ordered_json& obj, const std::set<std::string>& known,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!known.count(it.key())) {
      throw Error("unknown-field", "unknown field '" + it.key() + "' in " + where);
    }
  }
}

template <typename T>
T require(const ordered_json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) {
    throw Error("parse-error", std::string("missing field '") + key + "' in " + where);
  }
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error("parse-error", std::string("field '") + key + "' in " + where + ": " + e.what());
  }
}

template <typename T>
T optional_field(const ordered_json& obj, const char* key, const std::string& where, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error("parse-error", std::string("field '") + key + "' in " + where + ": " + e.what());
  }
}

}  // namespace

ExperimentConfig scenario_from_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error("parse-error", std::string("scenario JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw Error("parse-error", "scenario JSON root must be an object");
  }
  reject_unknown_keys(doc,
                      {"profile", "server_count", "base_rtt_ms", "rtt_noise_lambda_ms",
                       "cpu_noise_lambda_pct", "delay_mutator", "recorder", "seed",
                       "clock_mode"},
                      "scenario");

  ExperimentConfig cfg;
  std::string profile = require<std::string>(doc, "profile", "scenario");
  if (profile == "testbed") {
    cfg.profile = Profile::testbed;
  } else if (profile == "edge") {
    cfg.profile = Profile::edge;
  } else {
    throw Error("parse-error", "profile must be 'testbed' or 'edge'");
  }
  cfg.server_count = require<int>(doc, "server_count", "scenario");
  cfg.base_rtt_ms = require<std::vector<double>>(doc, "base_rtt_ms", "scenario");
  cfg.rtt_noise_lambda_ms = optional_field(doc, "rtt_noise_lambda_ms", "scenario", 200.0);
  cfg.cpu_noise_lambda_pct = optional_field(doc, "cpu_noise_lambda_pct", "scenario", 30.0);
  cfg.seed = require<uint64_t>(doc, "seed", "scenario");

  std::string mode = optional_field<std::string>(doc, "clock_mode", "scenario", "virtual");
  if (mode == "virtual") {
    cfg.clock_mode = ClockMode::virtual_clock;
  } else if (mode == "wall") {
    cfg.clock_mode = ClockMode::wall;
  } else {
    throw Error("parse-error", "clock_mode must be 'virtual' or 'wall'");
  }

  if (doc.contains("delay_mutator")) {
    const auto& dm = doc.at("delay_mutator");
    if (!dm.is_object()) throw Error("parse-error", "delay_mutator must be an object");
    reject_unknown_keys(dm, {"min_delay_ms", "max_delay_ms", "sleep_lambda_s", "enabled"},
                        "delay_mutator");
    cfg.delay_mutator.min_delay_ms = optional_field(dm, "min_delay_ms", "delay_mutator", 200);
    cfg.delay_mutator.max_delay_ms = optional_field(dm, "max_delay_ms", "delay_mutator", 800);
    cfg.delay_mutator.sleep_lambda_s = optional_field(dm, "sleep_lambda_s", "delay_mutator", 5.0);
    cfg.delay_mutator.enabled = optional_field(dm, "enabled", "delay_mutator", true);
  }
  if (doc.contains("recorder")) {
    const auto& rc = doc.at("recorder");
    if (!rc.is_object()) throw Error("parse-error", "recorder must be an object");
    reject_unknown_keys(rc,
                        {"num_pings", "ping_interval_s", "cpu_iterations", "cpu_interval_s",
                         "ping_output_path", "cpu_output_path"},
                        "recorder");
    RecorderConfig d;
    cfg.recorder.num_pings = optional_field(rc, "num_pings", "recorder", d.num_pings);
    cfg.recorder.ping_interval_s = optional_field(rc, "ping_interval_s", "recorder", d.ping_interval_s);
    cfg.recorder.cpu_iterations = optional_field(rc, "cpu_iterations", "recorder", d.cpu_iterations);
    cfg.recorder.cpu_interval_s = optional_field(rc, "cpu_interval_s", "recorder", d.cpu_interval_s);
    cfg.recorder.ping_output_path =
        optional_field<std::string>(rc, "ping_output_path", "recorder", d.ping_output_path);
    cfg.recorder.cpu_output_path =
        optional_field<std::string>(rc, "cpu_output_path", "recorder", d.cpu_output_path);
  }
  return cfg;
}

std::string scenario_to_json(const ExperimentConfig& config) {
  ordered_json doc;
  doc["profile"] = profile_name(config.profile);
  doc["server_count"] = config.server_count;
  doc["base_rtt_ms"] = config.base_rtt_ms;
  doc["rtt_noise_lambda_ms"] = config.rtt_noise_lambda_ms;
  doc["cpu_noise_lambda_pct"] = config.cpu_noise_lambda_pct;
  doc["delay_mutator"] = {
      {"min_delay_ms", config.delay_mutator.min_delay_ms},
      {"max_delay_ms", config.delay_mutator.max_delay_ms},
      {"sleep_lambda_s", config.delay_mutator.sleep_lambda_s},
      {"enabled", config.delay_mutator.enabled},
  };
  doc["recorder"] = {
      {"num_pings", config.recorder.num_pings},
      {"ping_interval_s", config.recorder.ping_interval_s},
      {"cpu_iterations", config.recorder.cpu_iterations},
      {"cpu_interval_s", config.recorder.cpu_interval_s},
      {"ping_output_path", config.recorder.ping_output_path},
      {"cpu_output_path", config.recorder.cpu_output_path},
  };
  doc["seed"] = config.seed;
  doc["clock_mode"] = clock_mode_name(config.clock_mode);
  return doc.dump(2) + "\n";
}

bool is_preset(const std::string& name) {
  for (const auto& p : preset_names()) {
    if (p == name) return true;
  }
  return false;
}

std::vector<std::string> preset_names() {
  return {"testbed-4", "testbed-8", "testbed-12", "edge-2"};
}

// Base RTTs are calibration choices, not measured values: 20 ms per testbed
// server so the lambda=200 noise lands the pooled median near 220 ms, and an
// uneven 15/60 ms pair for the edge profile's unstable second server.
ExperimentConfig preset_scenario(const std::string& name) {
  ExperimentConfig cfg;
  if (name == "testbed-4" || name == "testbed-8" || name == "testbed-12") {
    cfg.profile = Profile::testbed;
    cfg.server_count = name == "testbed-4" ? 4 : (name == "testbed-8" ? 8 : 12);
    cfg.base_rtt_ms.assign(cfg.server_count, 20.0);
  } else if (name == "edge-2") {
    cfg.profile = Profile::edge;
    cfg.server_count = 2;
    cfg.base_rtt_ms = {15.0, 60.0};
  } else {
    throw Error("unknown-preset", "no preset named '" + name + "'");
  }
  return cfg;
}

const char* profile_name(Profile p) {
  return p == Profile::testbed ? "testbed" : "edge";
}

const char* clock_mode_name(ClockMode m) {
  return m == ClockMode::virtual_clock ? "virtual" : "wall";
}

}  // namespace cdnsim
