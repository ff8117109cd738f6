#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cdnsim/analysis.hpp"
#include "cdnsim/clock.hpp"
#include "cdnsim/dash_client.hpp"
#include "cdnsim/error.hpp"
#include "cdnsim/http.hpp"
#include "cdnsim/runner.hpp"
#include "cdnsim/svg_plots.hpp"
#include "cdnsim/wall_http.hpp"

namespace fs = std::filesystem;
using namespace cdnsim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 2;
constexpr int kExitRuntime = 3;

// Errors that describe the request rather than the run.
bool is_input_error(const std::string& code) {
  static const char* const kCodes[] = {
      "invalid-scenario", "parse-error",    "unknown-field", "insufficient-configs",
      "invalid-url",      "invalid-rate",   "invalid-base",  "empty-filename",
      "invalid-manifest", "unknown-column", "empty-series"};
  for (const char* c : kCodes) {
    if (code == c) return true;
  }
  return false;
}

int report_error(const Error& e, int exit_code) {
  std::cerr << "error: " << e.what() << "\n";
  return exit_code;
}

int classify_and_report(const Error& e) {
  return report_error(e, is_input_error(e.code()) ? kExitBadInput : kExitRuntime);
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("io-error", "cannot open '" + path.string() + "'");
  out << content;
  out.flush();
  if (!out) throw Error("io-error", "write to '" + path.string() + "' failed");
}

struct RunArgs {
  std::string scenario;
  std::string out;
  std::optional<uint64_t> seed;
  bool quick = false;
  bool wall = false;
  std::vector<std::string> down;
  int port = 18080;
  double throttle = 262144.0;
};

int cmd_run(const RunArgs& args) {
  ExperimentConfig cfg;
  try {
    cfg = load_scenario(args.scenario);
  } catch (const Error& e) {
    return report_error(e, kExitBadInput);
  }

  RunOptions opts;
  opts.quick = args.quick;
  opts.wall = args.wall;
  opts.down_servers = args.down;
  opts.seed_override = args.seed;
  opts.wall_base_port = args.port;
  opts.client_throttle_bytes_per_s = args.throttle;
  try {
    RunArtifacts artifacts = run_experiment(cfg, args.out, opts);
    std::cout << "run " << artifacts.run_id << " complete\n"
              << "  ping csv:     " << artifacts.ping_csv.string() << "\n"
              << "  cpu csv:      " << artifacts.cpu_csv.string() << "\n"
              << "  decision log: " << artifacts.decision_log.string() << "\n"
              << "  sessions:     " << artifacts.stream_reports.size() << "\n"
              << "  report:       " << artifacts.report_dir.string() << "\n";
    return kExitOk;
  } catch (const Error& e) {
    return classify_and_report(e);
  }
}

struct SuiteArgs {
  std::vector<std::string> presets;
  std::string out;
  std::optional<uint64_t> seed;
  bool quick = false;
  bool wall = false;
  int port = 18080;
};

int cmd_suite(const SuiteArgs& args) {
  RunOptions opts;
  opts.quick = args.quick;
  opts.wall = args.wall;
  opts.seed_override = args.seed;
  opts.wall_base_port = args.port;
  try {
    SuiteResult suite = run_suite(args.presets, args.out, opts);
    for (const std::string& line : suite.report.narrative) std::cout << line << "\n";
    std::cout << "report: " << suite.report_dir.string() << "\n";
    return kExitOk;
  } catch (const Error& e) {
    return classify_and_report(e);
  }
}

struct AnalyzeArgs {
  std::vector<std::string> inputs;  // name=rtt.csv,cpu.csv
  std::string out;
  bool per_server = false;
};

int cmd_analyze(const AnalyzeArgs& args) {
  ConfigDatasets datasets;
  try {
    for (const std::string& spec : args.inputs) {
      size_t eq = spec.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw Error("parse-error", "input '" + spec + "' is not name=rtt.csv,cpu.csv");
      }
      std::string name = spec.substr(0, eq);
      size_t comma = spec.find(',', eq + 1);
      if (comma == std::string::npos || comma + 1 >= spec.size()) {
        throw Error("parse-error", "input '" + spec + "' needs two CSV paths");
      }
      fs::path rtt_path = spec.substr(eq + 1, comma - eq - 1);
      fs::path cpu_path = spec.substr(comma + 1);
      if (datasets.count(name)) {
        throw Error("parse-error", "duplicate config name '" + name + "'");
      }
      datasets[name] = {load_series_csv(rtt_path, MetricKind::rtt),
                        load_series_csv(cpu_path, MetricKind::cpu)};
    }
  } catch (const Error& e) {
    return report_error(e, kExitBadInput);
  }

  try {
    TradeoffReport report = tradeoff_report(datasets);
    PlotOptions plot_opts;
    plot_opts.per_server = args.per_server;
    render_plots(report, datasets, args.out, plot_opts);
    write_text_file(fs::path(args.out) / "tradeoff_report.json",
                    tradeoff_report_json(report));
    for (const std::string& line : report.narrative) std::cout << line << "\n";
    std::cout << "report: " << args.out << "\n";
    return kExitOk;
  } catch (const Error& e) {
    return classify_and_report(e);
  }
}

struct StreamArgs {
  std::string manifest;
  std::string out;
  double rate = kUnlimitedRate;
  std::string redirect_base;
  double timeout_ms = 2000.0;
};

// scheme://host[:port]/cdn/ from the manifest's own origin.
std::string derive_redirect_base(const std::string& manifest_url) {
  ParsedUrl parsed = parse_url(manifest_url);
  return "http://" + parsed.host + ":" + std::to_string(parsed.port) + "/cdn/";
}

int cmd_stream(const StreamArgs& args) {
  StreamSession session;
  try {
    session.manifest_url = args.manifest;
    session.redirect_base =
        args.redirect_base.empty() ? derive_redirect_base(args.manifest) : args.redirect_base;
    session.client_throttle = args.rate;
    session.out_dir = fs::path(args.out) / "segments";
    std::error_code ec;
    fs::create_directories(session.out_dir, ec);
    if (ec) throw Error("io-error", "cannot create '" + args.out + "'");
  } catch (const Error& e) {
    return report_error(e, kExitBadInput);
  }

  try {
    SystemClock clock;
    BasicActivityContext ctx(clock, 0, "stream-cli");
    WallFetcher fetcher("client", args.timeout_ms);
    StreamReport report = stream(ctx, fetcher, session);
    write_text_file(fs::path(args.out) / "stream_report.json",
                    stream_report_json(report));
    write_segment_csv(fs::path(args.out) / "segments.csv", report);
    std::cout << "video " << report.video_id << ": " << report.segments_fetched
              << " segments fetched, " << report.segments_failed << " failed, "
              << report.bytes_total << " bytes in " << format_fixed(report.duration_ms, 1)
              << " ms\n"
              << "report: " << args.out << "\n";
    return kExitOk;
  } catch (const Error& e) {
    return classify_and_report(e);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CDN gateway emulation harness: scenario runs, suites, analysis, streaming"};
  app.require_subcommand(1);

  RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "Run one scenario end to end");
  run->add_option("--scenario", run_args.scenario, "Preset name or scenario JSON path")
      ->required();
  run->add_option("--out", run_args.out, "Output directory")->required();
  run->add_option("--seed", run_args.seed, "Override the scenario seed");
  run->add_flag("--quick", run_args.quick, "Cap both recorders at 100 rounds");
  run->add_flag("--wall", run_args.wall, "Real HTTP listeners on localhost");
  run->add_option("--down", run_args.down, "Servers to mark down")->delimiter(',');
  run->add_option("--port", run_args.port, "Wall-mode base port");
  run->add_option("--throttle", run_args.throttle, "Client download rate, bytes/s");

  SuiteArgs suite_args;
  CLI::App* suite = app.add_subcommand("suite", "Run several scenarios and compare them");
  suite->add_option("--presets", suite_args.presets, "Preset names or scenario paths")
      ->required()
      ->delimiter(',');
  suite->add_option("--out", suite_args.out, "Output directory")->required();
  suite->add_option("--seed", suite_args.seed, "Override every scenario seed");
  suite->add_flag("--quick", suite_args.quick, "Cap both recorders at 100 rounds");
  suite->add_flag("--wall", suite_args.wall, "Real HTTP listeners on localhost");
  suite->add_option("--port", suite_args.port, "Wall-mode base port");

  AnalyzeArgs analyze_args;
  CLI::App* analyze = app.add_subcommand("analyze", "Compare recorded CSV datasets");
  analyze
      ->add_option("--inputs", analyze_args.inputs,
                   "Repeatable: name=rtt.csv,cpu.csv")
      ->required()
      ->take_all();
  analyze->add_option("--out", analyze_args.out, "Output directory")->required();
  analyze->add_flag("--per-server", analyze_args.per_server,
                    "One box per server instead of one per config");

  StreamArgs stream_args;
  CLI::App* stream_cmd = app.add_subcommand("stream", "One live streaming session");
  stream_cmd->add_option("--manifest", stream_args.manifest, "Manifest URL")->required();
  stream_cmd->add_option("--out", stream_args.out, "Output directory")->required();
  stream_cmd->add_option("--rate", stream_args.rate, "Download rate, bytes/s");
  stream_cmd->add_option("--redirect-base", stream_args.redirect_base,
                         "Base URL for intercepted media requests");
  stream_cmd->add_option("--timeout-ms", stream_args.timeout_ms, "Per-request timeout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadInput;
  }

  if (app.got_subcommand(run)) return cmd_run(run_args);
  if (app.got_subcommand(suite)) return cmd_suite(suite_args);
  if (app.got_subcommand(analyze)) return cmd_analyze(analyze_args);
  return cmd_stream(stream_args);
}
