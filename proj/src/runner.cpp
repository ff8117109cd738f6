#include "cdnsim/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <system_error>

#include "cdnsim/dash_client.hpp"
#include "cdnsim/delay_mutator.hpp"
#include "cdnsim/error.hpp"
#include "cdnsim/gateway.hpp"
#include "cdnsim/http.hpp"
#include "cdnsim/metrics_recorder.hpp"
#include "cdnsim/origin.hpp"
#include "cdnsim/svg_plots.hpp"
#include "cdnsim/topology.hpp"
#include "cdnsim/wall_http.hpp"

namespace cdnsim {

namespace fs = std::filesystem;

double coordination_overhead_ms(int server_count, double per_server_ms) {
  int extra = server_count - 4;
  if (extra < 0) extra = 0;
  return per_server_ms * extra;
}

namespace {

// Failures below the orchestrator keep their code but gain the phase name.
template <typename F>
auto phase(const char* name, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    throw Error(e.code(), std::string(name) + " phase: " + e.what());
  }
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("io-error", "cannot open '" + path.string() + "'");
  out << content;
  out.flush();
  if (!out) throw Error("io-error", "write to '" + path.string() + "' failed");
}

fs::path resolve_output(const fs::path& out_dir, const std::string& configured) {
  fs::path p(configured);
  return p.is_absolute() ? p : out_dir / p;
}

std::string config_label(const ExperimentConfig& cfg) {
  return std::string(profile_name(cfg.profile)) + "-" +
         std::to_string(cfg.server_count);
}

Manifest default_video() {
  return make_manifest("default", 10, 4.0, 256 * 1024);
}

RecorderConfig effective_recorder(const ExperimentConfig& cfg, const RunOptions& opts) {
  RecorderConfig rec = cfg.recorder;
  if (opts.quick) {
    rec.num_pings = std::min(rec.num_pings, 100);
    rec.cpu_iterations = std::min(rec.cpu_iterations, 100);
  }
  return rec;
}

void check_down_servers(const Topology& topo, const RunOptions& opts) {
  for (const NodeId& name : opts.down_servers) {
    if (std::find(topo.servers.begin(), topo.servers.end(), name) ==
        topo.servers.end()) {
      throw Error("invalid-scenario", "down server '" + name + "' not in topology");
    }
  }
}

// Pieces shared by the activity bodies of one run, independent of transport.
struct RunPlan {
  ExperimentConfig cfg;
  RecorderConfig rec;
  Topology topo;
  uint64_t seed = 0;
  double overhead_ms = 0.0;
  fs::path out_dir;
  fs::path streams_dir;
  fs::path ping_csv;
  fs::path cpu_csv;
};

RunPlan make_plan(const ExperimentConfig& cfg, const fs::path& out_dir,
                  const RunOptions& opts) {
  auto violations = validate_config(cfg);
  if (!violations.empty()) {
    std::string msg = "scenario invalid:";
    for (const auto& v : violations) msg += " [" + v.code + "] " + v.message + ";";
    throw Error("invalid-scenario", msg);
  }

  RunPlan plan;
  plan.cfg = cfg;
  plan.rec = effective_recorder(cfg, opts);
  plan.topo = build_topology(cfg);
  plan.seed = opts.seed_override.value_or(cfg.seed);
  plan.overhead_ms =
      coordination_overhead_ms(cfg.server_count, opts.overhead_per_server_ms);
  plan.out_dir = out_dir;
  plan.streams_dir = out_dir / "streams";
  plan.ping_csv = resolve_output(out_dir, plan.rec.ping_output_path);
  plan.cpu_csv = resolve_output(out_dir, plan.rec.cpu_output_path);
  check_down_servers(plan.topo, opts);

  std::error_code ec;
  fs::create_directories(plan.streams_dir, ec);
  if (!ec) fs::create_directories(out_dir / "segments", ec);
  if (ec) {
    throw Error("io-error", "cannot create '" + out_dir.string() + "': " + ec.message());
  }
  return plan;
}

std::string session_file_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "session-%04d.json", index);
  return buf;
}

// Loops full streaming sessions until cancelled; each completed session's
// report lands in streams_dir. Session failures (e.g. every server down)
// only delay the next attempt.
void client_loop(ActivityContext& ctx, HttpFetcher& fetcher,
                 const StreamSession& session, const fs::path& streams_dir,
                 std::vector<fs::path>& written) {
  int index = 0;
  while (true) {
    try {
      StreamReport report = stream(ctx, fetcher, session);
      fs::path path = streams_dir / session_file_name(index);
      write_text_file(path, stream_report_json(report));
      written.push_back(path);
      ++index;
    } catch (const Error&) {
      ctx.sleep_ms(10.0);
    }
  }
}

RttProber gateway_prober(Gateway& gateway, double overhead_ms) {
  return [&gateway, overhead_ms](ActivityContext& ctx,
                                 const NodeId& server) -> std::optional<double> {
    double started = ctx.now_ms();
    if (overhead_ms > 0) ctx.sleep_ms(overhead_ms);
    ProbeResult probe = gateway.ping_rtt(ctx, server);
    if (!probe.rtt_ms) return std::nullopt;
    return ctx.now_ms() - started;
  };
}

// Single-run summary with the run's own label; the cross-config trend needs
// run_suite.
void write_single_report(const RunPlan& plan, const MetricSeries& rtt,
                         const MetricSeries& cpu, const fs::path& report_dir) {
  ConfigDatasets datasets;
  std::string label = config_label(plan.cfg);
  datasets[label] = {rtt, cpu};

  TradeoffReport report;
  report.per_config[label] = summarize_config(rtt, cpu);
  report.rtt_trend = Trend::flat;
  const ConfigStats& stats = report.per_config[label];
  report.narrative.push_back(
      label + ": median RTT " + format_fixed(stats.rtt.median, 1) +
      " ms, median CPU " + format_fixed(stats.cpu.median, 1) + " %, " +
      std::to_string(stats.server_count) + " servers.");

  render_plots(report, datasets, report_dir);
  write_text_file(report_dir / "summary.json", tradeoff_report_json(report));
}

RunArtifacts run_virtual(const ExperimentConfig& cfg, const fs::path& out_dir,
                         const RunOptions& opts) {
  RunPlan plan = phase("setup", [&] { return make_plan(cfg, out_dir, opts); });

  RunArtifacts artifacts;
  artifacts.run_id = config_label(cfg) + "-seed" + std::to_string(plan.seed);
  artifacts.config_snapshot = cfg;
  artifacts.scenario_json = out_dir / "scenario.json";
  artifacts.ping_csv = plan.ping_csv;
  artifacts.cpu_csv = plan.cpu_csv;
  artifacts.decision_log = out_dir / "decision_log.csv";
  artifacts.mutation_log = out_dir / "mutation_log.csv";
  artifacts.report_dir = out_dir / "report";

  phase("setup", [&] { write_text_file(artifacts.scenario_json, scenario_to_json(cfg)); });

  Timebase timebase = Timebase::fixed();
  LinkTable links;
  populate_link_table(plan.topo, cfg, links);
  VirtualNetwork net(links, plan.topo);

  std::vector<std::unique_ptr<OriginServer>> origins;
  for (const NodeId& server : plan.topo.servers) {
    auto origin = std::make_unique<OriginServer>(server, 0.0);
    origin->provision(default_video());
    net.register_handler(server,
                         [o = origin.get()](ActivityContext& ctx, const HttpRequest& req) {
                           return o->handle(ctx, req);
                         });
    origins.push_back(std::move(origin));
  }
  for (const NodeId& server : opts.down_servers) net.set_down(server, true);

  DecisionLog decision_log(artifacts.decision_log.string());
  VirtualFetcher gateway_fetcher(net, plan.topo.gateway);
  auto base_url = [](const NodeId& server) { return "http://" + server + "/"; };
  Gateway gateway(gateway_fetcher, plan.topo.servers, base_url, timebase,
                  &decision_log, plan.overhead_ms);
  net.register_handler(plan.topo.gateway,
                       [&gateway](ActivityContext& ctx, const HttpRequest& req) {
                         return gateway.handle(ctx, req);
                       });

  MutationLog mutation_log(artifacts.mutation_log.string(), timebase);

  MetricSeries rtt_series;
  MetricSeries cpu_series;
  VirtualScheduler sched(plan.seed);

  if (cfg.delay_mutator.enabled) {
    for (const LinkId& link : plan.topo.client_links()) {
      sched.spawn_daemon("mutator-" + link, [&, link](ActivityContext& ctx) {
        delay_mutator_loop(ctx, cfg.delay_mutator, links, link, &mutation_log);
      });
    }
  }

  VirtualFetcher client_fetcher(net, plan.topo.client);
  StreamSession session;
  session.manifest_url = "http://" + plan.topo.gateway + "/manifest/default";
  session.redirect_base = "http://" + plan.topo.gateway + "/cdn/";
  session.client_throttle = opts.client_throttle_bytes_per_s;
  session.out_dir = out_dir / "segments";
  sched.spawn_daemon("client", [&](ActivityContext& ctx) {
    client_loop(ctx, client_fetcher, session, plan.streams_dir,
                artifacts.stream_reports);
  });

  sched.spawn("rtt-recorder", [&](ActivityContext& ctx) {
    PingRecorderOptions po;
    po.servers = plan.topo.servers;
    po.num_pings = plan.rec.num_pings;
    po.interval_s = plan.rec.ping_interval_s;
    po.lambda_ms = cfg.rtt_noise_lambda_ms;
    po.csv_path = plan.ping_csv;
    rtt_series = record_ping_rounds(ctx, gateway_prober(gateway, plan.overhead_ms),
                                    po, timebase);
  });

  sched.spawn("cpu-recorder", [&](ActivityContext& ctx) {
    CpuLoggerOptions co;
    for (const NodeId& server : plan.topo.servers) {
      co.targets.emplace_back(server, "http://" + server + "/metrics");
    }
    co.iterations = plan.rec.cpu_iterations;
    co.interval_s = plan.rec.cpu_interval_s;
    co.lambda_pct = cfg.cpu_noise_lambda_pct;
    co.csv_path = plan.cpu_csv;
    cpu_series = log_cpu(ctx, gateway_fetcher, co, timebase);
  });

  phase("run", [&] { sched.run(); });

  artifacts.rtt_series = std::move(rtt_series);
  artifacts.cpu_series = std::move(cpu_series);
  phase("report", [&] {
    write_single_report(plan, artifacts.rtt_series, artifacts.cpu_series,
                        artifacts.report_dir);
  });
  return artifacts;
}

RunArtifacts run_wall(const ExperimentConfig& cfg, const fs::path& out_dir,
                      const RunOptions& opts) {
  RunPlan plan = phase("setup", [&] { return make_plan(cfg, out_dir, opts); });

  RunArtifacts artifacts;
  artifacts.run_id = config_label(cfg) + "-seed" + std::to_string(plan.seed);
  artifacts.config_snapshot = cfg;
  artifacts.scenario_json = out_dir / "scenario.json";
  artifacts.ping_csv = plan.ping_csv;
  artifacts.cpu_csv = plan.cpu_csv;
  artifacts.decision_log = out_dir / "decision_log.csv";
  artifacts.mutation_log = out_dir / "mutation_log.csv";
  artifacts.report_dir = out_dir / "report";

  phase("setup", [&] { write_text_file(artifacts.scenario_json, scenario_to_json(cfg)); });

  Timebase timebase = Timebase::from_system_now();
  LinkTable links;
  populate_link_table(plan.topo, cfg, links);

  auto server_url = [&](size_t index) {
    return "http://127.0.0.1:" +
           std::to_string(opts.wall_base_port + 1 + static_cast<int>(index)) + "/";
  };
  std::string gateway_url =
      "http://127.0.0.1:" + std::to_string(opts.wall_base_port) + "/";

  // Each listener charges the emulated round trip of the link toward the
  // X-From peer before handling; client<->gateway stays a free channel.
  auto delay_toward = [&links, &plan](const NodeId& self) {
    return [&links, &plan, self](const NodeId& from) -> double {
      auto it = plan.topo.links.find({from, self});
      if (it == plan.topo.links.end()) it = plan.topo.links.find({self, from});
      if (it == plan.topo.links.end()) return 0.0;
      return links.snapshot(it->second).one_way_delay_ms;
    };
  };

  std::vector<std::unique_ptr<OriginServer>> origins;
  std::vector<std::unique_ptr<WallHttpServer>> listeners;
  for (size_t i = 0; i < plan.topo.servers.size(); ++i) {
    const NodeId& server = plan.topo.servers[i];
    auto origin = std::make_unique<OriginServer>(server, 0.0);
    origin->provision(default_video());
    bool down = std::find(opts.down_servers.begin(), opts.down_servers.end(),
                          server) != opts.down_servers.end();
    if (!down) {
      auto listener = std::make_unique<WallHttpServer>(
          server, opts.wall_base_port + 1 + static_cast<int>(i),
          [o = origin.get()](ActivityContext& ctx, const HttpRequest& req) {
            return o->handle(ctx, req);
          },
          Rng::derive_seed(plan.seed, "listener-" + server), delay_toward(server));
      listeners.push_back(std::move(listener));
    }
    origins.push_back(std::move(origin));
  }

  DecisionLog decision_log(artifacts.decision_log.string());
  WallFetcher gateway_fetcher(plan.topo.gateway);
  auto base_url = [&](const NodeId& server) {
    return server_url(plan.topo.server_index(server));
  };
  Gateway gateway(gateway_fetcher, plan.topo.servers, base_url, timebase,
                  &decision_log, plan.overhead_ms);
  auto gateway_listener = std::make_unique<WallHttpServer>(
      plan.topo.gateway, opts.wall_base_port,
      [&gateway](ActivityContext& ctx, const HttpRequest& req) {
        return gateway.handle(ctx, req);
      },
      Rng::derive_seed(plan.seed, "listener-gateway"),
      delay_toward(plan.topo.gateway));
  listeners.push_back(std::move(gateway_listener));

  phase("listen", [&] {
    for (auto& listener : listeners) listener->start();
  });

  MutationLog mutation_log(artifacts.mutation_log.string(), timebase);

  MetricSeries rtt_series;
  MetricSeries cpu_series;
  {
    WallRuntime runtime(plan.seed);

    if (cfg.delay_mutator.enabled) {
      for (const LinkId& link : plan.topo.client_links()) {
        runtime.spawn_daemon("mutator-" + link, [&, link](ActivityContext& ctx) {
          delay_mutator_loop(ctx, cfg.delay_mutator, links, link, &mutation_log);
        });
      }
    }

    WallFetcher client_fetcher(plan.topo.client);
    StreamSession session;
    session.manifest_url = gateway_url + "manifest/default";
    session.redirect_base = gateway_url + "cdn/";
    session.client_throttle = opts.client_throttle_bytes_per_s;
    session.out_dir = out_dir / "segments";
    runtime.spawn_daemon("client", [&](ActivityContext& ctx) {
      client_loop(ctx, client_fetcher, session, plan.streams_dir,
                  artifacts.stream_reports);
    });

    runtime.spawn("rtt-recorder", [&](ActivityContext& ctx) {
      PingRecorderOptions po;
      po.servers = plan.topo.servers;
      po.num_pings = plan.rec.num_pings;
      po.interval_s = plan.rec.ping_interval_s;
      po.lambda_ms = cfg.rtt_noise_lambda_ms;
      po.csv_path = plan.ping_csv;
      rtt_series = record_ping_rounds(ctx, gateway_prober(gateway, plan.overhead_ms),
                                      po, timebase);
    });

    runtime.spawn("cpu-recorder", [&](ActivityContext& ctx) {
      CpuLoggerOptions co;
      for (size_t i = 0; i < plan.topo.servers.size(); ++i) {
        co.targets.emplace_back(plan.topo.servers[i], server_url(i) + "metrics");
      }
      co.iterations = plan.rec.cpu_iterations;
      co.interval_s = plan.rec.cpu_interval_s;
      co.lambda_pct = cfg.cpu_noise_lambda_pct;
      co.csv_path = plan.cpu_csv;
      cpu_series = log_cpu(ctx, gateway_fetcher, co, timebase);
    });

    phase("run", [&] { runtime.run(); });
  }

  for (auto& listener : listeners) listener->stop();

  artifacts.rtt_series = std::move(rtt_series);
  artifacts.cpu_series = std::move(cpu_series);
  phase("report", [&] {
    write_single_report(plan, artifacts.rtt_series, artifacts.cpu_series,
                        artifacts.report_dir);
  });
  return artifacts;
}

}  // namespace

ExperimentConfig load_scenario(const std::string& name_or_path) {
  if (is_preset(name_or_path)) return preset_scenario(name_or_path);
  std::ifstream in(name_or_path, std::ios::binary);
  if (!in) throw Error("io-error", "cannot read scenario '" + name_or_path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return scenario_from_json(text.str());
}

RunArtifacts run_experiment(const ExperimentConfig& scenario,
                            const fs::path& out_dir, const RunOptions& options) {
  bool wall = options.wall || scenario.clock_mode == ClockMode::wall;
  return wall ? run_wall(scenario, out_dir, options)
              : run_virtual(scenario, out_dir, options);
}

SuiteResult run_suite(const std::vector<std::string>& presets,
                      const fs::path& out_dir, const RunOptions& options) {
  if (presets.size() < 2) {
    throw Error("insufficient-configs", "suite needs at least two presets");
  }

  SuiteResult result;
  ConfigDatasets datasets;
  RunOptions per_run = options;
  for (size_t i = 0; i < presets.size(); ++i) {
    const std::string& name = presets[i];
    ExperimentConfig cfg = load_scenario(name);
    // A scenario given as a file path is keyed by its stem so the run stays
    // inside out_dir.
    std::string label = is_preset(name) ? name : fs::path(name).stem().string();
    if (label.empty() || datasets.count(label)) {
      throw Error("invalid-scenario", "duplicate or empty scenario label '" +
                                          label + "' in suite");
    }
    if (options.wall) {
      // Keep concurrent listener ports disjoint across the suite's runs.
      per_run.wall_base_port =
          options.wall_base_port + static_cast<int>(i) * 64;
    }
    RunArtifacts run = run_experiment(cfg, out_dir / label, per_run);
    datasets[label] = {run.rtt_series, run.cpu_series};
    result.runs.push_back(std::move(run));
  }

  result.report = tradeoff_report(datasets);
  result.report_dir = out_dir / "report";
  render_plots(result.report, datasets, result.report_dir);
  write_text_file(result.report_dir / "tradeoff_report.json",
                  tradeoff_report_json(result.report));
  std::string narrative;
  for (const std::string& line : result.report.narrative) {
    narrative += line;
    narrative += '\n';
  }
  write_text_file(result.report_dir / "narrative.txt", narrative);
  return result;
}

}  // namespace cdnsim
