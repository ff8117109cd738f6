// Acceptance gate: ten end-to-end criteria, one PASS/FAIL line each, with
// every tolerance pinned here in code. Run all or a single one with
// --criterion N. Exit 0 only when every selected criterion passes.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cdnsim/analysis.hpp"
#include "cdnsim/dash_client.hpp"
#include "cdnsim/delay_mutator.hpp"
#include "cdnsim/error.hpp"
#include "cdnsim/gateway.hpp"
#include "cdnsim/http.hpp"
#include "cdnsim/link.hpp"
#include "cdnsim/metrics_recorder.hpp"
#include "cdnsim/mpd.hpp"
#include "cdnsim/origin.hpp"
#include "cdnsim/random.hpp"
#include "cdnsim/runner.hpp"
#include "cdnsim/scenario.hpp"
#include "cdnsim/svg_plots.hpp"
#include "cdnsim/topology.hpp"
#include "cdnsim/util.hpp"

using namespace cdnsim;
namespace fs = std::filesystem;
using steady = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(const steady::time_point& t0) {
  return std::chrono::duration<double>(steady::now() - t0).count();
}

fs::path work_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "cdnsim-acceptance" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string fmt(double v, int digits = 1) { return format_fixed(v, digits); }

// ---- criterion 1: server selection against a brute-force oracle ----------

Outcome criterion_selection_oracle() {
  constexpr int kTrials = 1000;
  constexpr double kAbsenceRate = 0.20;
  constexpr double kBudgetS = 1.0;

  auto t0 = steady::now();
  Rng gen(90001);
  int agreements = 0;
  int fallback_cases = 0;
  for (int trial = 0; trial < kTrials; ++trial) {
    int n = 1 + static_cast<int>(gen.uniform_u64(16));
    std::vector<ProbeResult> candidates;
    for (int i = 0; i < n; ++i) {
      ProbeResult p;
      p.server = "s" + std::to_string(i + 1);
      if (gen.uniform01() >= kAbsenceRate) {
        // Coarse grid so ties actually happen and exercise the tie-break.
        p.rtt_ms = static_cast<double>(gen.uniform_int(0, 40));
      }
      candidates.push_back(std::move(p));
    }

    // Brute-force min scan: first index of the smallest present RTT.
    std::optional<size_t> best;
    for (size_t i = 0; i < candidates.size(); ++i) {
      if (!candidates[i].rtt_ms) continue;
      if (!best || *candidates[i].rtt_ms < *candidates[*best].rtt_ms) best = i;
    }

    Rng select_rng(Rng::derive_seed(90002, "trial-" + std::to_string(trial)));
    SelectionDecision d = select_server(candidates, select_rng);

    bool ok;
    if (best) {
      ok = !d.fallback_used && d.chosen == candidates[*best].server &&
           d.min_rtt_ms && *d.min_rtt_ms == *candidates[*best].rtt_ms;
    } else {
      ++fallback_cases;
      bool member = false;
      for (const auto& c : candidates) member |= (c.server == d.chosen);
      ok = d.fallback_used && !d.min_rtt_ms && member;
    }
    if (ok) ++agreements;
  }
  double took = seconds_since(t0);

  Outcome o;
  o.pass = agreements == kTrials && fallback_cases > 0 && took < kBudgetS;
  o.detail = std::to_string(agreements) + "/" + std::to_string(kTrials) +
             " oracle agreements (" + std::to_string(fallback_cases) +
             " all-absent fallbacks), " + fmt(took, 2) + " s < " + fmt(kBudgetS, 0) + " s";
  return o;
}

// ---- criterion 2: Poisson sampler moments ---------------------------------

Outcome criterion_poisson_moments() {
  constexpr int kDraws = 100000;
  constexpr double kBudgetS = 5.0;

  auto t0 = steady::now();
  std::string parts;
  bool pass = true;
  for (double lambda : {30.0, 200.0}) {
    Rng rng(static_cast<uint64_t>(lambda) * 7919 + 17);
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < kDraws; ++i) {
      double x = static_cast<double>(poisson_sample(lambda, rng));
      sum += x;
      sumsq += x * x;
    }
    double mean = sum / kDraws;
    double var = sumsq / kDraws - mean * mean;
    double se3 = 3.0 * std::sqrt(lambda / kDraws);
    bool mean_ok = std::fabs(mean - lambda) <= se3;
    bool var_ok = std::fabs(var - lambda) <= 0.05 * lambda;
    pass = pass && mean_ok && var_ok;
    if (!parts.empty()) parts += "; ";
    parts += "lambda " + fmt(lambda, 0) + ": mean " + fmt(mean, 2) + " (|d|<=" +
             fmt(se3, 2) + "), var " + fmt(var, 2) + " (5% band)";
  }
  double took = seconds_since(t0);
  pass = pass && took < kBudgetS;

  Outcome o;
  o.pass = pass;
  o.detail = parts + ", " + fmt(took, 2) + " s < " + fmt(kBudgetS, 0) + " s";
  return o;
}

// ---- criterion 3: virtual-clock throttle timing ----------------------------

Outcome criterion_throttle_timing() {
  constexpr double kRate = 262144.0;
  constexpr double kExpectedMs = 4000.0;
  constexpr double kQuantumMs = 10.0;

  fs::path dir = work_dir("throttle");
  std::string payload(1024 * 1024, 'x');

  auto timed_run = [&](const fs::path& dest) {
    double elapsed = -1.0;
    VirtualScheduler sched(3);
    sched.spawn("download", [&](ActivityContext& ctx) {
      elapsed = save_and_throttle_download(ctx, payload, dest, kRate);
    });
    sched.run();
    return elapsed;
  };

  double first = timed_run(dir / "a.bin");
  double second = timed_run(dir / "b.bin");

  Outcome o;
  o.pass = std::fabs(first - kExpectedMs) <= kQuantumMs && first == second;
  o.detail = "1 MiB at 262144 B/s took " + fmt(first, 1) + " ms (expect " +
             fmt(kExpectedMs, 0) + " +/- " + fmt(kQuantumMs, 0) +
             "), repeat run identical: " + (first == second ? "yes" : "no");
  return o;
}

// ---- criterion 4: delay mutator bounds and replacement ---------------------

Outcome criterion_mutator_bounds() {
  constexpr int kSteps = 10000;
  constexpr double kBudgetS = 1.0;

  auto t0 = steady::now();
  LinkTable links;
  links.add_link("probe-link", 10.0);
  DelayMutatorConfig cfg;  // defaults: [200, 800] ms
  Rng rng(424242);

  int in_bounds = 0;
  int last_draw = -1;
  for (int i = 0; i < kSteps; ++i) {
    MutationStep step = delay_mutator_step(cfg, links, "probe-link", rng);
    if (step.applied_delay_ms >= 200 && step.applied_delay_ms <= 800) ++in_bounds;
    last_draw = step.applied_delay_ms;
  }
  double final_delay = links.snapshot("probe-link").one_way_delay_ms;
  double took = seconds_since(t0);

  Outcome o;
  o.pass = in_bounds == kSteps && final_delay == static_cast<double>(last_draw) &&
           took < kBudgetS;
  o.detail = std::to_string(in_bounds) + "/" + std::to_string(kSteps) +
             " draws in [200,800] ms, final delay " + fmt(final_delay, 0) +
             " == last draw " + std::to_string(last_draw) + ", " + fmt(took, 2) +
             " s < " + fmt(kBudgetS, 0) + " s";
  return o;
}

// ---- criterion 5: calibrated testbed-4 medians -----------------------------

Outcome criterion_testbed4_medians() {
  constexpr double kBudgetS = 30.0;
  const double kRttLo = 210.0, kRttHi = 230.0;
  const double kCpuLo = 25.0, kCpuHi = 35.0;

  auto t0 = steady::now();
  ExperimentConfig cfg = preset_scenario("testbed-4");
  RunOptions opts;
  opts.quick = true;
  opts.seed_override = 7;
  RunArtifacts run = run_experiment(cfg, work_dir("testbed-4"), opts);
  ConfigStats stats = summarize_config(run.rtt_series, run.cpu_series);
  double took = seconds_since(t0);

  bool rtt_ok = stats.rtt.median >= kRttLo && stats.rtt.median <= kRttHi;
  bool cpu_ok = stats.cpu.median >= kCpuLo && stats.cpu.median <= kCpuHi;

  Outcome o;
  o.pass = rtt_ok && cpu_ok && took < kBudgetS;
  o.detail = "pooled RTT median " + fmt(stats.rtt.median, 1) + " ms in [" +
             fmt(kRttLo, 0) + "," + fmt(kRttHi, 0) + "], CPU median " +
             fmt(stats.cpu.median, 1) + "% in [" + fmt(kCpuLo, 0) + "," +
             fmt(kCpuHi, 0) + "], quick run " + fmt(took, 1) + " s < " +
             fmt(kBudgetS, 0) + " s";
  return o;
}

// ---- criterion 6: scalability trend over 4/8/12 servers --------------------

Outcome criterion_scalability_trend() {
  constexpr double kBudgetS = 120.0;

  auto t0 = steady::now();
  RunOptions opts;
  opts.quick = true;
  opts.seed_override = 7;
  SuiteResult suite = run_suite({"testbed-4", "testbed-8", "testbed-12"},
                                work_dir("suite"), opts);
  double took = seconds_since(t0);

  std::vector<std::string> order = ordered_config_names(suite.report);
  std::string means;
  bool nondecreasing = true;
  double prev = -1.0;
  for (const std::string& name : order) {
    double mean = suite.report.per_config.at(name).rtt_mean_ms;
    if (prev >= 0 && mean < prev) nondecreasing = false;
    prev = mean;
    if (!means.empty()) means += " -> ";
    means += fmt(mean, 1);
  }
  bool increasing = suite.report.rtt_trend == Trend::increasing;

  Outcome o;
  o.pass = nondecreasing && increasing && took < kBudgetS;
  o.detail = "mean RTT " + means + " ms (nondecreasing: " +
             (nondecreasing ? "yes" : "no") +
             "), trend: " + trend_name(suite.report.rtt_trend) + ", " +
             fmt(took, 1) + " s < " + fmt(kBudgetS, 0) + " s";
  return o;
}

// ---- criterion 7: dataset replay with documented fallback ------------------

Outcome run_criterion(int id);  // forward, for the fallback path

std::optional<std::pair<fs::path, fs::path>> dataset_files(const fs::path& dir,
                                                           const std::string& name) {
  std::pair<fs::path, fs::path> nested = {dir / name / "ping_results1000.csv",
                                          dir / name / "cpu_results.csv"};
  if (fs::exists(nested.first) && fs::exists(nested.second)) return nested;
  std::pair<fs::path, fs::path> flat = {dir / (name + "_rtt.csv"),
                                        dir / (name + "_cpu.csv")};
  if (fs::exists(flat.first) && fs::exists(flat.second)) return flat;
  return std::nullopt;
}

Outcome criterion_dataset_replay() {
  const char* env = std::getenv("CDNSIM_DATASET_DIR");
  if (env != nullptr && *env != '\0') {
    fs::path dir(env);
    ConfigDatasets datasets;
    for (const std::string& name : {std::string("testbed-4"), std::string("testbed-8"),
                                    std::string("testbed-12")}) {
      auto files = dataset_files(dir, name);
      if (!files) {
        Outcome o;
        o.detail = "CDNSIM_DATASET_DIR set but files for " + name +
                   " are missing under " + dir.string();
        return o;
      }
      datasets[name] = {load_series_csv(files->first, MetricKind::rtt),
                        load_series_csv(files->second, MetricKind::cpu)};
    }
    TradeoffReport report = tradeoff_report(datasets);
    const ConfigStats& four = report.per_config.at("testbed-4");
    const ConfigStats& twelve = report.per_config.at("testbed-12");
    bool four_ok = four.rtt_mean_ms >= 220.0 && four.rtt_mean_ms <= 245.0;
    bool twelve_ok = twelve.rtt_mean_ms >= 255.0 && twelve.rtt_mean_ms <= 285.0;
    bool iqr_ok = twelve.rtt.q1 >= 230.0 && twelve.rtt.q3 <= 290.0;

    Outcome o;
    o.pass = four_ok && twelve_ok && iqr_ok;
    o.detail = "replayed " + dir.string() + ": 4-server mean " +
               fmt(four.rtt_mean_ms, 1) + " ms in [220,245], 12-server mean " +
               fmt(twelve.rtt_mean_ms, 1) + " ms in [255,285], 12-server IQR [" +
               fmt(twelve.rtt.q1, 1) + "," + fmt(twelve.rtt.q3, 1) +
               "] within [230,290]";
    return o;
  }

  // No published dataset on this machine: the criterion is defined to fall
  // back to the synthetic equivalents (criteria 5 and 6).
  Outcome five = run_criterion(5);
  Outcome six = run_criterion(6);
  Outcome o;
  o.pass = five.pass && six.pass;
  o.detail = std::string("dataset unavailable (CDNSIM_DATASET_DIR unset); ") +
             "fallback to synthetic equivalents: criterion 5 " +
             (five.pass ? "PASS" : "FAIL") + ", criterion 6 " +
             (six.pass ? "PASS" : "FAIL");
  return o;
}

// ---- criterion 8: CSV round-trip fidelity -----------------------------------

Outcome criterion_csv_fidelity() {
  constexpr int kSeriesCount = 100;

  fs::path dir = work_dir("csv");
  Rng rng(55555);
  Timebase tb = Timebase::fixed();
  int identical = 0;
  for (int t = 0; t < kSeriesCount; ++t) {
    MetricSeries s;
    s.metric = (t % 2 == 0) ? MetricKind::rtt : MetricKind::cpu;
    int cols = 1 + static_cast<int>(rng.uniform_u64(6));
    for (int c = 0; c < cols; ++c) s.columns.push_back("s" + std::to_string(c + 1));
    int rows = static_cast<int>(rng.uniform_u64(41));
    for (int r = 0; r < rows; ++r) {
      MetricSeries::Row row;
      row.timestamp = tb.iso8601(r * 250.0);
      for (int c = 0; c < cols; ++c) {
        if (rng.uniform01() < 0.15) {
          row.values.emplace_back(std::nullopt);
        } else {
          double magnitude = std::pow(10.0, static_cast<double>(
                                                rng.uniform_int(-3, 6)));
          row.values.emplace_back(rng.uniform01() * magnitude);
        }
      }
      s.rows.push_back(std::move(row));
    }

    fs::path path = dir / ("series-" + std::to_string(t) + ".csv");
    write_series_csv(s, path);
    if (load_series_csv(path, s.metric) == s) ++identical;
  }

  Outcome o;
  o.pass = identical == kSeriesCount;
  o.detail = std::to_string(identical) + "/" + std::to_string(kSeriesCount) +
             " random series round-tripped byte-exactly (headers, order, N/A)";
  return o;
}

// ---- criterion 9: end-to-end streaming over the gateway --------------------

struct AcceptanceWorld {
  ExperimentConfig cfg;
  Topology topo;
  LinkTable links;
  std::unique_ptr<VirtualNetwork> net;
  std::vector<std::unique_ptr<OriginServer>> origins;
  std::unique_ptr<VirtualFetcher> gateway_fetcher;
  std::unique_ptr<Gateway> gateway;
  Timebase timebase = Timebase::fixed();

  explicit AcceptanceWorld(const ExperimentConfig& config) : cfg(config) {
    topo = build_topology(cfg);
    populate_link_table(topo, cfg, links);
    net = std::make_unique<VirtualNetwork>(links, topo);
    for (const NodeId& server : topo.servers) {
      auto origin = std::make_unique<OriginServer>(server, 0.0);
      origin->provision(make_manifest("default", 10, 4.0, 256 * 1024));
      net->register_handler(server,
                            [o = origin.get()](ActivityContext& ctx, const HttpRequest& r) {
                              return o->handle(ctx, r);
                            });
      origins.push_back(std::move(origin));
    }
    gateway_fetcher = std::make_unique<VirtualFetcher>(*net, topo.gateway);
    gateway = std::make_unique<Gateway>(*gateway_fetcher, topo.servers,
                                        [](const NodeId& s) { return "http://" + s + "/"; },
                                        timebase, nullptr, 0.0);
    net->register_handler(topo.gateway,
                          [g = gateway.get()](ActivityContext& ctx, const HttpRequest& r) {
                            return g->handle(ctx, r);
                          });
  }
};

Outcome criterion_streaming_e2e() {
  fs::path dir = work_dir("e2e");
  for (const char* sub : {"segments", "segments-down", "direct"}) {
    fs::create_directories(dir / sub);
  }
  ExperimentConfig cfg = preset_scenario("testbed-4");

  // Healthy pass: every media segment travels via exactly one 302 + one 200.
  bool chains_ok = true;
  int fetched_healthy = -1;
  int direct_count = -1;
  {
    AcceptanceWorld world(cfg);
    VirtualScheduler sched(901);
    sched.spawn("session", [&](ActivityContext& ctx) {
      VirtualFetcher client(*world.net, world.topo.client);
      for (int i = 0; i < 10; ++i) {
        FetchOutcome out = fetch_with_redirects(
            client, ctx, "http://gateway/cdn/" + segment_name("default", i));
        chains_ok = chains_ok && out.ok &&
                    out.status_chain == std::vector<int>{302, 200};
      }

      StreamSession session;
      session.manifest_url = "http://gateway/manifest/default";
      session.redirect_base = "http://gateway/cdn/";
      session.client_throttle = kUnlimitedRate;
      session.out_dir = dir / "segments";
      StreamReport report = stream(ctx, client, session);
      fetched_healthy = report.segments_fetched;

      direct_count = download_mpd_and_segments(ctx, client,
                                               "http://s1/manifest/default",
                                               kUnlimitedRate, dir / "direct");
    });
    sched.run();
  }

  // Degraded pass: one server down; sessions still complete and its ping
  // column reads N/A in every round.
  int fetched_down = -1;
  bool down_absent = true;
  bool others_present = true;
  {
    AcceptanceWorld world(cfg);
    world.net->set_down("s3", true);
    VirtualScheduler sched(902);
    sched.spawn("session", [&](ActivityContext& ctx) {
      VirtualFetcher client(*world.net, world.topo.client);
      StreamSession session;
      session.manifest_url = "http://gateway/manifest/default";
      session.redirect_base = "http://gateway/cdn/";
      session.client_throttle = kUnlimitedRate;
      session.out_dir = dir / "segments-down";
      StreamReport report = stream(ctx, client, session);
      fetched_down = report.segments_fetched;
    });
    sched.spawn("recorder", [&](ActivityContext& ctx) {
      PingRecorderOptions po;
      po.servers = world.topo.servers;
      po.num_pings = 10;
      po.interval_s = 1.0;
      po.lambda_ms = 0.0;
      po.csv_path = dir / "ping_down.csv";
      MetricSeries series = record_ping_rounds(
          ctx,
          [&](ActivityContext& c, const NodeId& server) {
            return world.gateway->ping_rtt(c, server).rtt_ms;
          },
          po, world.timebase);
      size_t down_col = world.topo.server_index("s3");
      for (const auto& row : series.rows) {
        for (size_t i = 0; i < row.values.size(); ++i) {
          if (i == down_col) down_absent = down_absent && !row.values[i];
          else others_present = others_present && row.values[i].has_value();
        }
      }
    });
    sched.run();
  }

  bool na_in_file = slurp(dir / "ping_down.csv").find("N/A") != std::string::npos;

  Outcome o;
  o.pass = chains_ok && fetched_healthy == 10 && direct_count == 10 &&
           fetched_down == 10 && down_absent && others_present && na_in_file;
  o.detail = std::string("10-segment session: redirect chains 302+200 ") +
             (chains_ok ? "ok" : "BROKEN") + ", fetched " +
             std::to_string(fetched_healthy) + "/10, direct download " +
             std::to_string(direct_count) + "/10; with s3 down: fetched " +
             std::to_string(fetched_down) + "/10, s3 column N/A throughout: " +
             (down_absent && na_in_file ? "yes" : "no");
  return o;
}

// ---- criterion 10: plot byte determinism ------------------------------------

Outcome criterion_plot_determinism() {
  // Fixed synthetic inputs; output bytes depend only on them.
  auto dataset = [](double level, int servers) {
    MetricSeries rtt, cpu;
    rtt.metric = MetricKind::rtt;
    cpu.metric = MetricKind::cpu;
    Timebase tb = Timebase::fixed();
    for (int c = 0; c < servers; ++c) {
      rtt.columns.push_back("s" + std::to_string(c + 1));
      cpu.columns.push_back("s" + std::to_string(c + 1));
    }
    for (int r = 0; r < 24; ++r) {
      MetricSeries::Row rr, cr;
      rr.timestamp = tb.iso8601(r * 1000.0);
      cr.timestamp = rr.timestamp;
      for (int c = 0; c < servers; ++c) {
        if (r == 7 && c == 0) {
          rr.values.emplace_back(std::nullopt);
        } else {
          rr.values.emplace_back(level + (r % 5) * 1.75 + c * 0.375);
        }
        cr.values.emplace_back(30.0 + (r % 3) * 0.5);
      }
      rtt.rows.push_back(std::move(rr));
      cpu.rows.push_back(std::move(cr));
    }
    return std::make_pair(std::move(rtt), std::move(cpu));
  };

  ConfigDatasets datasets;
  datasets["testbed-4"] = dataset(220.0, 4);
  datasets["testbed-8"] = dataset(232.0, 8);
  TradeoffReport report = tradeoff_report(datasets);

  fs::path dir1 = work_dir("plots-1");
  fs::path dir2 = work_dir("plots-2");
  std::vector<fs::path> first = render_plots(report, datasets, dir1);
  std::vector<fs::path> second = render_plots(report, datasets, dir2);

  int identical = 0;
  for (size_t i = 0; i < first.size() && i < second.size(); ++i) {
    if (slurp(first[i]) == slurp(second[i])) ++identical;
  }

  Outcome o;
  o.pass = first.size() == 8 && second.size() == 8 && identical == 8;
  o.detail = std::to_string(identical) + "/8 figure files byte-identical across " +
             "renders (decimal formatting is locale- and platform-independent)";
  return o;
}

// ---- driver -----------------------------------------------------------------

struct Criterion {
  int id;
  const char* name;
  Outcome (*fn)();
};

const Criterion kCriteria[] = {
    {1, "selection oracle", criterion_selection_oracle},
    {2, "poisson moments", criterion_poisson_moments},
    {3, "throttle timing", criterion_throttle_timing},
    {4, "delay mutator bounds", criterion_mutator_bounds},
    {5, "testbed-4 calibrated medians", criterion_testbed4_medians},
    {6, "scalability trend 4/8/12", criterion_scalability_trend},
    {7, "dataset replay", criterion_dataset_replay},
    {8, "csv fidelity", criterion_csv_fidelity},
    {9, "end-to-end streaming", criterion_streaming_e2e},
    {10, "plot determinism", criterion_plot_determinism},
};

std::map<int, Outcome> g_memo;

Outcome run_criterion(int id) {
  auto it = g_memo.find(id);
  if (it != g_memo.end()) return it->second;
  for (const Criterion& c : kCriteria) {
    if (c.id != id) continue;
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    g_memo[id] = o;
    return o;
  }
  Outcome o;
  o.detail = "unknown criterion";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::optional<int> only;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else if (arg == "--help" || arg == "-h") {
      std::cout << "usage: acceptance [--criterion N]\n"
                   "Runs the ten acceptance criteria (or just one) and prints\n"
                   "one PASS/FAIL line per criterion.\n";
      return 0;
    } else {
      std::cerr << "unknown argument: " << arg << "\n";
      return 2;
    }
  }
  if (only && (*only < 1 || *only > 10)) {
    std::cerr << "criterion must be 1..10\n";
    return 2;
  }

  int failures = 0;
  int ran = 0;
  for (const Criterion& c : kCriteria) {
    if (only && c.id != *only) continue;
    auto t0 = steady::now();
    Outcome o = run_criterion(c.id);
    double took = seconds_since(t0);
    ++ran;
    if (!o.pass) ++failures;
    std::cout << "criterion " << c.id << " [" << c.name << "]: "
              << (o.pass ? "PASS" : "FAIL") << " (" << fmt(took, 2) << " s) - "
              << o.detail << "\n";
  }
  std::cout << (ran - failures) << "/" << ran << " criteria passed\n";
  return failures == 0 ? 0 : 1;
}
