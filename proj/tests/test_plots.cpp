#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "cdnsim/error.hpp"
#include "cdnsim/svg_plots.hpp"
#include "cdnsim/util.hpp"

using namespace cdnsim;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "cdnsim-tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

MetricSeries series_of(std::vector<std::string> columns,
                       std::vector<std::vector<std::optional<double>>> rows,
                       MetricKind kind) {
  MetricSeries s;
  s.metric = kind;
  s.columns = std::move(columns);
  Timebase tb = Timebase::fixed();
  for (size_t i = 0; i < rows.size(); ++i) {
    s.rows.push_back({tb.iso8601(static_cast<double>(i) * 1000.0), std::move(rows[i])});
  }
  return s;
}

// Two configs: "alpha-2" (2 servers, one 500 ms outlier and one dead round),
// "beta-4" (4 servers, its s3 column silent throughout).
ConfigDatasets sample_datasets() {
  ConfigDatasets datasets;
  datasets["alpha-2"].first = series_of(
      {"s1", "s2"},
      {{100.0, 102.0},
       {98.0, 101.0},
       {99.0, 100.0},
       {500.0, 103.0},
       {101.0, 99.0},
       {std::nullopt, std::nullopt},
       {100.0, 102.0},
       {103.0, 98.0}},
      MetricKind::rtt);
  datasets["alpha-2"].second = series_of(
      {"s1", "s2"},
      {{30.0, 31.0}, {29.0, 30.0}, {30.0, 30.0}, {31.0, 29.0},
       {30.0, 30.0}, {29.0, 31.0}, {30.0, 30.0}, {31.0, 30.0}},
      MetricKind::cpu);
  std::vector<std::vector<std::optional<double>>> beta_rtt, beta_cpu;
  for (int r = 0; r < 8; ++r) {
    beta_rtt.push_back({200.0 + r, 201.0, 199.0, 202.0});
    beta_cpu.push_back({30.0, 31.0, std::nullopt, 29.0});
  }
  datasets["beta-4"].first =
      series_of({"s1", "s2", "s3", "s4"}, std::move(beta_rtt), MetricKind::rtt);
  datasets["beta-4"].second =
      series_of({"s1", "s2", "s3", "s4"}, std::move(beta_cpu), MetricKind::cpu);
  return datasets;
}

}  // namespace

TEST_CASE("render_plots writes the four-figure set with companion data") {
  ConfigDatasets datasets = sample_datasets();
  TradeoffReport report = tradeoff_report(datasets);
  fs::path dir = scratch_dir("plots-basic");

  std::vector<fs::path> written = render_plots(report, datasets, dir);
  std::vector<fs::path> expected = {
      dir / "rtt_box.svg",        dir / "rtt_box.csv",
      dir / "rtt_timeseries.svg", dir / "rtt_timeseries.csv",
      dir / "cpu_box.svg",        dir / "cpu_box.csv",
      dir / "cpu_timeseries.svg", dir / "cpu_timeseries.csv"};
  CHECK(written == expected);
  for (const fs::path& p : written) {
    CHECK(fs::exists(p));
    CHECK(fs::file_size(p) > 0);
  }

  for (const char* name : {"rtt_box.svg", "rtt_timeseries.svg", "cpu_box.svg",
                           "cpu_timeseries.svg"}) {
    std::string svg = slurp(dir / name);
    CHECK(svg.rfind("<?xml version=\"1.0\"", 0) == 0);
    CHECK(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\"") != std::string::npos);
    CHECK(svg.substr(svg.size() - 7) == "</svg>\n");
  }

  std::string box = slurp(dir / "rtt_box.csv");
  CHECK(box.rfind("config,stat,value\n", 0) == 0);
  CHECK(box.find("alpha-2,n,14\n") != std::string::npos);
  CHECK(box.find("alpha-2,missing_count,2\n") != std::string::npos);
  CHECK(box.find("alpha-2,outlier,500\n") != std::string::npos);
  CHECK(box.find("beta-4,median,") != std::string::npos);
  // trend order: fewer servers first
  CHECK(box.find("alpha-2,n,") < box.find("beta-4,n,"));

  std::string trace = slurp(dir / "rtt_timeseries.csv");
  CHECK(trace.rfind("config,timestamp,value\n", 0) == 0);
  CHECK(trace.find("alpha-2,2025-01-01T00:00:00.000Z,101\n") != std::string::npos);
  CHECK(trace.find("alpha-2,2025-01-01T00:00:05.000Z,N/A\n") != std::string::npos);
  CHECK(trace.find("beta-4,2025-01-01T00:00:00.000Z,200.5\n") != std::string::npos);

  std::string ts_svg = slurp(dir / "rtt_timeseries.svg");
  CHECK(ts_svg.find("<polyline") != std::string::npos);
  CHECK(ts_svg.find("stroke-dasharray=\"6 4\"") != std::string::npos);  // mean line
  CHECK(ts_svg.find("alpha-2 (mean ") != std::string::npos);
}

TEST_CASE("plot output bytes are a pure function of the inputs") {
  ConfigDatasets datasets = sample_datasets();
  TradeoffReport report = tradeoff_report(datasets);
  fs::path dir1 = scratch_dir("plots-det-1");
  fs::path dir2 = scratch_dir("plots-det-2");

  std::vector<fs::path> first = render_plots(report, datasets, dir1);
  std::vector<fs::path> second = render_plots(report, datasets, dir2);
  REQUIRE(first.size() == second.size());
  for (size_t i = 0; i < first.size(); ++i) {
    CHECK(slurp(first[i]) == slurp(second[i]));
  }
}

TEST_CASE("per-server boxes split columns and flag silent servers") {
  ConfigDatasets datasets = sample_datasets();
  TradeoffReport report = tradeoff_report(datasets);
  fs::path dir = scratch_dir("plots-per-server");

  PlotOptions options;
  options.per_server = true;
  render_plots(report, datasets, dir, options);

  std::string rtt_box = slurp(dir / "rtt_box.csv");
  CHECK(rtt_box.find("alpha-2/s1,") != std::string::npos);
  CHECK(rtt_box.find("alpha-2/s2,") != std::string::npos);
  CHECK(rtt_box.find("beta-4/s4,") != std::string::npos);

  std::string cpu_box = slurp(dir / "cpu_box.csv");
  CHECK(cpu_box.find("beta-4/s3,unresponsive,1\n") != std::string::npos);
  CHECK(cpu_box.find("beta-4/s3,median,") == std::string::npos);

  std::string cpu_svg = slurp(dir / "cpu_box.svg");
  CHECK(cpu_svg.find(">unresponsive</text>") != std::string::npos);
}

TEST_CASE("a config with no samples at all renders as unresponsive") {
  // render_plots only needs the report for ordering, so a hand-built report
  // lets a completely silent dataset through.
  ConfigDatasets datasets;
  datasets["dead-1"].first =
      series_of({"s1"}, {{std::nullopt}, {std::nullopt}}, MetricKind::rtt);
  datasets["dead-1"].second =
      series_of({"s1"}, {{std::nullopt}, {std::nullopt}}, MetricKind::cpu);
  TradeoffReport report;
  report.per_config["dead-1"].server_count = 1;

  fs::path dir = scratch_dir("plots-dead");
  std::vector<fs::path> written = render_plots(report, datasets, dir);
  CHECK(written.size() == 8);

  std::string box = slurp(dir / "rtt_box.csv");
  CHECK(box == "config,stat,value\ndead-1,unresponsive,1\n");
  std::string trace = slurp(dir / "rtt_timeseries.csv");
  CHECK(trace.find("dead-1,2025-01-01T00:00:00.000Z,N/A\n") != std::string::npos);
}

TEST_CASE("plot rendering rejects bad destinations and empty reports") {
  ConfigDatasets datasets = sample_datasets();
  TradeoffReport report = tradeoff_report(datasets);
  CHECK_THROWS_AS(render_plots(report, datasets, fs::path{}), Error);
  CHECK_THROWS_AS(render_plots(TradeoffReport{}, datasets,
                               scratch_dir("plots-empty-report")),
                  Error);
  try {
    render_plots(TradeoffReport{}, datasets, scratch_dir("plots-empty-report"));
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == "insufficient-configs");
  }
}
