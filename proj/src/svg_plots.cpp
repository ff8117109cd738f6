#include "cdnsim/svg_plots.hpp"

#include <algorithm>
#include <fstream>

#include "cdnsim/csv.hpp"
#include "cdnsim/error.hpp"
#include "cdnsim/util.hpp"

namespace cdnsim {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 30.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 70.0;

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c",
                                "#d62728", "#9467bd", "#8c564b"};
constexpr size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string num(double v) { return format_fixed(v, 2); }

// Maps a data value onto the y pixel range (top = hi).
struct YScale {
  double lo = 0.0, hi = 1.0;

  void expand(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (hi <= lo) hi = lo + 1.0;
    double pad = (hi - lo) * 0.05;
    lo -= pad;
    hi += pad;
  }
  double y(double v) const {
    return kHeight - kBottom - (v - lo) / (hi - lo) * (kHeight - kTop - kBottom);
  }
};

std::string svg_header(const std::string& title) {
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         num(kWidth) + "\" height=\"" + num(kHeight) + "\" viewBox=\"0 0 " +
         num(kWidth) + " " + num(kHeight) + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" +
         num(kHeight) + "\" fill=\"#ffffff\"/>\n";
  out += "<text x=\"" + num(kWidth / 2) +
         "\" y=\"28\" font-family=\"sans-serif\" font-size=\"18\" "
         "text-anchor=\"middle\">" + title + "</text>\n";
  return out;
}

std::string axes_and_ticks(const YScale& scale, const std::string& y_label) {
  std::string out;
  out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" +
         num(kLeft) + "\" y2=\"" + num(kHeight - kBottom) +
         "\" stroke=\"#000000\"/>\n";
  out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kHeight - kBottom) +
         "\" x2=\"" + num(kWidth - kRight) + "\" y2=\"" + num(kHeight - kBottom) +
         "\" stroke=\"#000000\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    double v = scale.lo + (scale.hi - scale.lo) * i / 5.0;
    double y = scale.y(v);
    out += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(y) + "\" x2=\"" +
           num(kLeft) + "\" y2=\"" + num(y) + "\" stroke=\"#000000\"/>\n";
    out += "<text x=\"" + num(kLeft - 9) + "\" y=\"" + num(y + 4) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" +
           format_fixed(v, 1) + "</text>\n";
  }
  out += "<text x=\"18\" y=\"" + num((kTop + kHeight - kBottom) / 2) +
         "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 18 " + num((kTop + kHeight - kBottom) / 2) +
         ")\">" + y_label + "</text>\n";
  return out;
}

struct BoxEntry {
  std::string label;
  bool unresponsive = false;  // column had no present values
  BoxStats stats;             // valid when !unresponsive
};

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("io-error", "cannot open " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw Error("io-error", "write failed for " + path.string());
}

std::string render_box_svg(const std::string& title, const std::string& y_label,
                           const std::vector<BoxEntry>& entries) {
  YScale scale;
  bool seeded = false;
  for (const BoxEntry& e : entries) {
    if (e.unresponsive) continue;
    if (!seeded) {
      scale.lo = scale.hi = e.stats.median;
      seeded = true;
    }
    scale.expand(e.stats.whisker_low);
    scale.expand(e.stats.whisker_high);
    for (double v : e.stats.outliers) scale.expand(v);
  }
  if (!seeded) scale = YScale{0.0, 1.0};
  scale.finish();

  std::string out = svg_header(title);
  out += axes_and_ticks(scale, y_label);

  double plot_w = kWidth - kLeft - kRight;
  double slot = plot_w / static_cast<double>(entries.size());
  double box_w = std::min(60.0, slot * 0.5);

  for (size_t i = 0; i < entries.size(); ++i) {
    const BoxEntry& e = entries[i];
    double cx = kLeft + slot * (static_cast<double>(i) + 0.5);
    const char* color = kPalette[i % kPaletteSize];
    out += "<text x=\"" + num(cx) + "\" y=\"" + num(kHeight - kBottom + 20) +
           "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" +
           e.label + "</text>\n";
    if (e.unresponsive) {
      double cy = (kTop + kHeight - kBottom) / 2;
      out += "<text x=\"" + num(cx) + "\" y=\"" + num(cy) +
             "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
             "fill=\"#d62728\">unresponsive</text>\n";
      out += "<line x1=\"" + num(cx - box_w / 2) + "\" y1=\"" + num(cy + 14) +
             "\" x2=\"" + num(cx + box_w / 2) + "\" y2=\"" + num(cy + 14) +
             "\" stroke=\"#d62728\" stroke-dasharray=\"4 3\"/>\n";
      continue;
    }
    const BoxStats& b = e.stats;
    double yq1 = scale.y(b.q1), yq3 = scale.y(b.q3), ymed = scale.y(b.median);
    double ylo = scale.y(b.whisker_low), yhi = scale.y(b.whisker_high);
    // whisker stems and caps
    out += "<line x1=\"" + num(cx) + "\" y1=\"" + num(yq3) + "\" x2=\"" + num(cx) +
           "\" y2=\"" + num(yhi) + "\" stroke=\"#000000\"/>\n";
    out += "<line x1=\"" + num(cx) + "\" y1=\"" + num(yq1) + "\" x2=\"" + num(cx) +
           "\" y2=\"" + num(ylo) + "\" stroke=\"#000000\"/>\n";
    out += "<line x1=\"" + num(cx - box_w / 4) + "\" y1=\"" + num(yhi) + "\" x2=\"" +
           num(cx + box_w / 4) + "\" y2=\"" + num(yhi) + "\" stroke=\"#000000\"/>\n";
    out += "<line x1=\"" + num(cx - box_w / 4) + "\" y1=\"" + num(ylo) + "\" x2=\"" +
           num(cx + box_w / 4) + "\" y2=\"" + num(ylo) + "\" stroke=\"#000000\"/>\n";
    // box and median
    out += "<rect x=\"" + num(cx - box_w / 2) + "\" y=\"" + num(yq3) + "\" width=\"" +
           num(box_w) + "\" height=\"" + num(yq1 - yq3) + "\" fill=\"" + color +
           "\" fill-opacity=\"0.35\" stroke=\"" + color + "\"/>\n";
    out += "<line x1=\"" + num(cx - box_w / 2) + "\" y1=\"" + num(ymed) + "\" x2=\"" +
           num(cx + box_w / 2) + "\" y2=\"" + num(ymed) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    for (double v : b.outliers) {
      out += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(scale.y(v)) +
             "\" r=\"2.5\" fill=\"none\" stroke=\"" + color + "\"/>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

struct Trace {
  std::string label;
  std::vector<std::optional<double>> values;  // one per round
  double mean = 0.0;
  bool has_mean = false;
};

std::string render_timeseries_svg(const std::string& title, const std::string& y_label,
                                  const std::vector<Trace>& traces) {
  YScale scale;
  bool seeded = false;
  size_t max_rounds = 1;
  for (const Trace& t : traces) {
    max_rounds = std::max(max_rounds, t.values.size());
    for (const auto& v : t.values) {
      if (!v) continue;
      if (!seeded) {
        scale.lo = scale.hi = *v;
        seeded = true;
      }
      scale.expand(*v);
    }
    if (t.has_mean) {
      if (!seeded) {
        scale.lo = scale.hi = t.mean;
        seeded = true;
      }
      scale.expand(t.mean);
    }
  }
  if (!seeded) scale = YScale{0.0, 1.0};
  scale.finish();

  std::string out = svg_header(title);
  out += axes_and_ticks(scale, y_label);
  out += "<text x=\"" + num((kLeft + kWidth - kRight) / 2) + "\" y=\"" +
         num(kHeight - 24) +
         "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">"
         "round</text>\n";

  double plot_w = kWidth - kLeft - kRight;
  auto x_of = [&](size_t i) {
    if (max_rounds == 1) return kLeft + plot_w / 2;
    return kLeft + plot_w * static_cast<double>(i) / static_cast<double>(max_rounds - 1);
  };

  for (size_t ti = 0; ti < traces.size(); ++ti) {
    const Trace& t = traces[ti];
    const char* color = kPalette[ti % kPaletteSize];
    std::string points;
    auto flush_polyline = [&]() {
      if (points.empty()) return;
      out += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
             "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
      points.clear();
    };
    for (size_t i = 0; i < t.values.size(); ++i) {
      if (!t.values[i]) {
        flush_polyline();
        continue;
      }
      if (!points.empty()) points += ' ';
      points += num(x_of(i)) + "," + num(scale.y(*t.values[i]));
    }
    flush_polyline();
    if (t.has_mean) {
      out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(scale.y(t.mean)) +
             "\" x2=\"" + num(kWidth - kRight) + "\" y2=\"" + num(scale.y(t.mean)) +
             "\" stroke=\"" + color + "\" stroke-dasharray=\"6 4\"/>\n";
    }
    // legend entry
    double ly = kTop + 16.0 * static_cast<double>(ti);
    out += "<rect x=\"" + num(kWidth - kRight - 150) + "\" y=\"" + num(ly) +
           "\" width=\"10\" height=\"10\" fill=\"" + color + "\"/>\n";
    out += "<text x=\"" + num(kWidth - kRight - 136) + "\" y=\"" + num(ly + 9) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + t.label +
           (t.has_mean ? " (mean " + format_fixed(t.mean, 1) + ")" : "") +
           "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

void write_box_csv(const std::filesystem::path& path,
                   const std::vector<BoxEntry>& entries) {
  CsvWriter writer(path.string());
  writer.write_row({"config", "stat", "value"});
  for (const BoxEntry& e : entries) {
    if (e.unresponsive) {
      writer.write_row({e.label, "unresponsive", "1"});
      continue;
    }
    const BoxStats& b = e.stats;
    writer.write_row({e.label, "n", std::to_string(b.n)});
    writer.write_row({e.label, "median", format_double(b.median)});
    writer.write_row({e.label, "q1", format_double(b.q1)});
    writer.write_row({e.label, "q3", format_double(b.q3)});
    writer.write_row({e.label, "iqr", format_double(b.iqr)});
    writer.write_row({e.label, "whisker_low", format_double(b.whisker_low)});
    writer.write_row({e.label, "whisker_high", format_double(b.whisker_high)});
    writer.write_row({e.label, "mean", format_double(b.mean)});
    writer.write_row({e.label, "missing_count", std::to_string(b.missing_count)});
    for (double v : b.outliers) writer.write_row({e.label, "outlier", format_double(v)});
  }
}

struct TimeseriesRowSource {
  std::string config;
  const MetricSeries* series;
};

// Per-round mean over present columns; absent when the whole row is absent.
std::vector<std::optional<double>> row_means(const MetricSeries& series) {
  std::vector<std::optional<double>> out;
  out.reserve(series.rows.size());
  for (const auto& row : series.rows) {
    double sum = 0.0;
    int n = 0;
    for (const auto& v : row.values) {
      if (v) {
        sum += *v;
        ++n;
      }
    }
    if (n > 0) out.emplace_back(sum / n);
    else out.emplace_back(std::nullopt);
  }
  return out;
}

void write_trace_csv(const std::filesystem::path& path,
                     const std::vector<TimeseriesRowSource>& sources) {
  CsvWriter writer(path.string());
  writer.write_row({"config", "timestamp", "value"});
  for (const TimeseriesRowSource& src : sources) {
    std::vector<std::optional<double>> means = row_means(*src.series);
    for (size_t i = 0; i < src.series->rows.size(); ++i) {
      writer.write_row({src.config, src.series->rows[i].timestamp,
                        means[i] ? format_double(*means[i]) : "N/A"});
    }
  }
}

std::vector<BoxEntry> box_entries(const std::vector<std::string>& order,
                                  const ConfigDatasets& datasets, bool cpu,
                                  bool per_server) {
  std::vector<BoxEntry> entries;
  for (const std::string& name : order) {
    const MetricSeries& series =
        cpu ? datasets.at(name).second : datasets.at(name).first;
    if (!per_server) {
      std::vector<std::optional<double>> pooled;
      for (const auto& row : series.rows) {
        pooled.insert(pooled.end(), row.values.begin(), row.values.end());
      }
      BoxEntry e;
      e.label = name;
      bool any = std::any_of(pooled.begin(), pooled.end(),
                             [](const auto& v) { return v.has_value(); });
      if (any) e.stats = summarize(pooled);
      else e.unresponsive = true;
      entries.push_back(std::move(e));
      continue;
    }
    for (size_t c = 0; c < series.columns.size(); ++c) {
      std::vector<std::optional<double>> column;
      column.reserve(series.rows.size());
      for (const auto& row : series.rows) column.push_back(row.values[c]);
      BoxEntry e;
      e.label = name + "/" + series.columns[c];
      bool any = std::any_of(column.begin(), column.end(),
                             [](const auto& v) { return v.has_value(); });
      if (any) e.stats = summarize(column);
      else e.unresponsive = true;
      entries.push_back(std::move(e));
    }
  }
  return entries;
}

}  // namespace

std::vector<std::filesystem::path> render_plots(const TradeoffReport& report,
                                                const ConfigDatasets& datasets,
                                                const std::filesystem::path& out_dir,
                                                const PlotOptions& options) {
  if (out_dir.empty()) throw Error("io-error", "output directory path is empty");
  if (report.per_config.empty()) {
    throw Error("insufficient-configs", "nothing to render");
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("io-error", "cannot create " + out_dir.string());

  std::vector<std::string> order = ordered_config_names(report);

  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::filesystem::path& p) { written.push_back(p); };

  for (bool cpu : {false, true}) {
    const std::string metric = cpu ? "cpu" : "rtt";
    const std::string unit = cpu ? "CPU utilization (%)" : "RTT (ms)";

    std::vector<BoxEntry> entries =
        box_entries(order, datasets, cpu, options.per_server);
    std::string box_title =
        (cpu ? std::string("CPU utilization distribution") : std::string("RTT distribution")) +
        (options.per_server ? " per server" : " per configuration");
    std::filesystem::path box_svg = out_dir / (metric + "_box.svg");
    write_text_file(box_svg, render_box_svg(box_title, unit, entries));
    emit(box_svg);
    std::filesystem::path box_csv = out_dir / (metric + "_box.csv");
    write_box_csv(box_csv, entries);
    emit(box_csv);

    std::vector<Trace> traces;
    std::vector<TimeseriesRowSource> sources;
    for (const std::string& name : order) {
      const MetricSeries& series =
          cpu ? datasets.at(name).second : datasets.at(name).first;
      Trace t;
      t.label = name;
      t.values = row_means(series);
      double sum = 0.0;
      int n = 0;
      for (const auto& v : t.values) {
        if (v) {
          sum += *v;
          ++n;
        }
      }
      if (n > 0) {
        t.mean = sum / n;
        t.has_mean = true;
      }
      traces.push_back(std::move(t));
      sources.push_back(TimeseriesRowSource{name, &series});
    }
    std::string ts_title = cpu ? "CPU utilization over rounds with mean reference"
                               : "RTT over rounds with mean reference";
    std::filesystem::path ts_svg = out_dir / (metric + "_timeseries.svg");
    write_text_file(ts_svg, render_timeseries_svg(ts_title, unit, traces));
    emit(ts_svg);
    std::filesystem::path ts_csv = out_dir / (metric + "_timeseries.csv");
    write_trace_csv(ts_csv, sources);
    emit(ts_csv);
  }
  return written;
}

}  // namespace cdnsim
