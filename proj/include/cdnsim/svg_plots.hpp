#pragma once

#include <filesystem>
#include <vector>

#include "cdnsim/analysis.hpp"

namespace cdnsim {

struct PlotOptions {
  // One box per (config, server) column instead of one pooled box per config.
  bool per_server = false;
};

// Emits the four-figure set into out_dir: RTT and CPU box plots plus RTT and
// CPU time series (per-round mean trace with a horizontal mean line per
// config), each as a standalone SVG with a companion data CSV. Output bytes
// are a pure function of the inputs. Returns the paths written.
// Throws Error("io-error") when out_dir is empty or not creatable.
std::vector<std::filesystem::path> render_plots(const TradeoffReport& report,
                                                const ConfigDatasets& datasets,
                                                const std::filesystem::path& out_dir,
                                                const PlotOptions& options = {});

}  // namespace cdnsim
