#pragma once

#include <string>
#include <utility>
#include <vector>

namespace cdnsim {

// One sample line of the text exposition format. Label order is preserved on
// render so documents are byte-deterministic.
struct CounterSample {
  std::string name;
  std::vector<std::pair<std::string, std::string>> labels;
  double value = 0.0;
};

// Renders "# TYPE <name> counter" headers (once per metric name, in first-seen
// order) followed by the sample lines.
std::string render_prometheus_text(const std::vector<CounterSample>& samples);

// Parses the subset emitted above: comment lines ignored, one sample per line.
// Throws Error("parse-error") on malformed lines.
std::vector<CounterSample> parse_prometheus_text(const std::string& text);

}  // namespace cdnsim
