#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cdnsim {

// Shortest round-trip decimal representation (std::to_chars). Used for every
// float we serialize so emitted bytes are identical across platforms and a
// parse of the output recovers the exact value.
std::string format_double(double value);

// strtod-style parse of a full string; throws Error("parse-error") on
// trailing garbage or empty input.
double parse_double(std::string_view text);

// Fixed-precision decimal (std::to_chars), locale-independent.
std::string format_fixed(double value, int digits);

uint64_t fnv1a64(std::string_view text);
uint64_t fnv1a64(const uint8_t* data, size_t len);

// Maps simulation time onto ISO-8601 UTC strings with millisecond precision.
// Virtual runs anchor at a fixed epoch so output bytes do not depend on the
// wall date; wall runs anchor at the process start.
struct Timebase {
  int64_t epoch_unix_ms = 1735689600000;  // 2025-01-01T00:00:00.000Z

  std::string iso8601(double sim_now_ms) const;

  static Timebase fixed();
  static Timebase from_system_now();
};

std::vector<std::string> split(std::string_view text, char sep);

}  // namespace cdnsim
