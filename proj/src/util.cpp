#include "cdnsim/util.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>

#include "cdnsim/error.hpp"

namespace cdnsim {

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string format_fixed(double value, int digits) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value,
                           std::chars_format::fixed, digits);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  if (text.empty()) {
    throw Error("parse-error", "empty numeric field");
  }
  double value = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error("parse-error", "bad numeric field '" + std::string(text) + "'");
  }
  return value;
}

uint64_t fnv1a64(std::string_view text) {
  return fnv1a64(reinterpret_cast<const uint8_t*>(text.data()), text.size());
}

uint64_t fnv1a64(const uint8_t* data, size_t len) {
  uint64_t h = 14695981039346656037ull;
  for (size_t i = 0; i < len; ++i) {
    h ^= data[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::string Timebase::iso8601(double sim_now_ms) const {
  int64_t total_ms = epoch_unix_ms + static_cast<int64_t>(std::llround(sim_now_ms));
  time_t secs = static_cast<time_t>(total_ms / 1000);
  int ms = static_cast<int>(total_ms % 1000);
  if (ms < 0) {
    ms += 1000;
    secs -= 1;
  }
  struct tm tm_utc;
  gmtime_r(&secs, &tm_utc);
  char buf[80];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ",
                tm_utc.tm_year + 1900, tm_utc.tm_mon + 1, tm_utc.tm_mday,
                tm_utc.tm_hour, tm_utc.tm_min, tm_utc.tm_sec, ms);
  return std::string(buf);
}

Timebase Timebase::fixed() { return Timebase{}; }

Timebase Timebase::from_system_now() {
  using namespace std::chrono;
  Timebase tb;
  tb.epoch_unix_ms =
      duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
  return tb;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(text.substr(start));
      break;
    }
    out.emplace_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

}  // namespace cdnsim
