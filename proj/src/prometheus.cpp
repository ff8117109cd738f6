#include "cdnsim/prometheus.hpp"

#include <cctype>
#include <set>

#include "cdnsim/error.hpp"
#include "cdnsim/util.hpp"

namespace cdnsim {

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw Error("parse-error", "prometheus: " + what);
}

bool valid_name_char(char c, bool first) {
  if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':') return true;
  return !first && std::isdigit(static_cast<unsigned char>(c));
}

std::string escape_label(const std::string& v) {
  std::string out;
  out.reserve(v.size());
  for (char c : v) {
    if (c == '\\' || c == '"') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out;
}

}  // namespace

std::string render_prometheus_text(const std::vector<CounterSample>& samples) {
  std::string out;
  std::set<std::string> typed;
  for (const CounterSample& s : samples) {
    if (typed.insert(s.name).second) {
      out += "# TYPE " + s.name + " counter\n";
    }
    out += s.name;
    if (!s.labels.empty()) {
      out += '{';
      bool first = true;
      for (const auto& [k, v] : s.labels) {
        if (!first) out += ',';
        first = false;
        out += k + "=\"" + escape_label(v) + "\"";
      }
      out += '}';
    }
    out += ' ';
    out += format_double(s.value);
    out += '\n';
  }
  return out;
}

std::vector<CounterSample> parse_prometheus_text(const std::string& text) {
  std::vector<CounterSample> samples;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    std::string line = text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
    pos = eol == std::string::npos ? text.size() : eol + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();

    size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size() || line[i] == '#') continue;

    CounterSample s;
    size_t start = i;
    while (i < line.size() && valid_name_char(line[i], i == start)) ++i;
    s.name = line.substr(start, i - start);
    if (s.name.empty()) fail("metric name expected in line: " + line);

    if (i < line.size() && line[i] == '{') {
      ++i;
      while (true) {
        if (i >= line.size()) fail("unterminated label set: " + line);
        if (line[i] == '}') {
          ++i;
          break;
        }
        size_t kstart = i;
        while (i < line.size() && valid_name_char(line[i], i == kstart)) ++i;
        std::string key = line.substr(kstart, i - kstart);
        if (key.empty()) fail("label name expected: " + line);
        if (i >= line.size() || line[i] != '=') fail("expected '=' after label name");
        ++i;
        if (i >= line.size() || line[i] != '"') fail("label value must be quoted");
        ++i;
        std::string value;
        while (i < line.size() && line[i] != '"') {
          char c = line[i];
          if (c == '\\') {
            ++i;
            if (i >= line.size()) fail("dangling escape in label value");
            char e = line[i];
            if (e == 'n') c = '\n';
            else if (e == '\\' || e == '"') c = e;
            else fail("unknown escape in label value");
          }
          value += c;
          ++i;
        }
        if (i >= line.size()) fail("unterminated label value");
        ++i;  // closing quote
        s.labels.emplace_back(std::move(key), std::move(value));
        if (i < line.size() && line[i] == ',') ++i;
      }
    }

    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    size_t vstart = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (vstart == i) fail("sample without a value: " + line);
    s.value = parse_double(line.substr(vstart, i - vstart));
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i != line.size()) fail("trailing content after value: " + line);
    samples.push_back(std::move(s));
  }
  return samples;
}

}  // namespace cdnsim
