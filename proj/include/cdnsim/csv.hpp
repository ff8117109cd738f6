#pragma once

#include <fstream>
#include <mutex>
#include <string>
#include <vector>

namespace cdnsim {

// Comma-separated, "\n" line endings, no quoting (fields never contain
// commas in this project's dialect). Rows are flushed as written so a
// crashed run still leaves usable partial output.
class CsvWriter {
public:
  CsvWriter() = default;
  explicit CsvWriter(const std::string& path) { open(path); }

  void open(const std::string& path);
  bool is_open() const { return out_.is_open(); }
  const std::string& path() const { return path_; }

  void write_row(const std::vector<std::string>& fields);
  void close();

private:
  std::ofstream out_;
  std::string path_;
  std::mutex mu_;
};

// Whole-file strict reader: splits on commas, tolerates a trailing "\r" per
// line and a missing final newline, rejects nothing else. Row/column checks
// belong to the callers that know the schema.
std::vector<std::vector<std::string>> read_csv_rows(const std::string& path);

}  // namespace cdnsim
