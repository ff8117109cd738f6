#include "cdnsim/csv.hpp"

#include <sstream>

#include "cdnsim/error.hpp"
#include "cdnsim/util.hpp"

namespace cdnsim {

void CsvWriter::open(const std::string& path) {
  std::lock_guard<std::mutex> lk(mu_);
  out_.open(path, std::ios::binary | std::ios::trunc);
  if (!out_) {
    throw Error("io-error", "cannot open '" + path + "' for writing");
  }
  path_ = path;
}

void CsvWriter::write_row(const std::vector<std::string>& fields) {
  std::lock_guard<std::mutex> lk(mu_);
  if (!out_.is_open()) {
    throw Error("io-error", "CSV writer is not open");
  }
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << fields[i];
  }
  out_ << '\n';
  out_.flush();
  if (!out_) {
    throw Error("io-error", "write failed for '" + path_ + "'");
  }
}

void CsvWriter::close() {
  std::lock_guard<std::mutex> lk(mu_);
  if (out_.is_open()) out_.close();
}

std::vector<std::vector<std::string>> read_csv_rows(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("io-error", "cannot open '" + path + "' for reading");
  }
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    rows.push_back(split(line, ','));
  }
  return rows;
}

}  // namespace cdnsim
