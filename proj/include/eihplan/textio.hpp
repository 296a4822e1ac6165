#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace eihplan {

// Shortest decimal string that round-trips to the exact double.
inline std::string num_exact(double v) {
  char buf[64];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

inline std::string num(double v, int prec = 12) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
  return buf;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return s;
}

// Minimal row-oriented CSV builder with deterministic number formatting.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) {
    for (size_t i = 0; i < header.size(); ++i) {
      if (i) body_ += ',';
      body_ += header[i];
    }
    body_ += '\n';
  }

  void row(const std::vector<double>& values) {
    for (size_t i = 0; i < values.size(); ++i) {
      if (i) body_ += ',';
      body_ += num(values[i]);
    }
    body_ += '\n';
  }

  void raw_row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) body_ += ',';
      body_ += cells[i];
    }
    body_ += '\n';
  }

  const std::string& str() const { return body_; }
  void save(const std::string& path) const { write_file(path, body_); }

 private:
  std::string body_;
};

}  // namespace eihplan
