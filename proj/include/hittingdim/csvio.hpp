#ifndef HITTINGDIM_CSVIO_HPP
#define HITTINGDIM_CSVIO_HPP

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

namespace hittingdim {

// %.17g round-trips doubles, keeping reruns byte-identical
inline std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_num(long long v) { return std::to_string(v); }

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& header) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open " + path);
    out_ << header << "\n";
  }
  void row(const std::string& line) { out_ << line << "\n"; }
  template <typename... Ts>
  void fields(const Ts&... vals) {
    std::string line;
    ((line += field_str(vals), line += ','), ...);
    if (!line.empty()) line.pop_back();
    out_ << line << "\n";
  }

 private:
  static std::string field_str(const std::string& s) { return s; }
  static std::string field_str(const char* s) { return s; }
  static std::string field_str(double v) { return csv_num(v); }
  static std::string field_str(long long v) { return std::to_string(v); }
  static std::string field_str(int v) { return std::to_string(v); }
  static std::string field_str(unsigned long long v) { return std::to_string(v); }
  static std::string field_str(bool v) { return v ? "1" : "0"; }
  std::ofstream out_;
};

}  // namespace hittingdim

#endif
