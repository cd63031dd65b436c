#pragma once

// RFC-4180 CSV with LF line endings and '.' decimals.

#include <initializer_list>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lagcheck/io/json.hpp"

namespace lagcheck::io {

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

class CsvWriter {
public:
  explicit CsvWriter(std::vector<std::string> header) : width_(header.size()) { row(header); }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os_ << ',';
      os_ << csv_field(cells[i]);
    }
    os_ << '\n';
  }

  [[nodiscard]] std::string str() const { return os_.str(); }
  [[nodiscard]] std::size_t width() const { return width_; }

private:
  std::size_t width_;
  std::ostringstream os_;
};

inline std::string cell(double v) { return format_double(v); }
inline std::string cell(int v) { return std::to_string(v); }
inline std::string cell(std::string_view v) { return std::string(v); }

}  // namespace lagcheck::io
