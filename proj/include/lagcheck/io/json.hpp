#pragma once

// Deterministic JSON text: keys sorted, two-space indent, doubles with 17
// significant digits, non-finite numbers as null.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace lagcheck::io {

using Json = nlohmann::json;  // std::map objects: keys come out sorted

inline std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_json(std::ostream& os, const Json& j, int level = 0) {
  const std::string pad(static_cast<std::size_t>(2 * level), ' ');
  const std::string inner(static_cast<std::size_t>(2 * (level + 1)), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << inner << Json(it.key()).dump() << ": ";
        write_json(os, it.value(), level + 1);
      }
      os << "\n" << pad << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << inner;
        write_json(os, j[i], level + 1);
      }
      os << "\n" << pad << "]";
      return;
    }
    case Json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    default:
      os << j.dump();  // strings, integers, booleans, null
      return;
  }
}

inline std::string to_json_text(const Json& j) {
  std::ostringstream os;
  write_json(os, j);
  os << "\n";
  return os.str();
}

}  // namespace lagcheck::io
