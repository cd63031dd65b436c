#include <catch2/catch_amalgamated.hpp>

#include <limits>

#include "lagcheck/io/csv.hpp"
#include "lagcheck/io/json.hpp"
#include "lagcheck/io/svg.hpp"

using namespace lagcheck::io;

TEST_CASE("doubles round-trip with 17 digits and non-finite becomes null") {
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "null");
  CHECK(format_double(std::nan("")) == "null");
}

TEST_CASE("JSON objects are written with sorted keys") {
  Json j;
  j["zeta"] = 1;
  j["alpha"] = Json::array({0.5, true, nullptr});
  j["mid"] = Json::object();
  const std::string want =
      "{\n"
      "  \"alpha\": [\n"
      "    0.5,\n"
      "    true,\n"
      "    null\n"
      "  ],\n"
      "  \"mid\": {},\n"
      "  \"zeta\": 1\n"
      "}\n";
  CHECK(to_json_text(j) == want);
  CHECK(Json::parse(to_json_text(j)) == j);
}

TEST_CASE("JSON output is independent of insertion order") {
  Json a, b;
  a["x"] = 1.25;
  a["y"] = "s";
  b["y"] = "s";
  b["x"] = 1.25;
  CHECK(to_json_text(a) == to_json_text(b));
}

TEST_CASE("CSV quoting follows RFC 4180") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  CsvWriter w({"k", "v"});
  w.row({cell(1), cell(0.5)});
  w.row({cell("x,y"), cell(std::numeric_limits<double>::quiet_NaN())});
  CHECK(w.str() == "k,v\n1,0.5\n\"x,y\",null\n");
  CHECK(w.width() == 2);
}

TEST_CASE("SVG plot is deterministic and uses the fixed viewport") {
  SzegoPlot p{{{1.0, 0.0}, {0.0, 0.5}, {-0.2, 0.0}}, {{-0.5, 0.25}}, "n = 3"};
  const std::string a = svg_szego(p);
  CHECK(a == svg_szego(p));
  CHECK(a.find("viewBox=\"0 0 480 480\"") != std::string::npos);
  CHECK(a.find("<polyline") != std::string::npos);
  CHECK(a.find("<circle") != std::string::npos);
  // z = 1 maps to (440, 240).
  CHECK(a.find("440.00,240.00") != std::string::npos);
}
