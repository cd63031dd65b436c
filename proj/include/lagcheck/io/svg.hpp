#pragma once

// Hand-emitted SVG of scaled roots over the Szego curve. Fixed viewport,
// fixed styling, coordinates rounded to 0.01 px.

#include <complex>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace lagcheck::io {

struct SzegoPlot {
  std::vector<std::complex<double>> curve;
  std::vector<std::complex<double>> roots;
  std::string title;
};

inline std::string svg_szego(const SzegoPlot& plot) {
  // Plane window [-1.2, 1.2]^2 onto a 480 px square, y up.
  constexpr double size = 480.0, half = 1.2;
  auto px = [&](std::complex<double> z) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f,%.2f", (z.real() + half) / (2 * half) * size,
                  (half - z.imag()) / (2 * half) * size);
    return std::string(buf);
  };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"480\" viewBox=\"0 0 480 480\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"480\" height=\"480\" fill=\"#ffffff\"/>\n";
  os << "<line x1=\"0\" y1=\"240.00\" x2=\"480\" y2=\"240.00\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
  os << "<line x1=\"240.00\" y1=\"0\" x2=\"240.00\" y2=\"480\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
  if (!plot.curve.empty()) {
    os << "<polyline fill=\"none\" stroke=\"#1f4e99\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < plot.curve.size(); ++i) os << (i ? " " : "") << px(plot.curve[i]);
    os << "\"/>\n";
  }
  for (const auto& r : plot.roots) {
    const std::string p = px(r);
    const auto comma = p.find(',');
    os << "<circle cx=\"" << p.substr(0, comma) << "\" cy=\"" << p.substr(comma + 1)
       << "\" r=\"2\" fill=\"#c0392b\"/>\n";
  }
  os << "<text x=\"8\" y=\"20\" font-family=\"monospace\" font-size=\"13\" fill=\"#000000\">" << plot.title
     << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace lagcheck::io
