#include "syncnet/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace syncnet {

namespace {

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                 "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

void write_svg(const Trace& trace, std::ostream& os, int width, int height) {
  const double left = 60, right = 20, top = 20, bottom = 40;
  const double pw = width - left - right, ph = height - top - bottom;

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  auto extend = [&](const std::vector<double>& s) {
    for (double v : s) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  };
  for (const auto& s : trace.y) extend(s);
  extend(trace.target);
  if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
  if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
  const double t0 = trace.times.empty() ? 0.0 : trace.times.front();
  const double t1 = trace.times.empty() ? 1.0 : std::max(trace.times.back(), t0 + 1e-12);

  auto px = [&](double t) { return left + (t - t0) / (t1 - t0) * pw; };
  auto py = [&](double v) { return top + (hi - v) / (hi - lo) * ph; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"#888\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = lo + (hi - lo) * k / 4.0, t = t0 + (t1 - t0) * k / 4.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    os << "<text x=\"" << left - 6 << "\" y=\"" << fmt(py(v) + 4) << "\" text-anchor=\"end\">" << buf << "</text>\n";
    std::snprintf(buf, sizeof buf, "%.3g", t);
    os << "<text x=\"" << fmt(px(t)) << "\" y=\"" << height - bottom + 16 << "\" text-anchor=\"middle\">" << buf
       << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 6 << "\" text-anchor=\"middle\">t</text>\n";

  // Thin long traces to at most ~2000 points per series.
  const std::size_t stride = std::max<std::size_t>(1, trace.times.size() / 2000);
  auto polyline = [&](const std::vector<double>& s, const char* colour, const char* extra) {
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.2\"" << extra << " points=\"";
    for (std::size_t k = 0; k < s.size(); k += stride) os << fmt(px(trace.times[k])) << ',' << fmt(py(s[k])) << ' ';
    if (!s.empty()) os << fmt(px(trace.times.back())) << ',' << fmt(py(s.back()));
    os << "\"/>\n";
  };
  for (std::size_t i = 0; i < trace.y.size(); ++i) {
    polyline(trace.y[i], kPalette[i % kPalette.size()], "");
    os << "<text x=\"" << left + 8 + 40 * i << "\" y=\"" << top + 14 << "\" fill=\""
       << kPalette[i % kPalette.size()] << "\">y" << i + 1 << "</text>\n";
  }
  if (!trace.target.empty()) polyline(trace.target, "black", " stroke-dasharray=\"4 3\"");
  os << "</svg>\n";
}

}  // namespace syncnet
