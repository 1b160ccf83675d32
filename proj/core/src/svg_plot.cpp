#include <algorithm>
#include <cstdio>
#include <string>

#include "swarmsim/report_io.hpp"

namespace swarmsim {

namespace {
constexpr double kWidth = 480;
constexpr double kHeight = 400;
constexpr double kLeft = 60;
constexpr double kRight = 20;
constexpr double kTop = 40;
constexpr double kBottom = 50;
constexpr double kPlotW = kWidth - kLeft - kRight;
constexpr double kPlotH = kHeight - kTop - kBottom;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string header(const std::string& title, const std::string& provenance) {
  std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
       "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
  s += "<title>" + escape(title) + "</title>\n";
  s += "<desc>" + escape(provenance) + "</desc>\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) + "\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
       escape(title) + "</text>\n";
  return s;
}

double px(double x01) { return kLeft + x01 * kPlotW; }
double py(double y01) { return kTop + (1.0 - y01) * kPlotH; }

std::string axes(const std::string& xlabel, const std::string& ylabel) {
  std::string s;
  s += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(kPlotW) + "\" height=\"" + num(kPlotH) +
       "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  s += "<text x=\"" + num(kLeft + kPlotW / 2) + "\" y=\"" + num(kHeight - 12) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + escape(xlabel) + "</text>\n";
  s += "<text x=\"16\" y=\"" + num(kTop + kPlotH / 2) + "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 " +
       num(kTop + kPlotH / 2) + ")\">" + escape(ylabel) + "</text>\n";
  return s;
}

std::string tick_label(double x, double y, const std::string& text, const char* anchor) {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" + anchor +
         "\" font-family=\"sans-serif\" font-size=\"10\">" + escape(text) + "</text>\n";
}
}  // namespace

std::string lorenz_svg(std::span<const LorenzPoint> curve, std::optional<double> gini,
                       const std::string& title, const std::string& provenance) {
  std::string s = header(title, provenance);
  s += axes("cumulative share of nodes", "cumulative share of value");
  for (int i = 0; i <= 4; ++i) {
    const double t = i / 4.0;
    s += tick_label(px(t), py(0) + 14, num(t), "middle");
    s += tick_label(px(0) - 6, py(t) + 4, num(t), "end");
  }
  s += "<line x1=\"" + num(px(0)) + "\" y1=\"" + num(py(0)) + "\" x2=\"" + num(px(1)) + "\" y2=\"" + num(py(1)) +
       "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
  if (!curve.empty()) {
    s += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < curve.size(); ++i) {
      if (i) s += ' ';
      s += num(px(curve[i].population_share)) + "," + num(py(curve[i].value_share));
    }
    s += "\"/>\n";
  }
  char label[64];
  if (gini) {
    std::snprintf(label, sizeof label, "Gini = %.4f", *gini);
  } else {
    std::snprintf(label, sizeof label, "Gini = undefined");
  }
  s += "<text x=\"" + num(px(0.05)) + "\" y=\"" + num(py(0.92)) +
       "\" font-family=\"sans-serif\" font-size=\"13\">" + label + "</text>\n";
  s += "</svg>\n";
  return s;
}

std::string histogram_svg(const Histogram& histogram, const std::string& title,
                          const std::string& provenance) {
  std::string s = header(title, provenance);
  s += axes("forwarded chunks per node", "nodes");
  std::uint64_t max_count = 1;
  for (const HistogramBin& b : histogram.bins) max_count = std::max(max_count, b.count);
  const std::size_t bins = std::max<std::size_t>(1, histogram.bins.size());
  const double bar_w = kPlotW / static_cast<double>(bins);
  for (std::size_t i = 0; i < histogram.bins.size(); ++i) {
    const double h = static_cast<double>(histogram.bins[i].count) / static_cast<double>(max_count) * kPlotH;
    if (h <= 0) continue;
    s += "<rect x=\"" + num(kLeft + i * bar_w) + "\" y=\"" + num(kTop + kPlotH - h) + "\" width=\"" + num(bar_w) +
         "\" height=\"" + num(h) + "\" fill=\"#ff7f0e\" stroke=\"white\" stroke-width=\"0.5\"/>\n";
  }
  const std::uint64_t x_max = histogram.bins.empty() ? 0 : histogram.bins.back().low + histogram.bin_width;
  s += tick_label(px(0), py(0) + 14, "0", "middle");
  s += tick_label(px(1), py(0) + 14, std::to_string(x_max), "middle");
  s += tick_label(px(0) - 6, py(1) + 4, std::to_string(max_count), "end");
  s += tick_label(px(0) - 6, py(0) + 4, "0", "end");
  s += "</svg>\n";
  return s;
}

}  // namespace swarmsim
