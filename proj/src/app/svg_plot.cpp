#include "pacb/app/svg_plot.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include "pacb/app/csv.hpp"
#include "pacb/app/sweep.hpp"

namespace pacb::app {
namespace {

constexpr double kWidth = 760, kHeight = 500;
constexpr double kLeft = 80, kRight = 230, kTop = 50, kBottom = 60;

struct Series {
  std::size_t curve = 0;
  std::string algo;
  std::vector<std::pair<double, double>> points;
};

double parse_field(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw std::invalid_argument("bad number '" + s + "' in sweep CSV");
  return v;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

std::string xml_escape(std::string_view s) {
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

std::vector<double> nice_ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) ticks.push_back(t);
  return ticks;
}

std::string_view dash_for(std::string_view algo) {
  if (algo == "baseline_x0") return "8,4";
  if (algo == "baseline_xL4") return "2,3";
  if (algo == "baseline_xL2") return "10,3,2,3";
  return "";
}

std::string marker(std::size_t curve, double x, double y, std::string_view color) {
  std::ostringstream os;
  const std::string fill = "fill=\"none\" stroke=\"" + std::string(color) + "\"";
  switch (curve % 4) {
    case 0: os << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"3\" " << fill << "/>"; break;
    case 1: os << "<rect x=\"" << num(x - 3) << "\" y=\"" << num(y - 3) << "\" width=\"6\" height=\"6\" " << fill << "/>"; break;
    case 2:
      os << "<path d=\"M" << num(x) << ' ' << num(y - 3.5) << " L" << num(x + 3.5) << ' ' << num(y + 3)
         << " L" << num(x - 3.5) << ' ' << num(y + 3) << " Z\" " << fill << "/>";
      break;
    default:
      os << "<path d=\"M" << num(x) << ' ' << num(y - 4) << " L" << num(x + 4) << ' ' << num(y) << " L"
         << num(x) << ' ' << num(y + 4) << " L" << num(x - 4) << ' ' << num(y) << " Z\" " << fill << "/>";
  }
  return os.str();
}

}  // namespace

std::string plot_sweep_svg(std::string_view csv_text, const PlotLabels& labels) {
  const auto rows = parse_csv(csv_text);
  if (rows.empty()) throw std::invalid_argument("sweep CSV is empty");
  std::string header;
  for (std::size_t i = 0; i < rows[0].size(); ++i) header += (i ? "," : "") + rows[0][i];
  if (header != kSweepCsvHeader) throw std::invalid_argument("unexpected sweep CSV header");

  std::map<std::pair<std::size_t, std::string>, Series> series;
  std::vector<std::pair<std::size_t, std::string>> order;
  double x_lo = INFINITY, x_hi = -INFINITY, y_hi = 0.0;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != 7) throw std::invalid_argument("sweep CSV row " + std::to_string(r) + " has wrong field count");
    const double x = parse_field(row[0]);
    const auto curve = static_cast<std::size_t>(parse_field(row[1]));
    const double rate = parse_field(row[5]);
    const auto key = std::make_pair(curve, row[2]);
    auto [it, inserted] = series.try_emplace(key);
    if (inserted) {
      it->second.curve = curve;
      it->second.algo = row[2];
      order.push_back(key);
    }
    it->second.points.emplace_back(x, rate);
    x_lo = std::min(x_lo, x);
    x_hi = std::max(x_hi, x);
    y_hi = std::max(y_hi, rate);
  }
  if (order.empty()) throw std::invalid_argument("sweep CSV has no data rows");
  if (!(x_hi > x_lo)) {
    x_lo -= 0.5;
    x_hi += 0.5;
  }
  if (!(y_hi > 0.0)) y_hi = 1.0;
  const auto y_ticks = nice_ticks(0.0, y_hi * 1.05);
  const double y_top = std::max(y_hi * 1.05, y_ticks.back());

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * pw; };
  auto sy = [&](double y) { return kTop + ph - y / y_top * ph; };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!labels.title.empty()) {
    os << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"28\" text-anchor=\"middle\" font-size=\"15\">"
       << xml_escape(labels.title) << "</text>\n";
  }

  for (double t : y_ticks) {
    os << "<line x1=\"" << num(kLeft) << "\" x2=\"" << num(kLeft + pw) << "\" y1=\"" << num(sy(t)) << "\" y2=\""
       << num(sy(t)) << "\" stroke=\"#ddd\"/>\n"
       << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(sy(t) + 4) << "\" text-anchor=\"end\">"
       << tick_label(t) << "</text>\n";
  }
  for (double t : nice_ticks(x_lo, x_hi)) {
    os << "<line x1=\"" << num(sx(t)) << "\" x2=\"" << num(sx(t)) << "\" y1=\"" << num(kTop + ph) << "\" y2=\""
       << num(kTop + ph + 5) << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << num(sx(t)) << "\" y=\"" << num(kTop + ph + 18) << "\" text-anchor=\"middle\">"
       << tick_label(t) << "</text>\n";
  }
  os << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw) << "\" height=\""
     << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n"
     << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 15) << "\" text-anchor=\"middle\">"
     << xml_escape(labels.x_label) << "</text>\n"
     << "<text transform=\"translate(22 " << num(kTop + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
     << "covert rate (bit/s)</text>\n";

  for (const auto& key : order) {
    const Series& s = series.at(key);
    const std::string_view color = s.algo == "ao" ? "#d62728" : "#1f77b4";
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\"";
    if (const auto dash = dash_for(s.algo); !dash.empty()) os << " stroke-dasharray=\"" << dash << "\"";
    os << " points=\"";
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      os << (i ? " " : "") << num(sx(s.points[i].first)) << ',' << num(sy(s.points[i].second));
    }
    os << "\"/>\n";
    for (const auto& [x, y] : s.points) os << marker(s.curve, sx(x), sy(y), color) << '\n';
  }

  // Legend: line styles per algorithm, then marker per curve.
  double ly = kTop + 10;
  const double lx = kLeft + pw + 20;
  for (std::string_view algo : {"ao", "baseline_x0", "baseline_xL4", "baseline_xL2"}) {
    const std::string_view color = algo == "ao" ? "#d62728" : "#1f77b4";
    os << "<line x1=\"" << num(lx) << "\" x2=\"" << num(lx + 30) << "\" y1=\"" << num(ly) << "\" y2=\"" << num(ly)
       << "\" stroke=\"" << color << "\" stroke-width=\"1.6\"";
    if (const auto dash = dash_for(algo); !dash.empty()) os << " stroke-dasharray=\"" << dash << "\"";
    os << "/>\n<text x=\"" << num(lx + 38) << "\" y=\"" << num(ly + 4) << "\">" << algo << "</text>\n";
    ly += 18;
  }
  ly += 8;
  std::size_t max_curve = 0;
  for (const auto& key : order) max_curve = std::max(max_curve, key.first);
  for (std::size_t c = 0; c <= max_curve; ++c) {
    const std::string label = c < labels.curve_labels.size() && !labels.curve_labels[c].empty()
                                  ? labels.curve_labels[c]
                                  : "curve " + std::to_string(c);
    os << marker(c, lx + 15, ly, "black") << '\n'
       << "<text x=\"" << num(lx + 38) << "\" y=\"" << num(ly + 4) << "\">" << xml_escape(label) << "</text>\n";
    ly += 18;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace pacb::app
