#include "svg.hpp"

#include "gsmooth/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace gsmooth::detail {

namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 440;
constexpr double kLeft = 70;
constexpr double kRight = 160;
constexpr double kTop = 40;
constexpr double kBottom = 50;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string escape(const std::string& text) {
  std::string out;
  for (const char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  double x_min, x_max, y_min, y_max;

  double px(double x) const {
    return kLeft + (x - x_min) / (x_max - x_min) * (kWidth - kLeft - kRight);
  }
  double py(double y) const {
    return kTop + (y_max - y) / (y_max - y_min) * (kHeight - kTop - kBottom);
  }
};

void widen(double& lo, double& hi) {
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
}

void open_document(std::ostringstream& out, const Frame& frame, const std::string& title,
                   const std::string& x_label, const std::string& y_label) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(title) << "</text>\n";
  const double x0 = frame.px(frame.x_min), x1 = frame.px(frame.x_max);
  const double y0 = frame.py(frame.y_min), y1 = frame.py(frame.y_max);
  out << "<polyline fill=\"none\" stroke=\"black\" points=\"" << x0 << ',' << y1 << ' ' << x0
      << ',' << y0 << ' ' << x1 << ',' << y0 << "\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = frame.x_min + (frame.x_max - frame.x_min) * i / 4.0;
    const double yv = frame.y_min + (frame.y_max - frame.y_min) * i / 4.0;
    out << "<text x=\"" << frame.px(xv) << "\" y=\"" << y0 + 16
        << "\" text-anchor=\"middle\">" << xv << "</text>\n";
    out << "<text x=\"" << x0 - 6 << "\" y=\"" << frame.py(yv) + 4
        << "\" text-anchor=\"end\">" << yv << "</text>\n";
  }
  out << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 10
      << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
  out << "<text transform=\"translate(16," << (y0 + y1) / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(y_label) << "</text>\n";
}

void save(const std::filesystem::path& path, std::ostringstream& out) {
  out << "</svg>\n";
  std::ofstream file(path);
  if (!file) throw Error(ErrorCode::ParseError, "cannot write " + path.string());
  file << out.str();
}

}  // namespace

void write_line_plot(const std::filesystem::path& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<Series>& series) {
  Frame frame{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
              std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      frame.x_min = std::min(frame.x_min, s.x[i]);
      frame.x_max = std::max(frame.x_max, s.x[i]);
      frame.y_min = std::min(frame.y_min, s.y[i]);
      frame.y_max = std::max(frame.y_max, s.y[i]);
    }
  }
  if (!std::isfinite(frame.x_min)) frame = {0, 1, 0, 1};
  widen(frame.x_min, frame.x_max);
  widen(frame.y_min, frame.y_max);

  std::ostringstream out;
  open_document(out, frame, title, x_label, y_label);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* colour = kPalette[k % std::size(kPalette)];
    out << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << colour << "\" points=\"";
    for (std::size_t i = 0; i < series[k].x.size() && i < series[k].y.size(); ++i) {
      if (std::isfinite(series[k].y[i])) {
        out << frame.px(series[k].x[i]) << ',' << frame.py(series[k].y[i]) << ' ';
      }
    }
    out << "\"/>\n";
    const double ly = kTop + 18.0 * static_cast<double>(k);
    out << "<line x1=\"" << kWidth - kRight + 12 << "\" y1=\"" << ly << "\" x2=\""
        << kWidth - kRight + 32 << "\" y2=\"" << ly << "\" stroke=\"" << colour
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << kWidth - kRight + 38 << "\" y=\"" << ly + 4 << "\">"
        << escape(series[k].label) << "</text>\n";
  }
  save(path, out);
}

void write_bar_plot(const std::filesystem::path& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<double>& heights) {
  Frame frame{0.0, static_cast<double>(std::max<std::size_t>(heights.size(), 1)), 0.0, 0.0};
  for (const double h : heights) frame.y_max = std::max(frame.y_max, h);
  widen(frame.y_min, frame.y_max);
  std::ostringstream out;
  open_document(out, frame, title, x_label, y_label);
  for (std::size_t i = 0; i < heights.size(); ++i) {
    const double x0 = frame.px(static_cast<double>(i));
    const double x1 = frame.px(static_cast<double>(i) + 1.0);
    const double top = frame.py(std::max(0.0, heights[i]));
    out << "<rect x=\"" << x0 << "\" y=\"" << top << "\" width=\"" << std::max(0.5, x1 - x0 - 0.5)
        << "\" height=\"" << frame.py(0.0) - top << "\" fill=\"" << kPalette[0] << "\"/>\n";
  }
  save(path, out);
}

}  // namespace gsmooth::detail
