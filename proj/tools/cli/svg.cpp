#include "cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace loadshift::cli {

namespace {

constexpr double kWidth = 720, kHeight = 400, kLeft = 64, kRight = 150, kTop = 40, kBottom = 56;
constexpr const char* kPalette[] = {"#1b6ca8", "#d1495b", "#edae49", "#00798c", "#66a182", "#8d6a9f", "#3d3d3d"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
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

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

struct Frame {
  double lo, hi;
  double plot_w = kWidth - kLeft - kRight;
  double plot_h = kHeight - kTop - kBottom;
  double y(double v) const { return kTop + plot_h * (1.0 - (v - lo) / (hi - lo)); }
};

void open(std::ostringstream& os, const std::string& title) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << num(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
     << "</text>\n";
}

void y_axis(std::ostringstream& os, const Frame& f) {
  for (int k = 0; k <= 4; ++k) {
    const double v = f.lo + (f.hi - f.lo) * k / 4.0;
    const double y = f.y(v);
    os << "<line x1=\"" << num(kLeft) << "\" x2=\"" << num(kLeft + f.plot_w) << "\" y1=\"" << num(y) << "\" y2=\""
       << num(y) << "\" stroke=\"#e0e0e0\"/>\n";
    os << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">" << tick(v)
       << "</text>\n";
  }
  os << "<line x1=\"" << num(kLeft) << "\" x2=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" y2=\""
     << num(kTop + f.plot_h) << "\" stroke=\"black\"/>\n";
}

void legend(std::ostringstream& os, const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double y = kTop + 16.0 * static_cast<double>(i);
    os << "<rect x=\"" << num(kWidth - kRight + 12) << "\" y=\"" << num(y) << "\" width=\"10\" height=\"10\" fill=\""
       << kPalette[i % 7] << "\"/>\n";
    os << "<text x=\"" << num(kWidth - kRight + 28) << "\" y=\"" << num(y + 9) << "\">" << escape(names[i])
       << "</text>\n";
  }
}

}  // namespace

std::string line_chart(const std::string& title, const std::vector<std::string>& x_labels,
                       const std::vector<LineSeries>& series, const std::optional<Band>& band) {
  double lo = INFINITY, hi = -INFINITY;
  std::size_t n = 0;
  auto scan = [&](const std::vector<double>& v) {
    n = std::max(n, v.size());
    for (double x : v)
      if (std::isfinite(x)) lo = std::min(lo, x), hi = std::max(hi, x);
  };
  for (const auto& s : series) scan(s.values);
  if (band) scan(band->lower), scan(band->upper);
  if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
  if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
  const double pad = 0.05 * (hi - lo);
  Frame f{lo - pad, hi + pad};
  const double step = n > 1 ? f.plot_w / static_cast<double>(n - 1) : 0.0;
  auto x = [&](std::size_t i) { return kLeft + step * static_cast<double>(i); };

  std::ostringstream os;
  open(os, title);
  y_axis(os, f);
  if (f.lo < 0.0 && f.hi > 0.0) {
    os << "<line x1=\"" << num(kLeft) << "\" x2=\"" << num(kLeft + f.plot_w) << "\" y1=\"" << num(f.y(0.0))
       << "\" y2=\"" << num(f.y(0.0)) << "\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n";
  }
  const std::size_t every = std::max<std::size_t>(1, (x_labels.size() + 9) / 10);
  for (std::size_t i = 0; i < x_labels.size() && i < n; i += every) {
    os << "<text x=\"" << num(x(i)) << "\" y=\"" << num(kTop + f.plot_h + 16) << "\" text-anchor=\"middle\">"
       << escape(x_labels[i]) << "</text>\n";
  }
  if (band) {
    std::string upper, lower;
    for (std::size_t i = 0; i < band->upper.size(); ++i) {
      if (!std::isfinite(band->upper[i]) || !std::isfinite(band->lower[i])) continue;
      upper += num(x(i)) + "," + num(f.y(band->upper[i])) + " ";
      lower = num(x(i)) + "," + num(f.y(band->lower[i])) + " " + lower;
    }
    os << "<polygon points=\"" << upper << lower << "\" fill=\"#1b6ca8\" fill-opacity=\"0.18\" stroke=\"none\"/>\n";
  }
  std::vector<std::string> names;
  for (std::size_t s = 0; s < series.size(); ++s) {
    names.push_back(series[s].name);
    std::string d;
    bool pen = false;
    for (std::size_t i = 0; i < series[s].values.size(); ++i) {
      const double v = series[s].values[i];
      if (!std::isfinite(v)) {
        pen = false;
        continue;
      }
      d += (pen ? "L" : "M") + num(x(i)) + "," + num(f.y(v)) + " ";
      pen = true;
    }
    os << "<path d=\"" << d << "\" fill=\"none\" stroke=\"" << kPalette[s % 7] << "\" stroke-width=\"1.6\"/>\n";
  }
  legend(os, names);
  os << "</svg>\n";
  return os.str();
}

std::string stacked_bar_chart(const std::string& title, const std::vector<std::string>& bar_labels,
                              const std::vector<std::string>& part_names, const Eigen::MatrixXd& shares) {
  double hi = 0.0;
  for (Eigen::Index r = 0; r < shares.rows(); ++r) hi = std::max(hi, shares.row(r).cwiseMax(0.0).sum());
  Frame f{0.0, hi > 0.0 ? hi : 1.0};
  std::ostringstream os;
  open(os, title);
  y_axis(os, f);
  const double slot = shares.rows() > 0 ? f.plot_w / static_cast<double>(shares.rows()) : f.plot_w;
  const double bar = 0.7 * slot;
  for (Eigen::Index r = 0; r < shares.rows(); ++r) {
    const double x0 = kLeft + slot * static_cast<double>(r) + 0.15 * slot;
    double base = 0.0;
    for (Eigen::Index c = 0; c < shares.cols(); ++c) {
      const double v = std::max(0.0, shares(r, c));
      os << "<rect x=\"" << num(x0) << "\" y=\"" << num(f.y(base + v)) << "\" width=\"" << num(bar)
         << "\" height=\"" << num(f.y(base) - f.y(base + v)) << "\" fill=\"" << kPalette[c % 7] << "\"/>\n";
      base += v;
    }
    if (static_cast<std::size_t>(r) < bar_labels.size()) {
      os << "<text x=\"" << num(x0 + bar / 2) << "\" y=\"" << num(kTop + f.plot_h + 16)
         << "\" text-anchor=\"middle\">" << escape(bar_labels[static_cast<std::size_t>(r)]) << "</text>\n";
    }
  }
  legend(os, part_names);
  os << "</svg>\n";
  return os.str();
}

}  // namespace loadshift::cli
