#include "latsim/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace latsim {

namespace {

constexpr double kWidth = 860.0, kHeight = 480.0;
constexpr double kMarginL = 72.0, kMarginR = 24.0, kMarginT = 48.0, kMarginB = 56.0;
constexpr std::size_t kMaxPointsPerSeries = 2000;

std::string escape_xml(const std::string& s) {
  std::string out;
  out.reserve(s.size());
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

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double nice_step(double range) {
  const double raw = range / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  if (norm <= 1.0) return mag;
  if (norm <= 2.0) return 2.0 * mag;
  if (norm <= 5.0) return 5.0 * mag;
  return 10.0 * mag;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void include(double v) {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  bool valid() const { return lo <= hi; }
  double span() const { return hi - lo; }
  void pad(double fraction) {
    const double p = span() > 0.0 ? span() * fraction : std::max(1.0, std::abs(lo)) * fraction;
    lo -= p;
    hi += p;
  }
};

}  // namespace

std::string render_svg_plot(const std::string& title, const std::string& x_label,
                            const std::string& y_label, const std::vector<PlotSeries>& series,
                            bool equal_axes) {
  Range xr, yr;
  for (const auto& s : series) {
    for (double v : s.x) xr.include(v);
    for (double v : s.y) yr.include(v);
  }
  if (!xr.valid()) xr = {0.0, 1.0};
  if (!yr.valid()) yr = {0.0, 1.0};
  xr.pad(0.03);
  yr.pad(0.06);

  const double plot_w = kWidth - kMarginL - kMarginR;
  const double plot_h = kHeight - kMarginT - kMarginB;
  if (equal_axes) {
    // Stretch the narrower range so both axes share one scale.
    const double per_px_x = xr.span() / plot_w;
    const double per_px_y = yr.span() / plot_h;
    const double per_px = std::max(per_px_x, per_px_y);
    const double cx = 0.5 * (xr.lo + xr.hi), cy = 0.5 * (yr.lo + yr.hi);
    xr = {cx - 0.5 * per_px * plot_w, cx + 0.5 * per_px * plot_w};
    yr = {cy - 0.5 * per_px * plot_h, cy + 0.5 * per_px * plot_h};
  }

  auto px = [&](double x) { return kMarginL + (x - xr.lo) / xr.span() * plot_w; };
  auto py = [&](double y) { return kMarginT + plot_h - (y - yr.lo) / yr.span() * plot_h; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << escape_xml(title) << "</text>\n";

  // Grid and ticks.
  out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#444\">\n";
  const double xstep = nice_step(xr.span());
  for (double x = std::ceil(xr.lo / xstep) * xstep; x <= xr.hi + 1e-9 * xstep; x += xstep) {
    const double X = px(x);
    out << "<line x1=\"" << X << "\" y1=\"" << kMarginT << "\" x2=\"" << X << "\" y2=\""
        << kMarginT + plot_h << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << X << "\" y=\"" << kMarginT + plot_h + 16
        << "\" text-anchor=\"middle\">" << fmt(x) << "</text>\n";
  }
  const double ystep = nice_step(yr.span());
  for (double yv = std::ceil(yr.lo / ystep) * ystep; yv <= yr.hi + 1e-9 * ystep; yv += ystep) {
    const double Y = py(yv);
    out << "<line x1=\"" << kMarginL << "\" y1=\"" << Y << "\" x2=\"" << kMarginL + plot_w
        << "\" y2=\"" << Y << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << kMarginL - 6 << "\" y=\"" << Y + 4 << "\" text-anchor=\"end\">"
        << fmt(yv) << "</text>\n";
  }
  out << "</g>\n";

  out << "<rect x=\"" << kMarginL << "\" y=\"" << kMarginT << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#888\"/>\n";

  for (const auto& s : series) {
    const std::size_t n = std::min(s.x.size(), s.y.size());
    if (n == 0) continue;
    const std::size_t step = std::max<std::size_t>(1, n / kMaxPointsPerSeries);
    out << "<polyline fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"1.5\" points=\"";
    char buf[48];
    for (std::size_t i = 0; i < n; i += step) {
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(s.x[i]), py(s.y[i]));
      out << buf;
    }
    std::snprintf(buf, sizeof buf, "%.2f,%.2f", px(s.x[n - 1]), py(s.y[n - 1]));
    out << buf << "\"/>\n";
  }

  // Legend along the top edge of the plot area.
  double lx = kMarginL + 8;
  for (const auto& s : series) {
    out << "<line x1=\"" << lx << "\" y1=\"" << kMarginT + 12 << "\" x2=\"" << lx + 22
        << "\" y2=\"" << kMarginT + 12 << "\" stroke=\"" << s.color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << lx + 26 << "\" y=\"" << kMarginT + 16
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape_xml(s.label)
        << "</text>\n";
    lx += 38.0 + 7.0 * static_cast<double>(s.label.size());
  }

  out << "<text x=\"" << kMarginL + plot_w / 2 << "\" y=\"" << kHeight - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << escape_xml(x_label) << "</text>\n";
  out << "<text x=\"18\" y=\"" << kMarginT + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
         "transform=\"rotate(-90 18 "
      << kMarginT + plot_h / 2 << ")\">" << escape_xml(y_label) << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

std::vector<std::string> write_run_plots(const SimLog& log, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  const std::size_t n = log.rows.size();
  std::vector<double> t(n), x(n), y(n), x_des(n), y_des(n), eh1(n), eh3(n), delta(n);
  for (std::size_t i = 0; i < n; ++i) {
    const LogRow& r = log.rows[i];
    t[i] = r.t;
    x[i] = r.x;
    y[i] = r.y;
    x_des[i] = r.x_des;
    y_des[i] = r.y_des;
    eh1[i] = r.e_h1;
    eh3[i] = r.e_h3;
    delta[i] = r.delta;
  }

  struct Spec {
    const char* file;
    std::string svg;
  };
  std::vector<Spec> specs;
  specs.push_back({"trajectory.svg",
                   render_svg_plot("vehicle vs reference path", "x [m]", "y [m]",
                                   {{"reference", "#888888", x_des, y_des},
                                    {"vehicle", "#d62728", x, y}},
                                   true)});
  specs.push_back({"estimate_error_lateral.svg",
                   render_svg_plot("lateral offset estimation error", "t [s]", "z1 - z1_hat [m]",
                                   {{"e_h1", "#1f77b4", t, eh1}})});
  specs.push_back({"estimate_error_heading.svg",
                   render_svg_plot("heading estimation error", "t [s]", "z3 - z3_hat [rad]",
                                   {{"e_h3", "#2ca02c", t, eh3}})});
  specs.push_back({"steering.svg", render_svg_plot("applied steering", "t [s]", "delta [rad]",
                                                   {{"delta", "#9467bd", t, delta}})});

  std::vector<std::string> written;
  for (const auto& spec : specs) {
    const fs::path path = fs::path(dir) / spec.file;
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << spec.svg;
    if (!out.good()) throw std::runtime_error(path.string() + ": write failed");
    written.push_back(spec.file);
  }
  return written;
}

}  // namespace latsim
