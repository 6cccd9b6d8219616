#include "mlr/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mlr/errors.hpp"

namespace mlr {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 50.0;

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

struct AxisRange {
  double lo = 0.0;
  double hi = 1.0;
};

AxisRange padded(double lo, double hi) {
  if (lo > hi) std::swap(lo, hi);
  if (lo == hi) {  // degenerate: widen symmetrically
    const double pad = std::max(1.0, std::abs(lo) * 0.1);
    return {lo - pad, hi + pad};
  }
  const double pad = (hi - lo) * 0.05;
  return {lo - pad, hi + pad};
}

}  // namespace

std::string render_line_chart(const Table& t, const std::string& x_column,
                              const std::vector<std::string>& y_columns,
                              const PlotOptions& opts) {
  if (t.rows.empty()) throw ConfigError("plot: table has no data rows");
  if (y_columns.empty()) throw ConfigError("plot: no y columns requested");

  const std::vector<double> xs_raw = t.numeric_column(x_column);
  std::vector<std::vector<double>> ys_raw;
  ys_raw.reserve(y_columns.size());
  for (const std::string& name : y_columns) {
    ys_raw.push_back(t.numeric_column(name));
  }

  // Per-series drawable points after log filtering.
  struct Pt {
    double x, y;
  };
  std::vector<std::vector<Pt>> series(y_columns.size());
  double xlo = 0, xhi = 0, ylo = 0, yhi = 0;
  bool any = false;
  for (std::size_t s = 0; s < ys_raw.size(); ++s) {
    for (std::size_t r = 0; r < xs_raw.size(); ++r) {
      double x = xs_raw[r];
      double y = ys_raw[s][r];
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (opts.logx) {
        if (!(x > 0.0)) continue;
        x = std::log10(x);
      }
      if (opts.logy) {
        if (!(y > 0.0)) continue;
        y = std::log10(y);
      }
      series[s].push_back({x, y});
      if (!any) {
        xlo = xhi = x;
        ylo = yhi = y;
        any = true;
      } else {
        xlo = std::min(xlo, x);
        xhi = std::max(xhi, x);
        ylo = std::min(ylo, y);
        yhi = std::max(yhi, y);
      }
    }
  }
  if (!any) {
    throw ConfigError(
        "plot: no drawable points (log axes skip nonpositive values)");
  }

  const AxisRange xr = padded(xlo, xhi);
  const AxisRange yr = padded(ylo, yhi);
  const double w = static_cast<double>(opts.width);
  const double h = static_cast<double>(opts.height);
  const double plot_w = w - kMarginLeft - kMarginRight;
  const double plot_h = h - kMarginTop - kMarginBottom;
  const auto sx = [&](double x) {
    return kMarginLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w;
  };
  const auto sy = [&](double y) {
    return kMarginTop + (yr.hi - y) / (yr.hi - yr.lo) * plot_h;
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width
     << "\" height=\"" << opts.height << "\" viewBox=\"0 0 " << opts.width
     << " " << opts.height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!opts.title.empty()) {
    os << "<text x=\"" << fmt2(w / 2)
       << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"16\">"
       << opts.title << "</text>\n";
  }

  // Grid and tick labels: 5 evenly spaced ticks per axis. On log axes the
  // labels show the anti-logged value.
  for (int i = 0; i <= 4; ++i) {
    const double fx = xr.lo + (xr.hi - xr.lo) * i / 4.0;
    const double px = sx(fx);
    os << "<line x1=\"" << fmt2(px) << "\" y1=\"" << fmt2(kMarginTop)
       << "\" x2=\"" << fmt2(px) << "\" y2=\"" << fmt2(h - kMarginBottom)
       << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    const double label = opts.logx ? std::pow(10.0, fx) : fx;
    os << "<text x=\"" << fmt2(px) << "\" y=\"" << fmt2(h - kMarginBottom + 18)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"11\">"
       << fmt_label(label) << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double fy = yr.lo + (yr.hi - yr.lo) * i / 4.0;
    const double py = sy(fy);
    os << "<line x1=\"" << fmt2(kMarginLeft) << "\" y1=\"" << fmt2(py)
       << "\" x2=\"" << fmt2(w - kMarginRight) << "\" y2=\"" << fmt2(py)
       << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    const double label = opts.logy ? std::pow(10.0, fy) : fy;
    os << "<text x=\"" << fmt2(kMarginLeft - 6) << "\" y=\"" << fmt2(py + 4)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
          "font-size=\"11\">"
       << fmt_label(label) << "</text>\n";
  }

  // Axes frame.
  os << "<rect x=\"" << fmt2(kMarginLeft) << "\" y=\"" << fmt2(kMarginTop)
     << "\" width=\"" << fmt2(plot_w) << "\" height=\"" << fmt2(plot_h)
     << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  os << "<text x=\"" << fmt2(kMarginLeft + plot_w / 2) << "\" y=\""
     << fmt2(h - 12)
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"12\">"
     << x_column << (opts.logx ? " (log)" : "") << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    if (series[s].empty()) continue;
    const char* color = kPalette[s % kPaletteSize];
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[s].size(); ++i) {
      if (i) os << ' ';
      os << fmt2(sx(series[s][i].x)) << ',' << fmt2(sy(series[s][i].y));
    }
    os << "\"/>\n";
  }

  // Legend, top-right inside the frame.
  const double lx = w - kMarginRight - 150.0;
  double ly = kMarginTop + 14.0;
  for (std::size_t s = 0; s < y_columns.size(); ++s) {
    const char* color = kPalette[s % kPaletteSize];
    os << "<line x1=\"" << fmt2(lx) << "\" y1=\"" << fmt2(ly - 4) << "\" x2=\""
       << fmt2(lx + 22) << "\" y2=\"" << fmt2(ly - 4) << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << fmt2(lx + 28) << "\" y=\"" << fmt2(ly)
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << y_columns[s]
       << (opts.logy ? " (log)" : "") << "</text>\n";
    ly += 16.0;
  }

  os << "</svg>\n";
  return os.str();
}

void emit_svg(const std::string& csv_path, const std::string& x_column,
              const std::vector<std::string>& y_columns,
              const std::string& out_path, const PlotOptions& opts) {
  const Table t = read_csv(csv_path);
  const std::string svg = render_line_chart(t, x_column, y_columns, opts);
  std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + out_path);
  f << svg;
  f.flush();
  if (!f) throw IoError("write failed: " + out_path);
}

}  // namespace mlr
