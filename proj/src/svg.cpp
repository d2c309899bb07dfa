#include "seglab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "seglab/errors.hpp"

namespace seglab {

namespace {

constexpr int kPlotW = 640;
constexpr int kPlotH = 480;
constexpr int kMarginL = 56;
constexpr int kMarginR = 84;  // room for the colorbar / legend
constexpr int kMarginT = 36;
constexpr int kMarginB = 40;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// 5-stop perceptual colormap, linear interpolation in RGB.
void colormap(double t, int rgb[3]) {
  static const int stops[5][3] = {
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98},
      {253, 231, 37}};
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const int k = std::min(3, static_cast<int>(t));
  const double f = t - k;
  for (int c = 0; c < 3; ++c)
    rgb[c] = static_cast<int>(std::lround(stops[k][c] +
                                          f * (stops[k + 1][c] - stops[k][c])));
}

const char* line_color(int i) {
  static const char* const pal[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b",
                                    "#17becf", "#e377c2"};
  return pal[i % 8];
}

void open_out(std::ofstream& out, const std::string& path) {
  out.open(path);
  if (!out) fail(ErrorKind::IoError, "cannot open for writing: " + path);
}

void header(std::ofstream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
      << kMarginL + kPlotW + kMarginR << "\" height=\""
      << kMarginT + kPlotH + kMarginB << "\" font-family=\"sans-serif\""
      << " font-size=\"12\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kMarginL << "\" y=\"" << kMarginT - 14
      << "\" font-size=\"14\">" << title << "</text>\n";
}

void axis_box(std::ofstream& out, double xlo, double xhi, double ylo,
              double yhi) {
  out << "<rect x=\"" << kMarginL << "\" y=\"" << kMarginT << "\" width=\""
      << kPlotW << "\" height=\"" << kPlotH
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"" << kMarginL << "\" y=\""
      << kMarginT + kPlotH + 16 << "\">" << fmt(xlo) << "</text>\n";
  out << "<text x=\"" << kMarginL + kPlotW << "\" y=\""
      << kMarginT + kPlotH + 16 << "\" text-anchor=\"end\">" << fmt(xhi)
      << "</text>\n";
  out << "<text x=\"" << kMarginL - 4 << "\" y=\"" << kMarginT + kPlotH
      << "\" text-anchor=\"end\">" << fmt(ylo) << "</text>\n";
  out << "<text x=\"" << kMarginL - 4 << "\" y=\"" << kMarginT + 12
      << "\" text-anchor=\"end\">" << fmt(yhi) << "</text>\n";
}

}  // namespace

void svg_heatmap(const ScalarField& u, const std::string& title,
                 const std::vector<Pt>& overlay, const std::string& path) {
  const Grid& g = u.grid;
  require(g.dim() == 2, ErrorKind::DimensionMismatch,
          "svg_heatmap wants a 2D field");
  std::ofstream out;
  open_out(out, path);

  // average-pool to at most 120 cells per axis
  const int nx = g.nx_total(), ny = g.ny_total();
  const int px = std::min(nx, 120), py = std::min(ny, 120);
  std::vector<double> cell(static_cast<size_t>(px) * py, 0.0);
  std::vector<int> cnt(static_cast<size_t>(px) * py, 0);
  double vmin = 1e300, vmax = -1e300;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      const int cx = std::min(px - 1, ix * px / nx);
      const int cy = std::min(py - 1, iy * py / ny);
      cell[static_cast<size_t>(cy) * px + cx] += u.at(ix, iy);
      cnt[static_cast<size_t>(cy) * px + cx] += 1;
      vmin = std::min(vmin, u.at(ix, iy));
      vmax = std::max(vmax, u.at(ix, iy));
    }
  if (vmax <= vmin) vmax = vmin + 1.0;

  header(out, title);
  const double cw = static_cast<double>(kPlotW) / px;
  const double ch = static_cast<double>(kPlotH) / py;
  char buf[160];
  for (int cy = 0; cy < py; ++cy)
    for (int cx = 0; cx < px; ++cx) {
      const double v = cell[static_cast<size_t>(cy) * px + cx] /
                       std::max(1, cnt[static_cast<size_t>(cy) * px + cx]);
      int rgb[3];
      colormap((v - vmin) / (vmax - vmin), rgb);
      // SVG y grows downward; grid y grows upward.
      std::snprintf(buf, sizeof buf,
                    "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" "
                    "height=\"%.2f\" fill=\"rgb(%d,%d,%d)\"/>\n",
                    kMarginL + cx * cw, kMarginT + (py - 1 - cy) * ch,
                    cw + 0.5, ch + 0.5, rgb[0], rgb[1], rgb[2]);
      out << buf;
    }

  // colorbar legend
  const int bx = kMarginL + kPlotW + 16;
  for (int k = 0; k < 32; ++k) {
    int rgb[3];
    colormap(1.0 - k / 31.0, rgb);
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%d\" y=\"%.2f\" width=\"16\" height=\"%.2f\" "
                  "fill=\"rgb(%d,%d,%d)\"/>\n",
                  bx, kMarginT + k * (kPlotH / 32.0), kPlotH / 32.0 + 0.5,
                  rgb[0], rgb[1], rgb[2]);
    out << buf;
  }
  out << "<text x=\"" << bx + 20 << "\" y=\"" << kMarginT + 12 << "\">"
      << fmt(vmax) << "</text>\n";
  out << "<text x=\"" << bx + 20 << "\" y=\"" << kMarginT + kPlotH << "\">"
      << fmt(vmin) << "</text>\n";

  // nodal overlay
  for (const Pt& p : overlay) {
    const double sx =
        kMarginL + (p.x - g.low(0)) / (g.high(0) - g.low(0)) * kPlotW;
    const double sy =
        kMarginT + (1.0 - (p.y - g.low(1)) / (g.high(1) - g.low(1))) * kPlotH;
    std::snprintf(buf, sizeof buf,
                  "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"1.5\"/>\n", sx, sy);
    out << buf;
  }

  axis_box(out, g.low(0), g.high(0), g.low(1), g.high(1));
  out << "</svg>\n";
  out.flush();
  if (!out) fail(ErrorKind::IoError, "write failed: " + path);
}

void svg_lineplot(const FieldSet& f, const std::string& title,
                  const std::vector<Pt>& overlay, const std::string& path) {
  const Grid& g = f.grid;
  require(g.dim() == 1, ErrorKind::DimensionMismatch,
          "svg_lineplot wants a 1D field set");
  std::ofstream out;
  open_out(out, path);

  double vmin = 0.0, vmax = 0.0;  // always include the zero line
  for (int i = 1; i <= f.d(); ++i)
    for (int ix = 0; ix < g.nx_total(); ++ix) {
      vmin = std::min(vmin, f.comp(i).at(ix, 0));
      vmax = std::max(vmax, f.comp(i).at(ix, 0));
    }
  const double pad = 0.05 * (vmax - vmin + 1e-30);
  vmin -= pad;
  vmax += pad;

  header(out, title);
  auto sx = [&](double x) {
    return kMarginL + (x - g.low(0)) / (g.high(0) - g.low(0)) * kPlotW;
  };
  auto sy = [&](double v) {
    return kMarginT + (1.0 - (v - vmin) / (vmax - vmin)) * kPlotH;
  };

  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", sy(0.0));
  out << "<line x1=\"" << kMarginL << "\" y1=\"" << buf << "\" x2=\""
      << kMarginL + kPlotW << "\" y2=\"" << buf
      << "\" stroke=\"#cccccc\"/>\n";

  for (int i = 1; i <= f.d(); ++i) {
    out << "<polyline fill=\"none\" stroke=\"" << line_color(i - 1)
        << "\" stroke-width=\"1.5\" points=\"";
    for (int ix = 0; ix < g.nx_total(); ++ix) {
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", sx(g.coord(0, ix)),
                    sy(f.comp(i).at(ix, 0)));
      out << buf;
    }
    out << "\"/>\n";
    out << "<text x=\"" << kMarginL + kPlotW + 16 << "\" y=\""
        << kMarginT + 16 * i << "\" fill=\"" << line_color(i - 1) << "\">u"
        << i << "</text>\n";
  }

  for (const Pt& p : overlay) {
    std::snprintf(buf, sizeof buf,
                  "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2\"/>\n", sx(p.x),
                  sy(0.0));
    out << buf;
  }

  axis_box(out, g.low(0), g.high(0), vmin, vmax);
  out << "</svg>\n";
  out.flush();
  if (!out) fail(ErrorKind::IoError, "write failed: " + path);
}

}  // namespace seglab
