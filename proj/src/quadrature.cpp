#include "seglab/quadrature.hpp"

#include <algorithm>
#include <string>

namespace seglab {

void require_ball_inside(const Grid& g, const Pt& x0, double r, double cells) {
  for (int a = 0; a < g.dim(); ++a) {
    const double c = a == 0 ? x0.x : x0.y;
    const double margin = cells * g.h(a);
    require(c - r >= g.low(a) + margin && c + r <= g.high(a) - margin,
            ErrorKind::BallOutsideDomain,
            "ball of radius " + std::to_string(r) + " leaves the domain margin");
  }
}

void require_radius_resolved(const Grid& g, double r, double cells) {
  require(r >= cells * g.hmax(), ErrorKind::RadiusBelowResolution,
          "radius " + std::to_string(r) + " below " + std::to_string(cells) +
              "h resolution");
}

namespace {

struct CellRange {
  long count;      // flattened number of candidate cells
  int kx0, kx1;    // inclusive cell index range, x axis
  int ky0, ky1;    // inclusive cell index range, y axis (0,0 in 1D)
  int width;
};

// Cells are the intervals between adjacent nodes: cell k spans
// [low + k*h, low + (k+1)*h], k = 0..n; its center is low + (k+0.5)*h.
CellRange cell_bounding_box(const Grid& g, const Pt& x0, double r) {
  CellRange cr{};
  auto clamp_cell = [&](int axis, double coord) {
    const double s = (coord - g.low(axis)) / g.h(axis) - 0.5;
    return std::clamp(static_cast<int>(std::floor(s)), 0, g.n(axis));
  };
  cr.kx0 = clamp_cell(0, x0.x - r);
  cr.kx1 = clamp_cell(0, x0.x + r) + 1;
  cr.kx1 = std::min(cr.kx1, g.n(0));
  if (g.dim() == 2) {
    cr.ky0 = clamp_cell(1, x0.y - r);
    cr.ky1 = std::min(clamp_cell(1, x0.y + r) + 1, g.n(1));
  } else {
    cr.ky0 = cr.ky1 = 0;
  }
  cr.width = cr.kx1 - cr.kx0 + 1;
  cr.count = static_cast<long>(cr.width) * (cr.ky1 - cr.ky0 + 1);
  return cr;
}

}  // namespace

double ball_integral(const ScalarField& f, const Pt& x0, double r) {
  const Grid& g = f.grid;
  require_ball_inside(g, x0, r);
  const CellRange cr = cell_bounding_box(g, x0, r);
  const double w = g.dim() == 2 ? g.h(0) * g.h(1) : g.h(0);
  const double r2 = r * r;
  double acc = kernels::parallel_sum(cr.count, [&](long k) {
    const int kx = cr.kx0 + static_cast<int>(k % cr.width);
    const int ky = cr.ky0 + static_cast<int>(k / cr.width);
    const double cx = g.low(0) + (kx + 0.5) * g.h(0);
    const double cy = g.dim() == 2 ? g.low(1) + (ky + 0.5) * g.h(1) : 0.0;
    const double dx = cx - x0.x, dy = g.dim() == 2 ? cy - x0.y : 0.0;
    if (dx * dx + dy * dy > r2) return 0.0;
    return f.interp(Pt{cx, cy});
  });
  return acc * w;
}

double ball_integral_serial(const ScalarField& f, const Pt& x0, double r) {
  const Grid& g = f.grid;
  require_ball_inside(g, x0, r);
  const CellRange cr = cell_bounding_box(g, x0, r);
  const double w = g.dim() == 2 ? g.h(0) * g.h(1) : g.h(0);
  const double r2 = r * r;
  double acc = 0.0;
  for (int ky = cr.ky0; ky <= cr.ky1; ++ky)
    for (int kx = cr.kx0; kx <= cr.kx1; ++kx) {
      const double cx = g.low(0) + (kx + 0.5) * g.h(0);
      const double cy = g.dim() == 2 ? g.low(1) + (ky + 0.5) * g.h(1) : 0.0;
      const double dx = cx - x0.x, dy = g.dim() == 2 ? cy - x0.y : 0.0;
      if (dx * dx + dy * dy <= r2) acc += f.interp(Pt{cx, cy});
    }
  return acc * w;
}

double sphere_integral(const ScalarField& f, const Pt& x0, double r) {
  const Grid& g = f.grid;
  require_ball_inside(g, x0, r);
  require_radius_resolved(g, r);
  return circle_eval_integral(g, x0, r, [&](const Pt& p) { return f.interp(p); },
                              64, 1.0);
}

}  // namespace seglab
