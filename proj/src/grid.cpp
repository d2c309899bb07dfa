#include "seglab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace seglab {

Grid::Grid(int dim, std::array<double, 2> low, std::array<double, 2> high,
           std::array<int, 2> n)
    : dim_(dim), low_(low), high_(high), n_(n) {
  require(dim_ == 1 || dim_ == 2, ErrorKind::InvalidGrid, "dim must be 1 or 2");
  for (int a = 0; a < dim_; ++a) {
    require(std::isfinite(low_[a]) && std::isfinite(high_[a]) && high_[a] > low_[a],
            ErrorKind::InvalidGrid, "degenerate extent on axis " + std::to_string(a));
    require(n_[a] >= 8, ErrorKind::InvalidGrid,
            "need at least 8 interior nodes per axis, got " + std::to_string(n_[a]));
    h_[a] = (high_[a] - low_[a]) / (n_[a] + 1);
  }
  if (dim_ == 1) {
    n_[1] = 0;
    h_[1] = 0.0;
    low_[1] = high_[1] = 0.0;
  }
}

Grid Grid::make_1d(double low, double high, int n) {
  return Grid(1, {low, 0.0}, {high, 0.0}, {n, 0});
}

Grid Grid::make_2d(std::array<double, 2> low, std::array<double, 2> high,
                   std::array<int, 2> n) {
  return Grid(2, low, high, n);
}

bool Grid::same_shape(const Grid& o) const {
  if (dim_ != o.dim_) return false;
  for (int a = 0; a < dim_; ++a)
    if (n_[a] != o.n_[a] || low_[a] != o.low_[a] || high_[a] != o.high_[a])
      return false;
  return true;
}

double Grid::boundary_distance(const Pt& p) const {
  double d = std::min(p.x - low_[0], high_[0] - p.x);
  if (dim_ == 2) d = std::min({d, p.y - low_[1], high_[1] - p.y});
  return d;
}

void Grid::nearest_interior_node(const Pt& p, int& ix, int& iy) const {
  ix = static_cast<int>(std::lround((p.x - low_[0]) / h_[0]));
  ix = std::clamp(ix, 1, n_[0]);
  iy = 0;
  if (dim_ == 2) {
    iy = static_cast<int>(std::lround((p.y - low_[1]) / h_[1]));
    iy = std::clamp(iy, 1, n_[1]);
  }
}

double ScalarField::interp(const Pt& p) const {
  const Grid& g = grid;
  const double sx = std::clamp((p.x - g.low(0)) / g.h(0), 0.0,
                               static_cast<double>(g.n(0) + 1));
  int kx = std::min(static_cast<int>(sx), g.n(0));
  const double tx = sx - kx;
  if (g.dim() == 1) return (1.0 - tx) * at(kx, 0) + tx * at(kx + 1, 0);

  const double sy = std::clamp((p.y - g.low(1)) / g.h(1), 0.0,
                               static_cast<double>(g.n(1) + 1));
  int ky = std::min(static_cast<int>(sy), g.n(1));
  const double ty = sy - ky;
  const double f00 = at(kx, ky), f10 = at(kx + 1, ky);
  const double f01 = at(kx, ky + 1), f11 = at(kx + 1, ky + 1);
  return (1.0 - ty) * ((1.0 - tx) * f00 + tx * f10) +
         ty * ((1.0 - tx) * f01 + tx * f11);
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

bool ScalarField::all_finite() const {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

double FieldSet::max_abs() const {
  double m = 0.0;
  for (const auto& c : comp_) m = std::max(m, c.max_abs());
  return m;
}

void FieldSet::require_finite(const char* where) const {
  for (const auto& c : comp_)
    require(c.all_finite(), ErrorKind::NonFiniteField,
            std::string("non-finite value in ") + where);
}

ScalarField laplacian(const FieldSet& f, int i) {
  const ScalarField& u = f.comp(i);
  const Grid& g = f.grid;
  ScalarField out(g, 0.0);
  const double ihx2 = 1.0 / (g.h(0) * g.h(0));
  if (g.dim() == 1) {
    for (int ix = 1; ix <= g.n(0); ++ix)
      out.at(ix, 0) = (u.at(ix - 1, 0) - 2.0 * u.at(ix, 0) + u.at(ix + 1, 0)) * ihx2;
    return out;
  }
  const double ihy2 = 1.0 / (g.h(1) * g.h(1));
  for (int iy = 1; iy <= g.n(1); ++iy)
    for (int ix = 1; ix <= g.n(0); ++ix)
      out.at(ix, iy) =
          (u.at(ix - 1, iy) - 2.0 * u.at(ix, iy) + u.at(ix + 1, iy)) * ihx2 +
          (u.at(ix, iy - 1) - 2.0 * u.at(ix, iy) + u.at(ix, iy + 1)) * ihy2;
  return out;
}

namespace {

// d/dx along a grid line: centered in the interior, second-order one-sided
// at the first/last interior node and at the boundary nodes, never reaching
// across the domain edge.
inline double line_deriv(const ScalarField& u, int axis, int ix, int iy, int n,
                         double h) {
  const int k = axis == 0 ? ix : iy;
  auto val = [&](int kk) { return axis == 0 ? u.at(kk, iy) : u.at(ix, kk); };
  if (k >= 2 && k <= n - 1) return (val(k + 1) - val(k - 1)) / (2.0 * h);
  if (k <= 1) return (-3.0 * val(k) + 4.0 * val(k + 1) - val(k + 2)) / (2.0 * h);
  return (3.0 * val(k) - 4.0 * val(k - 1) + val(k - 2)) / (2.0 * h);
}

}  // namespace

std::vector<ScalarField> gradient(const FieldSet& f, int i) {
  const ScalarField& u = f.comp(i);
  const Grid& g = f.grid;
  std::vector<ScalarField> out(g.dim(), ScalarField(g, 0.0));
  for (int iy = 0; iy < g.ny_total(); ++iy)
    for (int ix = 0; ix < g.nx_total(); ++ix) {
      out[0].at(ix, iy) = line_deriv(u, 0, ix, iy, g.n(0), g.h(0));
      if (g.dim() == 2) out[1].at(ix, iy) = line_deriv(u, 1, ix, iy, g.n(1), g.h(1));
    }
  return out;
}

ScalarField gradient_square_sum(const FieldSet& f) {
  const Grid& g = f.grid;
  ScalarField out(g, 0.0);
  for (int i = 1; i <= f.d(); ++i) {
    auto gr = gradient(f, i);
    for (long k = 0; k < g.num_total(); ++k) {
      double s = gr[0].v[k] * gr[0].v[k];
      if (g.dim() == 2) s += gr[1].v[k] * gr[1].v[k];
      out.v[k] += s;
    }
  }
  return out;
}

}  // namespace seglab
