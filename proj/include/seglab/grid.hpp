#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "seglab/errors.hpp"

namespace seglab {

struct Pt {
  double x = 0.0;
  double y = 0.0;  // ignored in 1D
};

// Rectangular grid with n interior nodes per axis and Dirichlet boundary
// nodes at the ends: node k of axis a sits at low + k*h, k = 0..n+1, where
// h = (high-low)/(n+1). Node 0 and n+1 carry the boundary trace.
class Grid {
public:
  Grid() = default;
  Grid(int dim, std::array<double, 2> low, std::array<double, 2> high,
       std::array<int, 2> n);

  static Grid make_1d(double low, double high, int n);
  static Grid make_2d(std::array<double, 2> low, std::array<double, 2> high,
                      std::array<int, 2> n);

  int dim() const { return dim_; }
  int n(int axis) const { return n_[axis]; }
  double low(int axis) const { return low_[axis]; }
  double high(int axis) const { return high_[axis]; }
  double h(int axis) const { return h_[axis]; }
  double hmax() const { return dim_ == 2 ? std::max(h_[0], h_[1]) : h_[0]; }
  double hmin() const { return dim_ == 2 ? std::min(h_[0], h_[1]) : h_[0]; }

  int nx_total() const { return n_[0] + 2; }
  int ny_total() const { return dim_ == 2 ? n_[1] + 2 : 1; }
  long num_total() const { return static_cast<long>(nx_total()) * ny_total(); }

  // Exact at both ends so boundary traces and face interpolation round-trip.
  double coord(int axis, int k) const {
    return k == n_[axis] + 1 ? high_[axis] : low_[axis] + k * h_[axis];
  }
  Pt node(int ix, int iy) const {
    return {coord(0, ix), dim_ == 2 ? coord(1, iy) : 0.0};
  }
  long idx(int ix, int iy) const { return static_cast<long>(iy) * nx_total() + ix; }

  bool same_shape(const Grid& o) const;
  // Distance from p to the domain boundary (0 outside).
  double boundary_distance(const Pt& p) const;
  // Interior node nearest to p, clamped to the interior index range.
  void nearest_interior_node(const Pt& p, int& ix, int& iy) const;

private:
  int dim_ = 1;
  std::array<double, 2> low_{0.0, 0.0}, high_{1.0, 1.0};
  std::array<int, 2> n_{8, 8};
  std::array<double, 2> h_{0.0, 0.0};
};

// One scalar quantity sampled on every node of a grid (boundary included).
struct ScalarField {
  Grid grid;
  std::vector<double> v;

  ScalarField() = default;
  explicit ScalarField(const Grid& g, double fill = 0.0)
      : grid(g), v(g.num_total(), fill) {}

  double& at(int ix, int iy) { return v[grid.idx(ix, iy)]; }
  double at(int ix, int iy) const { return v[grid.idx(ix, iy)]; }

  // Bilinear (linear in 1D) interpolation; p must lie inside the domain
  // closure (clamped against roundoff at the edges).
  double interp(const Pt& p) const;

  double max_abs() const;
  bool all_finite() const;
};

// d scalar fields over one grid; component index 1-based.
struct FieldSet {
  Grid grid;
  std::vector<ScalarField> comp_;  // 0-based storage

  FieldSet() = default;
  FieldSet(const Grid& g, int d) : grid(g), comp_(d, ScalarField(g)) {}

  int d() const { return static_cast<int>(comp_.size()); }
  ScalarField& comp(int i) { return comp_[check(i)]; }
  const ScalarField& comp(int i) const { return comp_[check(i)]; }

  double max_abs() const;
  void require_finite(const char* where) const;

private:
  int check(int i) const {
    require(i >= 1 && i <= d(), ErrorKind::IndexOutOfRange,
            "component index out of range");
    return i - 1;
  }
};

// Laplacian by the centered 3/5-point stencil at interior nodes, using the
// boundary trace next to the edges. Boundary entries of the result are 0.
ScalarField laplacian(const FieldSet& f, int i);

// Gradient: centered differences at interior nodes; at nodes adjacent to the
// boundary (and at boundary nodes themselves) second-order one-sided
// differences that do not reach across the domain edge.
std::vector<ScalarField> gradient(const FieldSet& f, int i);

// Sum over components of |grad u_i|^2, as a field (same stencils).
ScalarField gradient_square_sum(const FieldSet& f);

}  // namespace seglab
