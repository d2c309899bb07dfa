#pragma once

#include <cmath>

#include "seglab/grid.hpp"
#include "seglab/kernels.hpp"

namespace seglab {

inline constexpr double kPi = 3.14159265358979323846;

// B_r(x0) must sit inside the domain with a margin of `cells` grid spacings.
void require_ball_inside(const Grid& g, const Pt& x0, double r, double cells = 2.0);
void require_radius_resolved(const Grid& g, double r, double cells = 3.0);

// Midpoint sum over grid cells whose centers lie in B_r(x0), weight h^dim.
double ball_integral(const ScalarField& f, const Pt& x0, double r);
// Naive single-loop version, kept as the reference for the parallel kernel.
double ball_integral_serial(const ScalarField& f, const Pt& x0, double r);

// 2D: trapezoid over max(64, ceil(2*pi*r/h)) equally spaced angles with
// bilinear interpolation; 1D: f(x0-r) + f(x0+r).
double sphere_integral(const ScalarField& f, const Pt& x0, double r);

// Circle integral of a callable Pt -> double at radius s (includes the arc
// length factor in 2D; two-point sum in 1D). `oversample` refines the angular
// step below h/oversample.
template <class F>
double circle_eval_integral(const Grid& g, const Pt& x0, double s, F&& eval,
                            int min_angles = 64, double oversample = 1.0) {
  if (g.dim() == 1) return eval(Pt{x0.x - s, 0.0}) + eval(Pt{x0.x + s, 0.0});
  if (s <= 0.0) return 0.0;
  const double step = g.hmin() / oversample;
  long M = static_cast<long>(std::ceil(2.0 * kPi * s / step));
  M = std::max<long>(M, min_angles);
  const double dtheta = 2.0 * kPi / static_cast<double>(M);
  const double w = s * dtheta;
  double acc = kernels::parallel_sum(M, [&](long k) {
    const double th = dtheta * static_cast<double>(k);
    return eval(Pt{x0.x + s * std::cos(th), x0.y + s * std::sin(th)});
  });
  return acc * w;
}

// Ball integral of a callable via radial shells: composite trapezoid in the
// radius of circle integrals, shell spacing about h/2. Smooth in r, which the
// frequency-curve monotonicity checks rely on (the cell-counting rule above
// has O(h/r) lattice noise at small radii).
template <class F>
double shell_ball_integral(const Grid& g, const Pt& x0, double r, F&& eval) {
  const long J = std::max<long>(8, static_cast<long>(std::ceil(2.0 * r / g.hmin())));
  const double ds = r / static_cast<double>(J);
  double acc = 0.0;
  for (long j = 0; j <= J; ++j) {
    const double s = ds * static_cast<double>(j);
    const double S = circle_eval_integral(g, x0, s, eval, 32, 4.0);
    acc += (j == 0 || j == J) ? 0.5 * S : S;
  }
  return acc * ds;
}

}  // namespace seglab
