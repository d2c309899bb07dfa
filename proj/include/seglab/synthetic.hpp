#pragma once

#include <utility>

#include "seglab/grid.hpp"

namespace seglab {

// Analytic model fields used by the diagnostics and classification tests.
// Every generator snaps the requested center to the nearest grid node so the
// profile's distinguished point coincides with a node, and samples the
// profile at all nodes including the boundary trace.

Pt snap_to_node(const Grid& g, const Pt& center);

// Evaluate fn at every node (boundary included) into component i.
template <class F>
void fill_component(FieldSet& f, int i, F&& fn) {
  ScalarField& u = f.comp(i);
  const Grid& g = f.grid;
  for (int iy = 0; iy < g.ny_total(); ++iy)
    for (int ix = 0; ix < g.nx_total(); ++ix)
      u.at(ix, iy) = fn(g.node(ix, iy));
}

// Single component u = slope * ((x - c) . e); e is normalized internally.
FieldSet synth_linear(const Grid& g, double slope, const Pt& e,
                      const Pt& center);

// Two components u1 = s_plus * ((x-c).nu)^+, u2 = s_minus * ((x-c).nu)^-,
// the one-dimensional kink profile (also usable on 2D grids).
FieldSet synth_kink_pair(const Grid& g, const Pt& nu, double s_plus,
                         double s_minus, const Pt& center);

// 2D only: three components on consecutive 2pi/3 sectors around the center,
// component k = r^{3/2} sin(3/2 (theta - sector start)) inside its sector
// and 0 elsewhere. Homogeneous of degree 3/2, harmonic inside each sector.
FieldSet synth_triple_junction(const Grid& g, const Pt& center);

// 2D only: two components splitting |x1 x2| (relative to the center) over
// alternating quadrants; homogeneous of degree 2 with 4 nodal rays.
FieldSet synth_four_sector(const Grid& g, const Pt& center);

}  // namespace seglab
