#pragma once

#include <array>
#include <vector>

#include "seglab/diagnostics.hpp"
#include "seglab/grid.hpp"
#include "seglab/grouping.hpp"

namespace seglab {

enum class NodalVariant { Full, GroupWise };

struct NodalSet {
  std::vector<Pt> points;                  // node coordinates
  std::vector<std::array<int, 2>> nodes;   // matching (ix, iy) indices
  NodalVariant variant = NodalVariant::Full;
  double delta = 0.0;
  bool degenerate_all_zero = false;  // the whole field vanishes
};

// Full: nodes where max_i |u_i| <= delta * max-norm of f.
// GroupWise: nodes not interior (8-neighbor sense, after one dilation) to any
// region where some group's sum of squares exceeds (delta * max-norm)^2.
NodalSet extract_nodal_set(const FieldSet& f, const Decomposition& dec,
                           double delta, NodalVariant variant);

// v_i(x) = u_i(x0 + t x) / sqrt(H(x0, t)) sampled by bilinear interpolation
// onto a fixed reference grid over [-2,2]^dim (127 interior nodes per axis).
FieldSet blowup(const FieldSet& f, const Pt& x0, double t);

struct FrequencyEstimate {
  double N_hat = 0.0;                   // fitted N(x0, 0+)
  std::vector<AlmgrenSample> samples;   // raw N(r) at the probe radii
};

// Samples N(x0, r) at r in {3h, 4h, 6h, 8h, 12h, 16h} (those fitting in the
// domain) and extrapolates a linear fit N(r) = N0 + c r over the three
// smallest to r = 0. x0 must be at least 10h from the boundary.
FrequencyEstimate estimate_frequency_limit(const FieldSet& f, const Pt& x0);
// Same, reusing a prepared evaluator (classification sweeps).
FrequencyEstimate estimate_frequency_limit(const AlmgrenEvaluator& ev,
                                           const Pt& x0);

enum class PointClass { Regular, Singular, Indeterminate };

struct BoundaryPointClass {
  Pt x0;
  double N_hat = 0.0;
  PointClass cls = PointClass::Indeterminate;
  double g_plus = 0.0;   // dominant-group |grad|^2 on the +nu side (Regular)
  double g_minus = 0.0;  // same on the -nu side (Regular)
  Pt normal;             // unit normal estimate (Regular)
  std::vector<AlmgrenSample> samples;
};

// Frequency-gap classification at a nodal-set node: Regular below the gap
// threshold, Singular above, Indeterminate inside the +-0.05 dead band.
// Regular points also carry side gradients (probed at 4h) and a unit normal
// from grad(|u^h| - |u^k|) of the two dominant groups.
BoundaryPointClass classify_point(const FieldSet& f, const Decomposition& dec,
                                  const Pt& x0, double gap_threshold = 1.25);

// Classifies every point of a nodal set, sharing one evaluator.
std::vector<BoundaryPointClass> classify_nodal_set(
    const FieldSet& f, const Decomposition& dec, const NodalSet& ns,
    double gap_threshold = 1.25);

// |G+ - G-| / max(G+, G-) where G+- are the dominant groups' sums of
// |grad u_i|^2 at x0 +- s nu. s must lie in [2h, 8h].
double reflection_residual(const FieldSet& f, const Decomposition& dec,
                           const BoundaryPointClass& x0, double s);

// For each radius, max over nodes in B_r(x0) of sum_i |grad u_i|^2; the
// caller asserts decrease toward 0 (Singular points only).
std::vector<double> gradient_vanishing_check(const FieldSet& f,
                                             const BoundaryPointClass& x0,
                                             const std::vector<double>& radii);

struct AngleCheck {
  std::vector<double> rays;  // ray angles in [0, 2pi), ascending
  double max_deviation = 0.0;  // max |consecutive gap - 2pi/k|
};

// On the circle of radius 8h around a 2D Singular point, finds the angular
// intervals where every group's mass falls below 2% of the circle's peak and
// reports their midpoints as rays plus the deviation from equal spacing.
AngleCheck equal_angles_check(const FieldSet& f, const Decomposition& dec,
                              const BoundaryPointClass& x0);

}  // namespace seglab
