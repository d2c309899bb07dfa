#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "seglab/diagnostics.hpp"
#include "seglab/forcing.hpp"
#include "seglab/grid.hpp"
#include "seglab/grouping.hpp"
#include "seglab/solver.hpp"

namespace seglab {

// Boundary trace of one component, from the closed function list. All
// families are evaluated at boundary nodes only.
struct BoundaryFn {
  enum class Kind { Const, Edges, Affine, Sine, Ramp };
  Kind kind = Kind::Const;
  // Const:  value = a.
  // Edges:  per-edge constants a(left) b(right) c(bottom) d(top).
  // Affine: a + b*x1 + c*x2.
  // Sine:   a * sin(b * pi * t), t = normalized coordinate along `axis`.
  // Ramp:   0 for t < a, 1 for t > b, linear between; t = coordinate `axis`.
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
  int axis = 0;
};

double eval_boundary(const BoundaryFn& fn, const Grid& g, const Pt& p);

struct ExperimentConfig {
  // [grid]
  int dim = 1;
  std::array<int, 2> n = {63, 63};
  std::array<double, 2> low = {0.0, 0.0};
  std::array<double, 2> high = {1.0, 1.0};

  // [components]
  int d = 1;
  std::vector<int> breakpoints;  // a_0 .. a_m

  // [coupling] (defaults to 1 on cross-group pairs)
  std::vector<double> coupling;  // row-major d*d, empty = default

  // [forcing]
  ForcingFamily family = ForcingFamily::Zero;
  std::vector<double> lambda;
  std::vector<double> b;  // row-major d*d for grouped_power

  // [solver]
  double p = 1.0;
  double tol = 1e-9;
  double omega = 0.8;
  long max_iters = 50000;
  bool multigrid = true;
  std::uint64_t seed = 0;

  // [sweep]
  std::vector<double> schedule;  // ascending beta values
  bool warm_start = true;

  // [boundary] one entry per component (default: zero trace)
  std::vector<BoundaryFn> boundary;

  // [diagnostics]
  Window window;  // default: middle half of the domain
  std::vector<double> alphas = {0.5};
  std::vector<Pt> probes;        // default: domain center
  std::vector<double> radii;     // default: {0.25, 0.5, 1.0} * min_extent/4
  bool classification = false;
  double delta = 0.1;            // nodal-band threshold

  // [output]
  std::string out_dir = "out";

  // Factories onto the core modules (config must be valid).
  Grid make_grid() const;
  Decomposition make_decomposition() const;
  CouplingMatrix make_coupling() const;
  ForcingSpec make_forcing() const;
  FieldSet make_boundary_fields(const Grid& g) const;
  SolveConfig make_solve_config(double beta) const;
};

struct ConfigIssue {
  int line = 0;  // 0 = whole-config (semantic) issue
  bool semantic = false;
  std::string message;
};

struct ParseOutcome {
  ExperimentConfig config;
  std::vector<ConfigIssue> issues;
  bool ok() const { return issues.empty(); }
};

// Parses and cross-validates; collects every issue instead of stopping at
// the first. config is usable only when ok().
ParseOutcome parse_config(const std::string& text);
ParseOutcome parse_config_file(const std::string& path);

}  // namespace seglab
