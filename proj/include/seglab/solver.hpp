#pragma once

#include <cstdint>
#include <vector>

#include "seglab/forcing.hpp"
#include "seglab/grid.hpp"
#include "seglab/grouping.hpp"

namespace seglab {

struct SolveConfig {
  double beta = 0.0;
  double p = 1.0;
  double tol = 1e-9;        // relative max-norm residual
  long max_iters = 50000;   // cap on fine-level smoothing sweeps
  double damping = 0.8;     // omega, halved on residual increase (up to 4x)
  double eps = 1e-12;       // |u|^{p-1} regularization
  std::uint64_t seed = 0;   // initialization jitter

  // Nonlinear multigrid (FAS) wrapping the Gauss-Seidel smoother; false runs
  // the literal single-level iteration (reference/testing).
  bool multigrid = true;
  int pre_sweeps = 2;
  int post_sweeps = 2;
  int coarse_sweeps = 40;

  void validate() const;
};

struct ConvergenceRecord {
  long iters = 0;               // fine-level smoothing sweeps performed
  double final_residual = 0.0;  // relative: max|R| / (1 + max|u|)
  bool converged = false;
  bool diverged = false;        // NaN/Inf encountered; best iterate returned
};

struct SolveResult {
  FieldSet fields;
  ConvergenceRecord rec;
};

// Nonlinear operator A(u)_i = -Lap u_i - f_i(x,u)
//                             + beta sum_{j != i} a_ij u_i|u_i|^{p-1}|u_j|^{p+1}
// evaluated at interior nodes (boundary entries 0). A solution has A(u) = 0,
// so this is also the residual of the discrete system.
FieldSet residual(const FieldSet& f, const SolveConfig& cfg,
                  const CouplingMatrix& A, const ForcingSpec& forcing);
// Same, single-threaded naive loop (reference for the parallel kernel).
FieldSet residual_serial(const FieldSet& f, const SolveConfig& cfg,
                         const CouplingMatrix& A, const ForcingSpec& forcing);
double residual_max_norm(const FieldSet& f, const SolveConfig& cfg,
                         const CouplingMatrix& A, const ForcingSpec& forcing);

// Harmonic extension of the boundary data (beta = 0, forcing off) plus
// seeded uniform jitter of amplitude 0.01 * max|boundary|.
FieldSet default_init(const Grid& grid, const FieldSet& boundary,
                      const SolveConfig& cfg);

// boundary: FieldSet whose boundary entries carry the Dirichlet trace
// (interior entries ignored). init = nullptr uses default_init.
SolveResult solve(const Grid& grid, const FieldSet& boundary,
                  const SolveConfig& cfg, const Decomposition& dec,
                  const CouplingMatrix& A, const ForcingSpec& forcing,
                  const FieldSet* init = nullptr);

struct SweepEntry {
  double beta = 0.0;
  SolveResult result;
  bool warm_started = false;
  bool restarted_from_default = false;  // previous entry failed
};

std::vector<SweepEntry> beta_sweep(const Grid& grid, const FieldSet& boundary,
                                   const SolveConfig& base,
                                   const Decomposition& dec,
                                   const CouplingMatrix& A,
                                   const ForcingSpec& forcing,
                                   const std::vector<double>& schedule);

}  // namespace seglab
