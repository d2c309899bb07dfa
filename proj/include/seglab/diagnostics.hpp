#pragma once

#include <string>
#include <vector>

#include "seglab/forcing.hpp"
#include "seglab/grid.hpp"
#include "seglab/grouping.hpp"

namespace seglab {

// Axis-aligned sub-rectangle of the domain (in 1D only the x range is used).
struct Window {
  double xlo = 0.0, xhi = 0.0;
  double ylo = 0.0, yhi = 0.0;
};

struct AlmgrenSample {
  Pt x0;
  double r = 0.0;
  double H = 0.0;
  double E = 0.0;
  double N = 0.0;       // meaningful only when n_defined
  bool n_defined = false;  // H > 0
};

enum class AlmgrenMode { Limit, WithForcing };

struct FrequencyCurve {
  Pt x0;
  std::vector<AlmgrenSample> samples;
  double C = 0.0;       // constant used in e^{C r^2}(N+1)
  double defect = 0.0;  // max positive drop of e^{C r^2}(N+1) between
                        // consecutive radii (0 when perfectly nondecreasing)
  long undefined_samples = 0;
};

struct SignCheckResult {
  long checked = 0;     // (node, component) pairs examined
  long violations = 0;  // pairs with -lap(u_i) - f_i above tolerance
  double worst = 0.0;   // largest positive excess seen
};

// Derivative field with a smoothness-selected stencil: per node the centered
// and the two one-sided second-order differences compete and the one whose
// stencil has the smallest second difference wins, so one-sided kinks along
// nodal rays do not pollute nodal values by O(1). Used by the Almgren,
// Pohozaev, and free-boundary gradient probes; the plain gradient op keeps
// fixed stencils.
ScalarField smooth_side_derivative(const ScalarField& u, int axis);

// sup over sampled node pairs of |u_i(x)-u_i(y)| / |x-y|^alpha. Pairs are
// taken at dyadic separations along axis and diagonal directions from every
// window node (all pairs in 1D).
double holder_seminorm(const FieldSet& f, int i, double alpha,
                       const Window& w);

// beta * a_ij * integral over the window of |u_i|^{p+1} |u_j|^{p+1}
// (midpoint rule over cells with centers inside the window).
double interaction_energy(const FieldSet& f, double beta, double p,
                          const CouplingMatrix& A, int i, int j,
                          const Window& w);

// max over cross-group pairs (i<j) and nodes of |u_i u_j|.
double segregation_sup(const FieldSet& f, const Decomposition& dec);

// Precomputes per-component gradient fields once so that many (x0, r)
// samples of the same FieldSet stay cheap (classification sweeps take
// hundreds of them).
class AlmgrenEvaluator {
 public:
  AlmgrenEvaluator(const FieldSet& f, const ForcingSpec& forcing, double p,
                   AlmgrenMode mode);
  AlmgrenSample sample(const Pt& x0, double r) const;
  const FieldSet& field() const { return f_; }

 private:
  const FieldSet& f_;
  const ForcingSpec& forcing_;
  double p_;
  AlmgrenMode mode_;
  std::vector<std::vector<ScalarField>> grads_;  // [component][axis]
};

// Almgren frequency sample at (x0, r): H = r^{1-dim} * boundary mass,
// E = r^{2-dim} * Dirichlet energy (minus forcing work in WithForcing mode),
// N = E/H when H > 0.
AlmgrenSample almgren(const FieldSet& f, const ForcingSpec& forcing, double p,
                      const Pt& x0, double r, AlmgrenMode mode);

// Samples almgren over ascending radii and reports the monotonicity defect
// of e^{C r^2}(N+1). C < 0 requests the built-in estimate from the forcing
// family's linear-growth bound; C >= 0 is used as given.
FrequencyCurve frequency_curve(const FieldSet& f, const ForcingSpec& forcing,
                               double p, const Pt& x0,
                               const std::vector<double>& radii,
                               AlmgrenMode mode, double C = -1.0);

/// |LHS - RHS| of the Pohozaev balance on B_r(x0):
//   (2-dim) sum_i int |grad u_i|^2
//     = r sum_i oint (2 (du_i/dnu)^2 - |grad u_i|^2)
//       + 2 sum_i int f_i(x,u) grad u_i . (x - x0),
// with f_i the full right-hand side of the equation the fields solve. Pass
// beta and the coupling matrix so the competition term enters the work
// integral; omit them for fields solving a plain -lap u = f.
double pohozaev_residual(const FieldSet& f, const ForcingSpec& forcing,
                         double p, const Pt& x0, double r, double beta = 0.0,
                         const CouplingMatrix* coupling = nullptr);

// (1/r^dim) sum_i int_{B_r(x0)} |grad u_i|^2 by the cell-counting rule.
double morrey_quotient(const FieldSet& f, const Pt& x0, double r);

// Checks -lap(u_i) - f_i(x,u) <= tol (tol = 10 h max|u|) at interior nodes
// in the delta-band of the common zero set (max_i |u_i| <= delta max|u|),
// skipping components that go negative in the surrounding stencil.
SignCheckResult measure_sign_check(const FieldSet& f,
                                   const ForcingSpec& forcing, double p,
                                   const Decomposition& dec, double delta);

struct PairEnergy {
  int i = 0, j = 0;
  double value = 0.0;
};

struct ProbeValue {
  Pt x0;
  double r = 0.0;
  double value = 0.0;
};

struct DiagnosticsReport {
  double beta = 0.0;
  std::string config_hash;
  std::vector<std::pair<double, double>> holder;  // (alpha, seminorm)
  std::vector<PairEnergy> interactions;
  double seg_sup = 0.0;
  std::vector<FrequencyCurve> curves;
  std::vector<ProbeValue> pohozaev;
  std::vector<ProbeValue> morrey;
  SignCheckResult sign_check;
};

}  // namespace seglab
