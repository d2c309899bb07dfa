#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seglab/diagnostics.hpp"
#include "seglab/freeboundary.hpp"
#include "seglab/grid.hpp"
#include "seglab/grouping.hpp"
#include "seglab/solver.hpp"

namespace seglab {

// Scientific notation with 9 significant digits, the dump/CSV number format.
std::string format_sci(double v);

// Plain-text field dump: header `# grid dim=<1|2> n=<..> extent=<..> d=<..>`,
// then one `# component <i>` block per component with one row per grid line
// (boundary nodes included).
void dump_fields(const FieldSet& f, const std::string& path);
FieldSet load_fields(const std::string& path);  // IoError on malformed input

struct ConvergenceRow {
  double beta = 0.0;
  long iters = 0;
  double final_residual = 0.0;
  bool converged = false;
};

void write_convergence_csv(const std::vector<ConvergenceRow>& rows,
                           const std::string& path);

// `x0,r,H,E,N`; 2D x0 serialized as x:y; undefined N printed as "undefined".
void write_frequency_csv(const std::vector<FrequencyCurve>& curves, int dim,
                         const std::string& path);

// `beta,alpha,holder,seg_sup,interaction_<i>_<j>,...` one row per
// (beta, alpha); interaction columns are beta * window integral, one per
// cross-group pair in lexicographic order.
std::string sweep_diag_csv(const std::vector<DiagnosticsReport>& reports,
                           const Decomposition& dec);
void write_sweep_diag_csv(const std::vector<DiagnosticsReport>& reports,
                          const Decomposition& dec, const std::string& path);

// `x,y,N_hat,class,Gplus,Gminus,nu_x,nu_y`.
void write_classification_csv(const std::vector<BoundaryPointClass>& rows,
                              const std::string& path, const std::string& note);

// Nodal set as a flat `x,y` point list.
void write_nodal_csv(const NodalSet& ns, const std::string& path);

std::uint64_t fnv1a(const std::string& bytes);

}  // namespace seglab
