#pragma once

#include <string>
#include <vector>

#include "seglab/config.hpp"
#include "seglab/freeboundary.hpp"
#include "seglab/io.hpp"

namespace seglab {

// The per-beta diagnostics block exactly as run_experiment reports it, so
// the standalone diagnose path and the full pipeline share one code path.
// Infeasible probe radii (ball not inside the domain) are skipped and listed
// in `notes`.
DiagnosticsReport diagnose_fields(const ExperimentConfig& cfg,
                                  const FieldSet& f, double beta,
                                  std::vector<std::string>* notes = nullptr);

struct ClassifyOutput {
  NodalSet nodal;
  std::vector<BoundaryPointClass> points;
  std::string note;  // nonempty when nothing was classifiable
};

ClassifyOutput classify_fields(const ExperimentConfig& cfg, const FieldSet& f);

// Full pipeline: beta sweep, per-beta dumps + diagnostics, final-beta
// classification, CSVs, SVGs, report.txt under cfg.out_dir. Returns the
// process exit code: 0 success, 2 any non-converged solve (artifacts still
// written, FAILED marker added), 1 unusable output directory or hard error.
int run_experiment(const ExperimentConfig& cfg, const std::string& config_text,
                   bool quiet);

}  // namespace seglab
