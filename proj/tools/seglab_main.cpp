#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "seglab/config.hpp"
#include "seglab/errors.hpp"
#include "seglab/io.hpp"
#include "seglab/runner.hpp"
#include "seglab/svg.hpp"
#include "seglab/synthetic.hpp"

#ifdef SEGLAB_HAVE_OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using namespace seglab;

namespace {

int report_issues(const std::string& path, const ParseOutcome& out) {
  for (const ConfigIssue& is : out.issues) {
    std::cerr << path;
    if (is.line > 0) std::cerr << ":" << is.line;
    std::cerr << ": " << (is.semantic ? "semantic" : "syntax") << ": "
              << is.message << "\n";
  }
  return out.ok() ? 0 : 1;
}

// Parse + cross-validate, apply the --out override, make the output dir.
bool load_config(const std::string& path, const std::string& out_override,
                 ExperimentConfig& cfg, std::string& text) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open config file: " << path << "\n";
    return false;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  text = ss.str();
  ParseOutcome out = parse_config(text);
  if (report_issues(path, out) != 0) return false;
  cfg = out.config;
  if (!out_override.empty()) cfg.out_dir = out_override;
  return true;
}

bool prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path probe = fs::path(dir) / ".write_probe";
  std::ofstream p(probe);
  p << "x";
  p.flush();
  const bool ok = static_cast<bool>(p);
  p.close();
  fs::remove(probe, ec);
  if (!ok) std::cerr << "error: output directory not writable: " << dir << "\n";
  return ok;
}

// Shared by `solve` and `sweep`: runs the solves, dumps fields and the
// convergence CSV, marks FAILED on non-convergence.
int solve_stage(const ExperimentConfig& cfg, bool whole_schedule, bool quiet) {
  if (!prepare_out_dir(cfg.out_dir)) return 1;
  const fs::path dir(cfg.out_dir);
  Grid g = cfg.make_grid();
  Decomposition dec = cfg.make_decomposition();
  CouplingMatrix A = cfg.make_coupling();
  ForcingSpec forcing = cfg.make_forcing();
  FieldSet bc = cfg.make_boundary_fields(g);

  std::vector<SweepEntry> entries;
  if (!whole_schedule) {
    SweepEntry e;
    e.beta = cfg.schedule.back();
    e.result = solve(g, bc, cfg.make_solve_config(e.beta), dec, A, forcing);
    entries.push_back(std::move(e));
  } else if (cfg.warm_start && cfg.schedule.size() >= 2) {
    entries = beta_sweep(g, bc, cfg.make_solve_config(cfg.schedule.front()),
                         dec, A, forcing, cfg.schedule);
  } else {
    for (double beta : cfg.schedule) {
      SweepEntry e;
      e.beta = beta;
      e.result = solve(g, bc, cfg.make_solve_config(beta), dec, A, forcing);
      entries.push_back(std::move(e));
    }
  }

  std::vector<ConvergenceRow> conv;
  int code = 0;
  for (size_t k = 0; k < entries.size(); ++k) {
    const SweepEntry& e = entries[k];
    conv.push_back({e.beta, e.result.rec.iters, e.result.rec.final_residual,
                    e.result.rec.converged});
    if (!e.result.rec.converged) code = 2;
    const std::string name = whole_schedule
                                 ? "fields_" + std::to_string(k + 1) + ".txt"
                                 : "fields.txt";
    dump_fields(e.result.fields, (dir / name).string());
    if (!quiet)
      std::cout << "beta " << format_sci(e.beta) << ": iters "
                << e.result.rec.iters << ", residual "
                << format_sci(e.result.rec.final_residual)
                << (e.result.rec.converged ? "" : "  [NOT CONVERGED]") << "\n";
  }
  write_convergence_csv(conv, (dir / "convergence.csv").string());
  if (code == 2) {
    std::ofstream marker(dir / "FAILED");
    marker << "non-converged solve\n";
  }
  return code;
}

int diagnose_cmd(const ExperimentConfig& cfg, const std::string& dump_path,
                 bool quiet) {
  if (!prepare_out_dir(cfg.out_dir)) return 1;
  const fs::path dir(cfg.out_dir);
  FieldSet f = load_fields(dump_path);
  if (f.d() != cfg.d || f.grid.dim() != cfg.dim)
    fail(ErrorKind::ShapeMismatch,
         "dump does not match the config (d or dim differ)");
  std::vector<std::string> notes;
  DiagnosticsReport rep =
      diagnose_fields(cfg, f, cfg.schedule.back(), &notes);
  Decomposition dec = cfg.make_decomposition();
  write_sweep_diag_csv({rep}, dec, (dir / "sweep_diag.csv").string());
  write_frequency_csv(rep.curves, cfg.dim,
                      (dir / "frequency_curve.csv").string());
  if (!quiet) {
    for (const auto& [alpha, semi] : rep.holder)
      std::cout << "holder alpha=" << alpha << ": " << format_sci(semi)
                << "\n";
    std::cout << "seg_sup: " << format_sci(rep.seg_sup) << "\n";
    for (const FrequencyCurve& c : rep.curves)
      std::cout << "frequency defect at (" << c.x0.x
                << (cfg.dim == 2 ? ", " + std::to_string(c.x0.y) : "")
                << "): " << format_sci(c.defect) << "\n";
    for (const std::string& n : notes) std::cout << "note: " << n << "\n";
  }
  return 0;
}

int classify_cmd(const ExperimentConfig& cfg, const std::string& dump_path,
                 bool quiet) {
  if (!prepare_out_dir(cfg.out_dir)) return 1;
  const fs::path dir(cfg.out_dir);
  FieldSet f = load_fields(dump_path);
  if (f.d() != cfg.d || f.grid.dim() != cfg.dim)
    fail(ErrorKind::ShapeMismatch,
         "dump does not match the config (d or dim differ)");
  ClassifyOutput cls = classify_fields(cfg, f);
  write_classification_csv(cls.points, (dir / "classification.csv").string(),
                           cls.note);
  write_nodal_csv(cls.nodal, (dir / "nodal_points.csv").string());
  if (!quiet) {
    std::cout << "nodal points: " << cls.nodal.points.size()
              << ", classified: " << cls.points.size() << "\n";
    if (!cls.note.empty()) std::cout << "note: " << cls.note << "\n";
  }
  return 0;
}

int synth_cmd(const std::string& kind, int dim, int n, double lo, double hi,
              const std::string& out_dir, bool quiet) {
  if (!prepare_out_dir(out_dir)) return 1;
  Grid g = dim == 1 ? Grid::make_1d(lo, hi, n)
                    : Grid::make_2d({lo, lo}, {hi, hi}, {n, n});
  const Pt center{(lo + hi) / 2.0, dim == 2 ? (lo + hi) / 2.0 : 0.0};
  FieldSet f(g, 1);
  if (kind == "linear")
    f = synth_linear(g, 1.0, dim == 2 ? Pt{1.0, 1.0} : Pt{1.0, 0.0}, center);
  else if (kind == "kink")
    f = synth_kink_pair(g, Pt{1.0, 0.0}, 1.0, 1.0, center);
  else if (kind == "junction")
    f = synth_triple_junction(g, center);
  else if (kind == "foursector")
    f = synth_four_sector(g, center);
  else
    fail(ErrorKind::ConfigError,
         "unknown synthetic '" + kind +
             "' (linear, kink, junction, foursector)");
  const std::string path =
      (fs::path(out_dir) / (kind + ".txt")).string();
  dump_fields(f, path);
  if (!quiet) std::cout << "wrote " << path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seglab: segregation laboratory for group-coupled elliptic systems"};
  app.require_subcommand(1);

  std::string out_override;
  int threads = 0;
  bool quiet = false;
  app.add_option("--out", out_override, "override the [output] dir");
  app.add_option("--threads", threads, "worker thread count (0 = default)");
  app.add_flag("--quiet", quiet, "suppress progress output");

  std::string cfg_path, dump_path;
  CLI::App* c_validate = app.add_subcommand("validate", "parse and cross-check a config");
  c_validate->add_option("config", cfg_path)->required();
  CLI::App* c_solve = app.add_subcommand("solve", "single solve at the final beta");
  c_solve->add_option("config", cfg_path)->required();
  CLI::App* c_sweep = app.add_subcommand("sweep", "solve the whole beta schedule");
  c_sweep->add_option("config", cfg_path)->required();
  CLI::App* c_run = app.add_subcommand("run", "full pipeline: sweep + diagnostics + classification + plots");
  c_run->add_option("config", cfg_path)->required();
  CLI::App* c_diag = app.add_subcommand("diagnose", "diagnostics of a field dump");
  c_diag->add_option("config", cfg_path)->required();
  c_diag->add_option("dump", dump_path)->required();
  CLI::App* c_cls = app.add_subcommand("classify", "nodal set extraction + classification of a field dump");
  c_cls->add_option("config", cfg_path)->required();
  c_cls->add_option("dump", dump_path)->required();

  std::string synth_kind;
  int synth_dim = 2, synth_n = 256;
  double synth_lo = -1.0, synth_hi = 1.0;
  std::string synth_out = "out";
  CLI::App* c_synth = app.add_subcommand("synth", "dump a synthetic model field");
  c_synth->add_option("kind", synth_kind, "linear | kink | junction | foursector")->required();
  c_synth->add_option("--dim", synth_dim)->check(CLI::Range(1, 2));
  c_synth->add_option("--n", synth_n)->check(CLI::Range(3, 8192));
  c_synth->add_option("--lo", synth_lo);
  c_synth->add_option("--hi", synth_hi);

  for (CLI::App* sub : {c_validate, c_solve, c_sweep, c_run, c_diag, c_cls,
                        c_synth})
    sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

#ifdef SEGLAB_HAVE_OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  try {
    if (app.got_subcommand(c_synth)) {
      if (synth_lo >= synth_hi) {
        std::cerr << "error: --lo must be < --hi\n";
        return 1;
      }
      return synth_cmd(synth_kind, synth_dim, synth_n, synth_lo, synth_hi,
                       out_override.empty() ? synth_out : out_override, quiet);
    }

    ExperimentConfig cfg;
    std::string text;
    if (!load_config(cfg_path, out_override, cfg, text)) return 1;

    if (app.got_subcommand(c_validate)) {
      if (!quiet) std::cout << "OK\n";
      return 0;
    }
    if (app.got_subcommand(c_solve)) return solve_stage(cfg, false, quiet);
    if (app.got_subcommand(c_sweep)) return solve_stage(cfg, true, quiet);
    if (app.got_subcommand(c_run)) return run_experiment(cfg, text, quiet);
    if (app.got_subcommand(c_diag)) return diagnose_cmd(cfg, dump_path, quiet);
    if (app.got_subcommand(c_cls)) return classify_cmd(cfg, dump_path, quiet);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
