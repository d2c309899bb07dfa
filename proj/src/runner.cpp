#include "seglab/runner.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "seglab/errors.hpp"
#include "seglab/quadrature.hpp"
#include "seglab/svg.hpp"

namespace fs = std::filesystem;

namespace seglab {

namespace {

std::string pt_str(const Pt& p, int dim) {
  std::ostringstream s;
  s << "(" << p.x;
  if (dim == 2) s << ", " << p.y;
  s << ")";
  return s.str();
}

// Radii from the config that actually fit around x0 with the 2-cell margin
// the quadratures demand.
std::vector<double> feasible_radii(const Grid& g, const Pt& x0,
                                   const std::vector<double>& radii) {
  std::vector<double> out;
  const double bd = g.boundary_distance(x0);
  for (double r : radii)
    if (bd >= r + 2.0 * g.hmax()) out.push_back(r);
  return out;
}

}  // namespace

DiagnosticsReport diagnose_fields(const ExperimentConfig& cfg,
                                  const FieldSet& f, double beta,
                                  std::vector<std::string>* notes) {
  const Grid& g = f.grid;
  Decomposition dec = cfg.make_decomposition();
  CouplingMatrix A = cfg.make_coupling();
  ForcingSpec forcing = cfg.make_forcing();

  DiagnosticsReport rep;
  rep.beta = beta;

  for (double alpha : cfg.alphas) {
    double semi = 0.0;
    for (int i = 1; i <= cfg.d; ++i)
      semi = std::max(semi, holder_seminorm(f, i, alpha, cfg.window));
    rep.holder.push_back({alpha, semi});
  }

  rep.seg_sup = segregation_sup(f, dec);
  for (int i = 1; i <= cfg.d; ++i)
    for (int j = i + 1; j <= cfg.d; ++j)
      if (dec.classify(i, j) == PairClass::CrossGroup)
        rep.interactions.push_back(
            {i, j, interaction_energy(f, beta, cfg.p, A, i, j, cfg.window)});

  int pk = 0;
  for (const Pt& probe : cfg.probes) {
    ++pk;
    std::vector<double> radii = feasible_radii(g, probe, cfg.radii);
    if (radii.size() < cfg.radii.size() && notes)
      notes->push_back("probe " + std::to_string(pk) + " " +
                       pt_str(probe, g.dim()) + ": " +
                       std::to_string(cfg.radii.size() - radii.size()) +
                       " radii skipped (ball outside domain)");
    if (radii.empty()) continue;
    rep.curves.push_back(frequency_curve(f, forcing, cfg.p, probe, radii,
                                         AlmgrenMode::Limit));
    const double r = radii.back();
    rep.pohozaev.push_back(
        {probe, r, pohozaev_residual(f, forcing, cfg.p, probe, r, beta, &A)});
    rep.morrey.push_back({probe, r, morrey_quotient(f, probe, r)});
  }

  rep.sign_check = measure_sign_check(f, forcing, cfg.p, dec, cfg.delta);
  return rep;
}

ClassifyOutput classify_fields(const ExperimentConfig& cfg,
                               const FieldSet& f) {
  ClassifyOutput out;
  Decomposition dec = cfg.make_decomposition();
  out.nodal = extract_nodal_set(f, dec, cfg.delta, NodalVariant::Full);
  if (out.nodal.degenerate_all_zero) {
    out.note = "all components vanish identically; nothing to classify";
    return out;
  }
  if (out.nodal.points.empty()) {
    out.note = "nodal set empty at delta=" + std::to_string(cfg.delta) +
               "; no interface to classify";
    return out;
  }
  out.points = classify_nodal_set(f, dec, out.nodal);
  if (out.points.empty())
    out.note = "no nodal point lies far enough from the boundary to grade";
  return out;
}

namespace {

void write_report(const ExperimentConfig& cfg, const std::string& path,
                  std::uint64_t hash,
                  const std::vector<ConvergenceRow>& conv,
                  const std::vector<bool>& warm,
                  const std::vector<DiagnosticsReport>& reps,
                  const std::vector<std::string>& notes,
                  const ClassifyOutput* cls, const std::string& status) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::IoError, "cannot open for writing: " + path);
  char hb[32];
  std::snprintf(hb, sizeof hb, "%016" PRIx64, hash);

  out << "seglab report\n";
  out << "config:\n";
  out << "  hash: " << hb << "\n";
  out << "  dim: " << cfg.dim << "\n";
  out << "  n: " << cfg.n[0];
  if (cfg.dim == 2) out << " " << cfg.n[1];
  out << "\n";
  out << "  d: " << cfg.d << "\n";
  out << "  groups: " << cfg.breakpoints.size() - 1 << "\n";
  out << "  p: " << cfg.p << "\n";
  out << "  seed: " << cfg.seed << "\n";
  out << "  tol: " << cfg.tol << "\n";
  out << "  max_iters: " << cfg.max_iters << "\n";
  out << "  warm_start: " << (cfg.warm_start ? "yes" : "no") << "\n";

  out << "sweep:\n";
  for (size_t k = 0; k < conv.size(); ++k) {
    out << "  solve " << k + 1 << ":\n";
    out << "    beta: " << format_sci(conv[k].beta) << "\n";
    out << "    iters: " << conv[k].iters << "\n";
    out << "    final_residual: " << format_sci(conv[k].final_residual)
        << "\n";
    out << "    converged: " << (conv[k].converged ? "yes" : "no") << "\n";
    out << "    warm_started: " << (warm[k] ? "yes" : "no") << "\n";
  }

  out << "diagnostics:\n";
  for (const DiagnosticsReport& rep : reps) {
    out << "  beta " << format_sci(rep.beta) << ":\n";
    for (const auto& [alpha, semi] : rep.holder)
      out << "    holder alpha=" << alpha << ": " << format_sci(semi) << "\n";
    out << "    seg_sup: " << format_sci(rep.seg_sup) << "\n";
    for (const PairEnergy& pe : rep.interactions)
      out << "    interaction_" << pe.i << "_" << pe.j << ": "
          << format_sci(pe.value) << "\n";
    for (const ProbeValue& pv : rep.pohozaev)
      out << "    pohozaev " << pt_str(pv.x0, cfg.dim) << " r=" << pv.r
          << ": " << format_sci(pv.value) << "\n";
    for (const ProbeValue& pv : rep.morrey)
      out << "    morrey " << pt_str(pv.x0, cfg.dim) << " r=" << pv.r << ": "
          << format_sci(pv.value) << "\n";
    out << "    sign_check: checked=" << rep.sign_check.checked
        << " violations=" << rep.sign_check.violations
        << " worst=" << format_sci(rep.sign_check.worst) << "\n";
    for (const FrequencyCurve& c : rep.curves) {
      out << "    frequency " << pt_str(c.x0, cfg.dim) << ":\n";
      out << "      C: " << format_sci(c.C) << "\n";
      out << "      defect: " << format_sci(c.defect) << "\n";
      out << "      undefined_samples: " << c.undefined_samples << "\n";
      for (const AlmgrenSample& s : c.samples) {
        out << "      r=" << format_sci(s.r) << " N=";
        if (s.n_defined)
          out << format_sci(s.N);
        else
          out << "undefined";
        out << "\n";
      }
    }
  }

  if (cls) {
    long nreg = 0, nsing = 0, nind = 0;
    for (const BoundaryPointClass& b : cls->points) {
      nreg += b.cls == PointClass::Regular;
      nsing += b.cls == PointClass::Singular;
      nind += b.cls == PointClass::Indeterminate;
    }
    out << "classification:\n";
    out << "  delta: " << cfg.delta << "\n";
    out << "  nodal_points: " << cls->nodal.points.size() << "\n";
    out << "  degenerate_all_zero: "
        << (cls->nodal.degenerate_all_zero ? "yes" : "no") << "\n";
    out << "  classified: " << cls->points.size() << "\n";
    out << "  regular: " << nreg << "\n";
    out << "  singular: " << nsing << "\n";
    out << "  indeterminate: " << nind << "\n";
    if (!cls->note.empty()) out << "  note: " << cls->note << "\n";
  }

  if (!notes.empty()) {
    out << "notes:\n";
    for (const std::string& n : notes) out << "  - " << n << "\n";
  }
  out << "status: " << status << "\n";
  out.flush();
  if (!out) fail(ErrorKind::IoError, "write failed: " + path);
}

}  // namespace

int run_experiment(const ExperimentConfig& cfg, const std::string& config_text,
                   bool quiet) {
  // Output directory first: nothing at all is written when it is unusable.
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  const fs::path dir(cfg.out_dir);
  {
    const fs::path probe = dir / ".write_probe";
    std::ofstream p(probe);
    p << "x";
    p.flush();
    const bool ok = static_cast<bool>(p);
    p.close();
    fs::remove(probe, ec);
    if (!ok) {
      std::cerr << "error: output directory not writable: " << cfg.out_dir
                << "\n";
      return 1;
    }
  }

  const std::uint64_t hash = fnv1a(config_text);
  std::vector<std::string> notes;
  std::string status = "ok";
  int code = 0;

  try {
    Grid g = cfg.make_grid();
    Decomposition dec = cfg.make_decomposition();
    CouplingMatrix A = cfg.make_coupling();
    ForcingSpec forcing = cfg.make_forcing();
    FieldSet bc = cfg.make_boundary_fields(g);
    SolveConfig base = cfg.make_solve_config(cfg.schedule.front());

    std::vector<SweepEntry> entries;
    if (cfg.warm_start && cfg.schedule.size() >= 2) {
      entries = beta_sweep(g, bc, base, dec, A, forcing, cfg.schedule);
    } else {
      for (double beta : cfg.schedule) {
        SweepEntry e;
        e.beta = beta;
        SolveConfig sc = cfg.make_solve_config(beta);
        e.result = solve(g, bc, sc, dec, A, forcing);
        entries.push_back(std::move(e));
      }
    }

    std::vector<ConvergenceRow> conv;
    std::vector<bool> warm;
    std::vector<DiagnosticsReport> reps;
    char hb[32];
    std::snprintf(hb, sizeof hb, "%016" PRIx64, hash);

    for (size_t k = 0; k < entries.size(); ++k) {
      const SweepEntry& e = entries[k];
      conv.push_back({e.beta, e.result.rec.iters, e.result.rec.final_residual,
                      e.result.rec.converged});
      warm.push_back(e.warm_started);
      if (!e.result.rec.converged) {
        code = 2;
        status = "non-converged";
      }

      const std::string dump =
          (dir / ("fields_" + std::to_string(k + 1) + ".txt")).string();
      dump_fields(e.result.fields, dump);
      // Diagnostics run on the reloaded dump, so the published CSV rows are
      // exactly reproducible from the published field artifacts.
      FieldSet reloaded = load_fields(dump);
      DiagnosticsReport rep = diagnose_fields(cfg, reloaded, e.beta, &notes);
      rep.config_hash = hb;
      reps.push_back(std::move(rep));
      if (!quiet)
        std::cout << "beta " << format_sci(e.beta) << ": iters "
                  << e.result.rec.iters << ", residual "
                  << format_sci(e.result.rec.final_residual)
                  << (e.result.rec.converged ? "" : "  [NOT CONVERGED]")
                  << "\n";
    }

    write_convergence_csv(conv, (dir / "convergence.csv").string());
    write_sweep_diag_csv(reps, dec, (dir / "sweep_diag.csv").string());
    write_frequency_csv(reps.back().curves, cfg.dim,
                        (dir / "frequency_curve.csv").string());

    FieldSet final_fields =
        load_fields((dir / ("fields_" + std::to_string(entries.size()) +
                            ".txt"))
                        .string());

    ClassifyOutput cls;
    if (cfg.classification) {
      cls = classify_fields(cfg, final_fields);
      write_classification_csv(cls.points,
                               (dir / "classification.csv").string(),
                               cls.note);
      write_nodal_csv(cls.nodal, (dir / "nodal_points.csv").string());
      if (!cls.note.empty()) notes.push_back("classification: " + cls.note);
    }

    if (cfg.dim == 2) {
      for (int i = 1; i <= cfg.d; ++i)
        svg_heatmap(final_fields.comp(i), "u" + std::to_string(i),
                    cls.nodal.points,
                    (dir / ("u" + std::to_string(i) + ".svg")).string());
    } else {
      svg_lineplot(final_fields, "components", cls.nodal.points,
                   (dir / "fields.svg").string());
    }

    write_report(cfg, (dir / "report.txt").string(), hash, conv, warm, reps,
                 notes, cfg.classification ? &cls : nullptr, status);
  } catch (const Error& e) {
    std::ofstream marker(dir / "FAILED");
    marker << e.what() << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  if (code == 2) {
    std::ofstream marker(dir / "FAILED");
    marker << "non-converged solve in sweep\n";
  }
  if (!quiet)
    std::cout << "artifacts in " << cfg.out_dir << " (status: " << status
              << ")\n";
  return code;
}

}  // namespace seglab
