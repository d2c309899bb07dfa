#include "seglab/io.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "seglab/errors.hpp"

namespace seglab {

namespace {

// Shortest round-trip representation, used for header metadata.
std::string format_exact(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void open_out(std::ofstream& out, const std::string& path) {
  out.open(path);
  if (!out) fail(ErrorKind::IoError, "cannot open for writing: " + path);
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) fail(ErrorKind::IoError, "write failed: " + path);
}

std::string class_name(PointClass c) {
  switch (c) {
    case PointClass::Regular: return "Regular";
    case PointClass::Singular: return "Singular";
    case PointClass::Indeterminate: return "Indeterminate";
  }
  return "?";
}

}  // namespace

std::string format_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8e", v);
  return buf;
}

void dump_fields(const FieldSet& f, const std::string& path) {
  const Grid& g = f.grid;
  std::ofstream out;
  open_out(out, path);
  out << "# grid dim=" << g.dim() << " n=" << g.n(0);
  if (g.dim() == 2) out << "x" << g.n(1);
  out << " extent=[" << format_exact(g.low(0)) << "," << format_exact(g.high(0))
      << "]";
  if (g.dim() == 2)
    out << "x[" << format_exact(g.low(1)) << "," << format_exact(g.high(1))
        << "]";
  out << " d=" << f.d() << "\n";
  for (int i = 1; i <= f.d(); ++i) {
    out << "# component " << i << "\n";
    const ScalarField& u = f.comp(i);
    for (int iy = 0; iy < g.ny_total(); ++iy) {
      for (int ix = 0; ix < g.nx_total(); ++ix) {
        if (ix) out << " ";
        out << format_sci(u.at(ix, iy));
      }
      out << "\n";
    }
  }
  finish(out, path);
}

FieldSet load_fields(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot open field dump: " + path);
  std::string header;
  std::getline(in, header);
  int dim = 0;
  if (std::sscanf(header.c_str(), "# grid dim=%d", &dim) != 1 ||
      (dim != 1 && dim != 2))
    fail(ErrorKind::IoError, path + ":1: bad dump header: '" + header + "'");

  int n0 = 0, n1 = 0, d = 0;
  double lo0 = 0, hi0 = 0, lo1 = 0, hi1 = 0;
  bool ok;
  if (dim == 1)
    ok = std::sscanf(header.c_str(),
                     "# grid dim=1 n=%d extent=[%lf,%lf] d=%d", &n0, &lo0,
                     &hi0, &d) == 4;
  else
    ok = std::sscanf(header.c_str(),
                     "# grid dim=2 n=%dx%d extent=[%lf,%lf]x[%lf,%lf] d=%d",
                     &n0, &n1, &lo0, &hi0, &lo1, &hi1, &d) == 7;
  if (!ok || n0 < 1 || d < 1 || (dim == 2 && n1 < 1) || !(lo0 < hi0) ||
      (dim == 2 && !(lo1 < hi1)))
    fail(ErrorKind::IoError, path + ":1: bad dump header: '" + header + "'");

  Grid g = dim == 1 ? Grid::make_1d(lo0, hi0, n0)
                    : Grid::make_2d({lo0, lo1}, {hi0, hi1}, {n0, n1});
  FieldSet f(g, d);
  int lineno = 1;
  for (int i = 1; i <= d; ++i) {
    std::string mark;
    std::getline(in, mark);
    ++lineno;
    int ci = 0;
    if (std::sscanf(mark.c_str(), "# component %d", &ci) != 1 || ci != i)
      fail(ErrorKind::IoError, path + ":" + std::to_string(lineno) +
                                   ": expected '# component " +
                                   std::to_string(i) + "'");
    ScalarField& u = f.comp(i);
    for (int iy = 0; iy < g.ny_total(); ++iy) {
      std::string row;
      std::getline(in, row);
      ++lineno;
      std::istringstream rs(row);
      for (int ix = 0; ix < g.nx_total(); ++ix)
        if (!(rs >> u.at(ix, iy)))
          fail(ErrorKind::IoError, path + ":" + std::to_string(lineno) +
                                       ": short row (component " +
                                       std::to_string(i) + ")");
      double extra;
      if (rs >> extra)
        fail(ErrorKind::IoError, path + ":" + std::to_string(lineno) +
                                     ": trailing values on row");
    }
  }
  f.require_finite("field dump");
  return f;
}

void write_convergence_csv(const std::vector<ConvergenceRow>& rows,
                           const std::string& path) {
  std::ofstream out;
  open_out(out, path);
  out << "beta,iters,final_residual,converged\n";
  for (const ConvergenceRow& r : rows)
    out << format_sci(r.beta) << "," << r.iters << ","
        << format_sci(r.final_residual) << "," << (r.converged ? 1 : 0)
        << "\n";
  finish(out, path);
}

void write_frequency_csv(const std::vector<FrequencyCurve>& curves, int dim,
                         const std::string& path) {
  std::ofstream out;
  open_out(out, path);
  out << "x0,r,H,E,N\n";
  for (const FrequencyCurve& c : curves)
    for (const AlmgrenSample& s : c.samples) {
      out << format_sci(s.x0.x);
      if (dim == 2) out << ":" << format_sci(s.x0.y);
      out << "," << format_sci(s.r) << "," << format_sci(s.H) << ","
          << format_sci(s.E) << ",";
      if (s.n_defined)
        out << format_sci(s.N);
      else
        out << "undefined";
      out << "\n";
    }
  finish(out, path);
}

std::string sweep_diag_csv(const std::vector<DiagnosticsReport>& reports,
                           const Decomposition& dec) {
  std::ostringstream out;
  out << "beta,alpha,holder,seg_sup";
  std::vector<std::pair<int, int>> pairs;
  for (int i = 1; i <= dec.d(); ++i)
    for (int j = i + 1; j <= dec.d(); ++j)
      if (dec.classify(i, j) == PairClass::CrossGroup) {
        pairs.push_back({i, j});
        out << ",interaction_" << i << "_" << j;
      }
  out << "\n";
  for (const DiagnosticsReport& rep : reports)
    for (const auto& [alpha, semi] : rep.holder) {
      out << format_sci(rep.beta) << "," << format_sci(alpha) << ","
          << format_sci(semi) << "," << format_sci(rep.seg_sup);
      for (const auto& [i, j] : pairs) {
        double v = 0.0;
        for (const PairEnergy& pe : rep.interactions)
          if (pe.i == i && pe.j == j) v = pe.value;
        out << "," << format_sci(v);
      }
      out << "\n";
    }
  return out.str();
}

void write_sweep_diag_csv(const std::vector<DiagnosticsReport>& reports,
                          const Decomposition& dec, const std::string& path) {
  std::ofstream out;
  open_out(out, path);
  out << sweep_diag_csv(reports, dec);
  finish(out, path);
}

void write_classification_csv(const std::vector<BoundaryPointClass>& rows,
                              const std::string& path,
                              const std::string& note) {
  std::ofstream out;
  open_out(out, path);
  out << "x,y,N_hat,class,Gplus,Gminus,nu_x,nu_y\n";
  if (!note.empty()) out << "# " << note << "\n";
  for (const BoundaryPointClass& b : rows)
    out << format_sci(b.x0.x) << "," << format_sci(b.x0.y) << ","
        << format_sci(b.N_hat) << "," << class_name(b.cls) << ","
        << format_sci(b.g_plus) << "," << format_sci(b.g_minus) << ","
        << format_sci(b.normal.x) << "," << format_sci(b.normal.y) << "\n";
  finish(out, path);
}

void write_nodal_csv(const NodalSet& ns, const std::string& path) {
  std::ofstream out;
  open_out(out, path);
  out << "x,y\n";
  for (const Pt& p : ns.points)
    out << format_sci(p.x) << "," << format_sci(p.y) << "\n";
  finish(out, path);
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace seglab
