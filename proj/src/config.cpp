#include "seglab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "seglab/errors.hpp"
#include "seglab/quadrature.hpp"

namespace seglab {

double eval_boundary(const BoundaryFn& fn, const Grid& g, const Pt& p) {
  switch (fn.kind) {
    case BoundaryFn::Kind::Const:
      return fn.a;
    case BoundaryFn::Kind::Edges: {
      const double h0 = g.h(0) / 2.0;
      if (p.x <= g.low(0) + h0) return fn.a;
      if (p.x >= g.high(0) - h0) return fn.b;
      if (g.dim() == 1) return 0.0;
      const double h1 = g.h(1) / 2.0;
      if (p.y <= g.low(1) + h1) return fn.c;
      if (p.y >= g.high(1) - h1) return fn.d;
      return 0.0;
    }
    case BoundaryFn::Kind::Affine:
      return fn.a + fn.b * p.x + (g.dim() == 2 ? fn.c * p.y : 0.0);
    case BoundaryFn::Kind::Sine: {
      const int ax = fn.axis;
      const double t = ((ax == 0 ? p.x : p.y) - g.low(ax)) /
                       (g.high(ax) - g.low(ax));
      return fn.a * std::sin(fn.b * kPi * t);
    }
    case BoundaryFn::Kind::Ramp: {
      const double t = fn.axis == 0 ? p.x : p.y;
      if (t <= fn.a) return 0.0;
      if (t >= fn.b) return 1.0;
      return (t - fn.a) / (fn.b - fn.a);
    }
  }
  return 0.0;
}

Grid ExperimentConfig::make_grid() const {
  if (dim == 1) return Grid::make_1d(low[0], high[0], n[0]);
  return Grid::make_2d({low[0], low[1]}, {high[0], high[1]}, {n[0], n[1]});
}

Decomposition ExperimentConfig::make_decomposition() const {
  return seglab::make_decomposition(d, breakpoints);
}

CouplingMatrix ExperimentConfig::make_coupling() const {
  Decomposition dec = make_decomposition();
  Mat a(d);
  if (coupling.empty()) {
    for (int i = 1; i <= d; ++i)
      for (int j = 1; j <= d; ++j)
        a.at(i, j) = (i != j && dec.group_of(i) != dec.group_of(j)) ? 1.0
                                                                    : 0.0;
  } else {
    for (int i = 1; i <= d; ++i)
      for (int j = 1; j <= d; ++j) a.at(i, j) = coupling[(i - 1) * d + j - 1];
  }
  return validate_coupling(dec, a);
}

ForcingSpec ExperimentConfig::make_forcing() const {
  switch (family) {
    case ForcingFamily::Zero:
      return ForcingSpec::zero(d);
    case ForcingFamily::Linear:
      return ForcingSpec::linear(lambda);
    case ForcingFamily::GroupedPower: {
      Mat bm(d);
      for (int i = 1; i <= d; ++i)
        for (int j = 1; j <= d; ++j)
          bm.at(i, j) = b.empty() ? 0.0 : b[(i - 1) * d + j - 1];
      return ForcingSpec::grouped_power(make_decomposition(), lambda, bm);
    }
  }
  return ForcingSpec::zero(d);
}

FieldSet ExperimentConfig::make_boundary_fields(const Grid& g) const {
  FieldSet f(g, d);
  for (int i = 1; i <= d; ++i) {
    const BoundaryFn fn =
        i <= static_cast<int>(boundary.size()) ? boundary[i - 1] : BoundaryFn{};
    ScalarField& u = f.comp(i);
    for (int iy = 0; iy < g.ny_total(); ++iy)
      for (int ix = 0; ix < g.nx_total(); ++ix) {
        const bool edge = ix == 0 || ix == g.nx_total() - 1 ||
                          (g.dim() == 2 &&
                           (iy == 0 || iy == g.ny_total() - 1));
        if (edge) u.at(ix, iy) = eval_boundary(fn, g, g.node(ix, iy));
      }
  }
  return f;
}

SolveConfig ExperimentConfig::make_solve_config(double beta) const {
  SolveConfig sc;
  sc.beta = beta;
  sc.p = p;
  sc.tol = tol;
  sc.max_iters = max_iters;
  sc.damping = omega;
  sc.seed = seed;
  sc.multigrid = multigrid;
  return sc;
}

namespace {

struct Item {
  std::string section;
  std::string key;
  std::vector<std::string> tokens;
  int line = 0;
};

struct Parser {
  std::vector<Item> items;
  std::vector<ConfigIssue> issues;

  void syntax(int line, std::string msg) {
    issues.push_back({line, false, std::move(msg)});
  }
  void semantic(int line, std::string msg) {
    issues.push_back({line, true, std::move(msg)});
  }

  Item* find(const std::string& sec, const std::string& key) {
    for (Item& it : items)
      if (it.section == sec && it.key == key) return &it;
    return nullptr;
  }

  std::vector<Item*> find_all(const std::string& sec, const std::string& key) {
    std::vector<Item*> out;
    for (Item& it : items)
      if (it.section == sec && it.key == key) out.push_back(&it);
    return out;
  }

  bool to_real(const Item& it, const std::string& tok, double& out) {
    char* end = nullptr;
    out = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0' || !std::isfinite(out)) {
      syntax(it.line, "'" + it.key + "': not a number: '" + tok + "'");
      return false;
    }
    return true;
  }

  bool to_int(const Item& it, const std::string& tok, long& out) {
    char* end = nullptr;
    out = std::strtol(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0') {
      syntax(it.line, "'" + it.key + "': not an integer: '" + tok + "'");
      return false;
    }
    return true;
  }

  bool to_bool(const Item& it, const std::string& tok, bool& out) {
    if (tok == "true" || tok == "on" || tok == "1") {
      out = true;
      return true;
    }
    if (tok == "false" || tok == "off" || tok == "0") {
      out = false;
      return true;
    }
    syntax(it.line, "'" + it.key + "': not a boolean: '" + tok + "'");
    return false;
  }

  // Fixed-arity tuple of reals; extra/missing tokens are syntax errors.
  bool reals(const Item* it, int lo, int hi, std::vector<double>& out) {
    if (!it) return false;
    const int got = static_cast<int>(it->tokens.size());
    if (got < lo || got > hi) {
      syntax(it->line, "'" + it->key + "': expected " + std::to_string(lo) +
                           (hi != lo ? ".." + std::to_string(hi) : "") +
                           " values, got " + std::to_string(got));
      return false;
    }
    out.clear();
    for (const std::string& t : it->tokens) {
      double v;
      if (!to_real(*it, t, v)) return false;
      out.push_back(v);
    }
    return true;
  }

  bool real1(const Item* it, double& out) {
    std::vector<double> v;
    if (!reals(it, 1, 1, v)) return false;
    out = v[0];
    return true;
  }

  bool int1(const Item* it, long& out) {
    if (!it) return false;
    if (it->tokens.size() != 1) {
      syntax(it->line, "'" + it->key + "': expected one integer");
      return false;
    }
    return to_int(*it, it->tokens[0], out);
  }

  bool bool1(const Item* it, bool& out) {
    if (!it) return false;
    if (it->tokens.size() != 1) {
      syntax(it->line, "'" + it->key + "': expected one boolean");
      return false;
    }
    return to_bool(*it, it->tokens[0], out);
  }
};

const char* const kSections[] = {"grid",   "components", "coupling",
                                 "forcing", "solver",     "sweep",
                                 "boundary", "diagnostics", "output"};

bool known_section(const std::string& s) {
  for (const char* k : kSections)
    if (s == k) return true;
  return false;
}

// key -> allowed keys per section, for unknown-key reporting.
bool known_key(const std::string& sec, const std::string& key) {
  auto in = [&](std::initializer_list<const char*> ks) {
    for (const char* k : ks)
      if (key == k) return true;
    return false;
  };
  if (sec == "grid") return in({"dim", "n", "low", "high"});
  if (sec == "components") return in({"d", "breakpoints"});
  if (sec == "coupling") {
    return key.rfind("a_", 0) == 0 || key == "default";
  }
  if (sec == "forcing") {
    return in({"family", "lambda"}) || key.rfind("b_", 0) == 0;
  }
  if (sec == "solver")
    return in({"p", "tol", "omega", "max_iters", "multigrid", "seed"});
  if (sec == "sweep") return in({"beta", "warm_start"});
  if (sec == "boundary") return key.size() > 1 && key[0] == 'u';
  if (sec == "diagnostics")
    return in({"window", "alpha", "probe", "radii", "classification",
               "delta"});
  if (sec == "output") return in({"dir"});
  return false;
}

void tokenize_line(Parser& ps, const std::string& section, std::string line,
                   int lineno) {
  // strip comment and whitespace
  const size_t hash = line.find('#');
  if (hash != std::string::npos) line.erase(hash);
  auto issp = [](char c) { return std::isspace(static_cast<unsigned char>(c)); };
  while (!line.empty() && issp(line.back())) line.pop_back();
  size_t s = 0;
  while (s < line.size() && issp(line[s])) ++s;
  line.erase(0, s);
  if (line.empty()) return;

  const size_t eq = line.find('=');
  if (eq == std::string::npos) {
    ps.syntax(lineno, "expected 'key = value': '" + line + "'");
    return;
  }
  std::string key = line.substr(0, eq);
  std::string val = line.substr(eq + 1);
  while (!key.empty() && issp(key.back())) key.pop_back();
  size_t vs = 0;
  while (vs < val.size() && issp(val[vs])) ++vs;
  val.erase(0, vs);
  if (key.empty()) {
    ps.syntax(lineno, "missing key before '='");
    return;
  }
  if (section.empty()) {
    ps.syntax(lineno, "'" + key + "' appears before any [section]");
    return;
  }
  if (val.empty()) {
    ps.syntax(lineno, "'" + key + "': empty value");
    return;
  }

  // bracketed array or whitespace-separated tuple
  Item it;
  it.section = section;
  it.key = key;
  it.line = lineno;
  if (val.front() == '[') {
    if (val.back() != ']') {
      ps.syntax(lineno, "'" + key + "': unterminated '['");
      return;
    }
    val = val.substr(1, val.size() - 2);
    std::string tok;
    std::istringstream iss(val);
    while (std::getline(iss, tok, ',')) {
      size_t a = 0;
      while (a < tok.size() && issp(tok[a])) ++a;
      size_t b = tok.size();
      while (b > a && issp(tok[b - 1])) --b;
      if (b > a) it.tokens.push_back(tok.substr(a, b - a));
    }
  } else {
    std::istringstream iss(val);
    std::string tok;
    while (iss >> tok) it.tokens.push_back(tok);
  }
  if (!known_key(section, key)) {
    ps.syntax(lineno, "unknown key '" + key + "' in [" + section + "]");
    return;
  }
  ps.items.push_back(std::move(it));
}

void parse_boundary_fn(Parser& ps, const Item& it, int dim, BoundaryFn& fn) {
  const std::vector<std::string>& t = it.tokens;
  auto want = [&](int n) {
    if (static_cast<int>(t.size()) == n + 1) return true;
    ps.syntax(it.line, "'" + it.key + "': " + t[0] + " takes " +
                           std::to_string(n) + " arguments");
    return false;
  };
  auto num = [&](int k, double& out) { return ps.to_real(it, t[k], out); };
  auto axis = [&](int k) {
    long ax;
    if (!ps.to_int(it, t[k], ax)) return false;
    if (ax < 0 || ax >= dim) {
      ps.semantic(it.line, "'" + it.key + "': axis " + t[k] +
                               " out of range for dim=" + std::to_string(dim));
      return false;
    }
    fn.axis = static_cast<int>(ax);
    return true;
  };

  if (t.empty()) {
    ps.syntax(it.line, "'" + it.key + "': empty boundary expression");
    return;
  }
  const std::string& f = t[0];
  if (f == "const") {
    fn.kind = BoundaryFn::Kind::Const;
    if (want(1)) num(1, fn.a);
  } else if (f == "edges") {
    fn.kind = BoundaryFn::Kind::Edges;
    const int need = dim == 1 ? 2 : 4;
    if (want(need)) {
      num(1, fn.a);
      num(2, fn.b);
      if (dim == 2) {
        num(3, fn.c);
        num(4, fn.d);
      }
    }
  } else if (f == "affine") {
    fn.kind = BoundaryFn::Kind::Affine;
    const int need = dim == 1 ? 2 : 3;
    if (want(need)) {
      num(1, fn.a);
      num(2, fn.b);
      if (dim == 2) num(3, fn.c);
    }
  } else if (f == "sine") {
    fn.kind = BoundaryFn::Kind::Sine;
    if (want(3) && axis(1)) {
      num(2, fn.a);
      num(3, fn.b);
    }
  } else if (f == "ramp") {
    fn.kind = BoundaryFn::Kind::Ramp;
    if (want(3) && axis(1)) {
      num(2, fn.a);
      num(3, fn.b);
      if (fn.b <= fn.a)
        ps.semantic(it.line, "'" + it.key + "': ramp needs start < end");
    }
  } else {
    ps.syntax(it.line,
              "'" + it.key + "': unknown boundary function '" + f +
                  "' (const, edges, affine, sine, ramp)");
  }
}

}  // namespace

ParseOutcome parse_config(const std::string& text) {
  ParseOutcome out;
  ExperimentConfig& cfg = out.config;
  Parser ps;

  // --- line scan ---
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    std::string stripped = hash == std::string::npos ? line : line.substr(0, hash);
    size_t a = 0;
    while (a < stripped.size() &&
           std::isspace(static_cast<unsigned char>(stripped[a])))
      ++a;
    size_t b = stripped.size();
    while (b > a && std::isspace(static_cast<unsigned char>(stripped[b - 1])))
      --b;
    stripped = stripped.substr(a, b - a);
    if (stripped.empty()) continue;
    if (stripped.front() == '[') {
      if (stripped.back() != ']') {
        ps.syntax(lineno, "unterminated section header: '" + stripped + "'");
        continue;
      }
      section = stripped.substr(1, stripped.size() - 2);
      if (!known_section(section)) {
        ps.syntax(lineno, "unknown section [" + section + "]");
        section.clear();
      }
      continue;
    }
    tokenize_line(ps, section, line, lineno);
  }

  // --- [grid] ---
  long dim = 1;
  if (const Item* it = ps.find("grid", "dim")) {
    if (ps.int1(it, dim) && dim != 1 && dim != 2)
      ps.semantic(it->line, "dim must be 1 or 2");
  }
  cfg.dim = dim == 2 ? 2 : 1;
  if (Item* it = ps.find("grid", "n")) {
    const int want = cfg.dim;
    if (static_cast<int>(it->tokens.size()) != want &&
        it->tokens.size() != 1) {
      ps.syntax(it->line, "'n': expected 1 or dim integers");
    } else {
      for (size_t k = 0; k < it->tokens.size(); ++k) {
        long v;
        if (ps.to_int(*it, it->tokens[k], v)) {
          if (v < 3) ps.semantic(it->line, "n must be >= 3");
          cfg.n[k] = static_cast<int>(v);
        }
      }
      if (it->tokens.size() == 1) cfg.n[1] = cfg.n[0];
    }
  }
  for (const char* key : {"low", "high"}) {
    if (Item* it = ps.find("grid", key)) {
      std::vector<double> v;
      if (ps.reals(it, 1, cfg.dim, v)) {
        auto& dst = key[0] == 'l' ? cfg.low : cfg.high;
        dst[0] = v[0];
        dst[1] = v.size() > 1 ? v[1] : v[0];
      }
    }
  }
  if (cfg.dim == 1) {
    cfg.low[1] = 0.0;
    cfg.high[1] = 1.0;
  }
  for (int ax = 0; ax < cfg.dim; ++ax)
    if (!(cfg.low[ax] < cfg.high[ax]))
      ps.semantic(0, "grid extent: low must be < high on axis " +
                         std::to_string(ax));

  // --- [components] ---
  long d = 1;
  if (const Item* it = ps.find("components", "d")) {
    if (ps.int1(it, d) && (d < 1 || d > 64))
      ps.semantic(it->line, "d out of range [1, 64]");
  }
  cfg.d = static_cast<int>(std::clamp<long>(d, 1, 64));
  cfg.breakpoints = {0, cfg.d};  // default: one group
  if (Item* it = ps.find("components", "breakpoints")) {
    std::vector<int> bp;
    bool ok = true;
    for (const std::string& t : it->tokens) {
      long v;
      if (!ps.to_int(*it, t, v)) {
        ok = false;
        break;
      }
      bp.push_back(static_cast<int>(v));
    }
    if (ok) {
      try {
        seglab::make_decomposition(cfg.d, bp);
        cfg.breakpoints = bp;
      } catch (const Error& e) {
        ps.semantic(it->line, std::string("breakpoints: ") + e.what());
      }
    }
  }

  // --- [coupling] ---
  {
    std::vector<double> a(static_cast<size_t>(cfg.d) * cfg.d, 0.0);
    bool any = false;
    double def = 0.0;
    const Item* defit = ps.find("coupling", "default");
    if (defit && ps.real1(defit, def)) {
      any = true;
      Decomposition dec = seglab::make_decomposition(cfg.d, cfg.breakpoints);
      for (int i = 1; i <= cfg.d; ++i)
        for (int j = 1; j <= cfg.d; ++j)
          if (i != j && dec.group_of(i) != dec.group_of(j))
            a[(i - 1) * cfg.d + j - 1] = def;
    }
    for (Item& it : ps.items) {
      if (it.section != "coupling" || it.key.rfind("a_", 0) != 0) continue;
      int i = 0, j = 0;
      if (std::sscanf(it.key.c_str(), "a_%d_%d", &i, &j) != 2 || i < 1 ||
          j < 1 || i > cfg.d || j > cfg.d) {
        ps.syntax(it.line, "'" + it.key + "': want a_<i>_<j> with 1 <= i,j <= d");
        continue;
      }
      double v;
      if (it.tokens.size() == 1 && ps.to_real(it, it.tokens[0], v)) {
        a[(i - 1) * cfg.d + j - 1] = v;
        a[(j - 1) * cfg.d + i - 1] = v;
        any = true;
      }
    }
    if (any) cfg.coupling = std::move(a);
  }

  // --- [forcing] ---
  if (const Item* it = ps.find("forcing", "family")) {
    const std::string& f = it->tokens.empty() ? std::string() : it->tokens[0];
    if (f == "zero")
      cfg.family = ForcingFamily::Zero;
    else if (f == "linear")
      cfg.family = ForcingFamily::Linear;
    else if (f == "grouped_power")
      cfg.family = ForcingFamily::GroupedPower;
    else
      ps.syntax(it->line, "family: one of zero, linear, grouped_power");
  }
  if (Item* it = ps.find("forcing", "lambda")) {
    std::vector<double> v;
    if (ps.reals(it, 1, 4096, v)) {
      if (static_cast<int>(v.size()) == cfg.d)
        cfg.lambda = v;
      else
        ps.semantic(it->line, "lambda: expected d = " + std::to_string(cfg.d) +
                                  " entries, got " + std::to_string(v.size()));
    }
  }
  for (Item& it : ps.items) {
    if (it.section != "forcing" || it.key.rfind("b_", 0) != 0) continue;
    if (cfg.b.empty()) cfg.b.assign(static_cast<size_t>(cfg.d) * cfg.d, 0.0);
    int i = 0, j = 0;
    if (std::sscanf(it.key.c_str(), "b_%d_%d", &i, &j) != 2 || i < 1 || j < 1 ||
        i > cfg.d || j > cfg.d) {
      ps.syntax(it.line, "'" + it.key + "': want b_<i>_<j> with 1 <= i,j <= d");
      continue;
    }
    double v;
    if (it.tokens.size() == 1 && ps.to_real(it, it.tokens[0], v)) {
      cfg.b[(i - 1) * cfg.d + j - 1] = v;
      cfg.b[(j - 1) * cfg.d + i - 1] = v;
    }
  }
  if (cfg.family != ForcingFamily::Zero && cfg.lambda.empty())
    cfg.lambda.assign(cfg.d, 0.0);

  // --- [solver] ---
  if (const Item* it = ps.find("solver", "p")) {
    if (ps.real1(it, cfg.p) && cfg.p < 1.0)
      ps.semantic(it->line, "p must be >= 1");
  }
  if (const Item* it = ps.find("solver", "tol")) {
    if (ps.real1(it, cfg.tol) && cfg.tol <= 0.0)
      ps.semantic(it->line, "tol must be > 0");
  }
  if (const Item* it = ps.find("solver", "omega")) {
    if (ps.real1(it, cfg.omega) && (cfg.omega <= 0.0 || cfg.omega > 1.0))
      ps.semantic(it->line, "omega must be in (0, 1]");
  }
  if (const Item* it = ps.find("solver", "max_iters")) {
    long v;
    if (ps.int1(it, v)) {
      if (v < 1)
        ps.semantic(it->line, "max_iters must be >= 1");
      else
        cfg.max_iters = v;
    }
  }
  ps.bool1(ps.find("solver", "multigrid"), cfg.multigrid);
  if (const Item* it = ps.find("solver", "seed")) {
    long v;
    if (ps.int1(it, v)) cfg.seed = static_cast<std::uint64_t>(v);
  }

  // --- [sweep] ---
  if (Item* it = ps.find("sweep", "beta")) {
    std::vector<double> v;
    if (ps.reals(it, 1, 4096, v)) {
      for (double bv : v)
        if (bv < 0.0) ps.semantic(it->line, "beta must be >= 0");
      for (size_t k = 1; k < v.size(); ++k)
        if (v[k] <= v[k - 1]) {
          ps.semantic(it->line, "schedule not ascending: beta[" +
                                    std::to_string(k) + "] <= beta[" +
                                    std::to_string(k - 1) + "]");
          break;
        }
      cfg.schedule = v;
    }
  }
  if (cfg.schedule.empty()) cfg.schedule = {0.0};
  ps.bool1(ps.find("sweep", "warm_start"), cfg.warm_start);

  // --- [boundary] ---
  cfg.boundary.assign(cfg.d, BoundaryFn{});
  for (Item& it : ps.items) {
    if (it.section != "boundary") continue;
    long comp = 0;
    const std::string idx = it.key.substr(1);
    char* end = nullptr;
    comp = std::strtol(idx.c_str(), &end, 10);
    if (idx.empty() || *end != '\0' || comp < 1 || comp > cfg.d) {
      ps.syntax(it.line,
                "'" + it.key + "': want u<i> with 1 <= i <= d = " +
                    std::to_string(cfg.d));
      continue;
    }
    parse_boundary_fn(ps, it, cfg.dim, cfg.boundary[comp - 1]);
  }

  // --- [diagnostics] ---
  {
    const double ex = cfg.high[0] - cfg.low[0];
    const double ey = cfg.high[1] - cfg.low[1];
    cfg.window.xlo = cfg.low[0] + 0.25 * ex;
    cfg.window.xhi = cfg.low[0] + 0.75 * ex;
    cfg.window.ylo = cfg.low[1] + 0.25 * ey;
    cfg.window.yhi = cfg.low[1] + 0.75 * ey;
  }
  if (Item* it = ps.find("diagnostics", "window")) {
    std::vector<double> v;
    const int want = cfg.dim == 1 ? 2 : 4;
    if (ps.reals(it, want, want, v)) {
      if (cfg.dim == 1) {
        cfg.window.xlo = v[0];
        cfg.window.xhi = v[1];
      } else {
        cfg.window.xlo = v[0];
        cfg.window.ylo = v[1];
        cfg.window.xhi = v[2];
        cfg.window.yhi = v[3];
      }
      if (cfg.window.xlo >= cfg.window.xhi ||
          (cfg.dim == 2 && cfg.window.ylo >= cfg.window.yhi))
        ps.semantic(it->line, "window: lo must be < hi");
      if (cfg.window.xlo < cfg.low[0] || cfg.window.xhi > cfg.high[0] ||
          (cfg.dim == 2 &&
           (cfg.window.ylo < cfg.low[1] || cfg.window.yhi > cfg.high[1])))
        ps.semantic(it->line, "window: outside the domain");
    }
  }
  if (Item* it = ps.find("diagnostics", "alpha")) {
    std::vector<double> v;
    if (ps.reals(it, 1, 64, v)) {
      for (double a : v)
        if (a <= 0.0 || a > 1.0)
          ps.semantic(it->line, "alpha values must be in (0, 1]");
      cfg.alphas = v;
    }
  }
  {
    std::vector<Item*> probes = ps.find_all("diagnostics", "probe");
    int k = 0;
    for (Item* it : probes) {
      ++k;
      std::vector<double> v;
      if (!ps.reals(it, cfg.dim, cfg.dim, v)) continue;
      Pt p{v[0], cfg.dim == 2 ? v[1] : 0.0};
      bool inside = p.x > cfg.low[0] && p.x < cfg.high[0] &&
                    (cfg.dim == 1 || (p.y > cfg.low[1] && p.y < cfg.high[1]));
      if (!inside) {
        std::ostringstream msg;
        msg << "probe " << k << " = (" << p.x;
        if (cfg.dim == 2) msg << ", " << p.y;
        msg << ") outside the domain extent";
        ps.semantic(it->line, msg.str());
        continue;
      }
      cfg.probes.push_back(p);
    }
    if (cfg.probes.empty())
      cfg.probes.push_back(Pt{(cfg.low[0] + cfg.high[0]) / 2.0,
                              cfg.dim == 2 ? (cfg.low[1] + cfg.high[1]) / 2.0
                                           : 0.0});
  }
  {
    double minext = cfg.high[0] - cfg.low[0];
    if (cfg.dim == 2) minext = std::min(minext, cfg.high[1] - cfg.low[1]);
    cfg.radii = {minext / 16.0, minext / 8.0, minext / 4.0};
    if (Item* it = ps.find("diagnostics", "radii")) {
      std::vector<double> v;
      if (ps.reals(it, 1, 256, v)) {
        bool ok = true;
        for (double r : v)
          if (r <= 0.0 || r >= minext) {
            ps.semantic(it->line, "radii must be in (0, min extent)");
            ok = false;
            break;
          }
        for (size_t q = 1; ok && q < v.size(); ++q)
          if (v[q] <= v[q - 1]) {
            ps.semantic(it->line, "radii must be ascending");
            ok = false;
          }
        if (ok) cfg.radii = v;
      }
    }
  }
  ps.bool1(ps.find("diagnostics", "classification"), cfg.classification);
  if (const Item* it = ps.find("diagnostics", "delta")) {
    if (ps.real1(it, cfg.delta) && (cfg.delta <= 0.0 || cfg.delta >= 0.5))
      ps.semantic(it->line, "delta must be in (0, 0.5)");
  }

  // --- [output] ---
  if (const Item* it = ps.find("output", "dir")) {
    if (it->tokens.size() == 1)
      cfg.out_dir = it->tokens[0];
    else
      ps.syntax(it->line, "'dir': expected one path token");
  }

  // --- cross checks that need several sections ---
  if (!cfg.coupling.empty()) {
    try {
      cfg.make_coupling();
    } catch (const Error& e) {
      ps.semantic(0, std::string("coupling: ") + e.what());
    }
  }
  if (cfg.family == ForcingFamily::GroupedPower && !cfg.b.empty()) {
    try {
      cfg.make_forcing();
    } catch (const Error& e) {
      ps.semantic(0, std::string("forcing: ") + e.what());
    }
  }

  out.issues = std::move(ps.issues);
  return out;
}

ParseOutcome parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ParseOutcome out;
    out.issues.push_back({0, false, "cannot open config file: " + path});
    return out;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace seglab
