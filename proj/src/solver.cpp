#include "seglab/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "seglab/kernels.hpp"

namespace seglab {

namespace {
constexpr int kMaxComponents = 16;
}

void SolveConfig::validate() const {
  require(beta >= 0.0 && std::isfinite(beta), ErrorKind::InvalidSolverConfig,
          "beta must be >= 0");
  require(p > 0.0 && std::isfinite(p), ErrorKind::InvalidSolverConfig, "p must be > 0");
  require(tol > 0.0, ErrorKind::InvalidSolverConfig, "tol must be > 0");
  require(max_iters >= 1, ErrorKind::InvalidSolverConfig, "max_iters must be >= 1");
  require(damping > 0.0 && damping <= 1.0, ErrorKind::InvalidSolverConfig,
          "damping must lie in (0,1]");
  require(eps > 0.0, ErrorKind::InvalidSolverConfig, "eps must be > 0");
  require(pre_sweeps >= 1 && post_sweeps >= 1 && coarse_sweeps >= 1,
          ErrorKind::InvalidSolverConfig, "sweep counts must be >= 1");
}

namespace {

struct Problem {
  const CouplingMatrix* A;
  const ForcingSpec* forcing;
  double beta, p, eps;
};

inline void check_shapes(const Grid& grid, const FieldSet& f, const Problem& pr,
                         const Decomposition& dec) {
  require(f.grid.same_shape(grid), ErrorKind::ShapeMismatch,
          "field grid does not match");
  require(f.d() == dec.d() && f.d() == pr.A->d() && f.d() == pr.forcing->d(),
          ErrorKind::ShapeMismatch, "component counts disagree");
  require(f.d() <= kMaxComponents, ErrorKind::InvalidSolverConfig,
          "at most 16 components supported");
}

// A(u)_i at one interior node; s = frozen state at the node, fvals = forcing.
inline double operator_at(const FieldSet& u, const Problem& pr, int i0, int ix,
                          int iy, const double* s, const double* fvals,
                          double ihx2, double ihy2) {
  const ScalarField& ui = u.comp_[i0];
  double lap = (ui.at(ix - 1, iy) - 2.0 * s[i0] + ui.at(ix + 1, iy)) * ihx2;
  if (u.grid.dim() == 2)
    lap += (ui.at(ix, iy - 1) - 2.0 * s[i0] + ui.at(ix, iy + 1)) * ihy2;
  double W = 0.0;
  for (int j0 = 0; j0 < u.d(); ++j0) {
    const double aij = (*pr.A)(i0 + 1, j0 + 1);
    if (aij != 0.0) W += aij * abs_pow(s[j0], pr.p + 1.0);
  }
  return -lap - fvals[i0] + pr.beta * signed_pow(s[i0], pr.p) * W;
}

template <bool Parallel>
FieldSet apply_operator(const FieldSet& u, const Problem& pr) {
  const Grid& g = u.grid;
  FieldSet out(g, u.d());
  const double ihx2 = 1.0 / (g.h(0) * g.h(0));
  const double ihy2 = g.dim() == 2 ? 1.0 / (g.h(1) * g.h(1)) : 0.0;
  const int nx = g.n(0);
  const long rows = g.dim() == 2 ? g.n(1) : 1;
  auto row_body = [&](long row) {
    const int iy = g.dim() == 2 ? static_cast<int>(row) + 1 : 0;
    std::array<double, kMaxComponents> s{}, fv{};
    for (int ix = 1; ix <= nx; ++ix) {
      for (int j = 0; j < u.d(); ++j) s[j] = u.comp_[j].at(ix, iy);
      pr.forcing->eval(pr.p, g.node(ix, iy), s.data(), fv.data());
      for (int i0 = 0; i0 < u.d(); ++i0)
        out.comp_[i0].at(ix, iy) =
            operator_at(u, pr, i0, ix, iy, s.data(), fv.data(), ihx2, ihy2);
    }
  };
  if (Parallel)
    kernels::parallel_for(rows, row_body);
  else
    for (long r = 0; r < rows; ++r) row_body(r);
  return out;
}

// max over interior nodes of |src - A(u)| (src = null means 0).
double operator_max_norm(const FieldSet& u, const Problem& pr,
                         const FieldSet* src = nullptr) {
  const Grid& g = u.grid;
  const double ihx2 = 1.0 / (g.h(0) * g.h(0));
  const double ihy2 = g.dim() == 2 ? 1.0 / (g.h(1) * g.h(1)) : 0.0;
  const int nx = g.n(0);
  const long rows = g.dim() == 2 ? g.n(1) : 1;
  return kernels::parallel_max(
      rows,
      [&](long row) {
        const int iy = g.dim() == 2 ? static_cast<int>(row) + 1 : 0;
        std::array<double, kMaxComponents> s{}, fv{};
        double m = 0.0;
        for (int ix = 1; ix <= nx; ++ix) {
          for (int j = 0; j < u.d(); ++j) s[j] = u.comp_[j].at(ix, iy);
          pr.forcing->eval(pr.p, g.node(ix, iy), s.data(), fv.data());
          for (int i0 = 0; i0 < u.d(); ++i0) {
            double r = operator_at(u, pr, i0, ix, iy, s.data(), fv.data(), ihx2,
                                   ihy2);
            if (src) r = src->comp_[i0].at(ix, iy) - r;
            m = std::max(m, std::fabs(r));
          }
        }
        return m;
      },
      0.0);
}

// Interior L2 norm of src - A(u). Coarse-grid corrections are judged in this
// norm: in a max norm the handful of interface-layer nodes (where the coarse
// grid cannot represent the state) vetoes corrections that fix the smooth
// error everywhere else, and the cycle degenerates into plain smoothing.
double operator_l2_norm(const FieldSet& u, const Problem& pr,
                        const FieldSet* src = nullptr) {
  FieldSet r = apply_operator<true>(u, pr);
  double ss = 0.0;
  for (int i0 = 0; i0 < u.d(); ++i0) {
    const double* a = r.comp_[i0].v.data();
    const double* b = src ? src->comp_[i0].v.data() : nullptr;
    ss += kernels::parallel_sum(u.grid.num_total(), [&](long k) {
      const double diff = (b ? b[k] : 0.0) - a[k];
      return diff * diff;
    });
  }
  return std::sqrt(ss);
}

// One lexicographic damped Gauss-Seidel sweep: at each node, each component
// solves its scalar equation with neighbors and other components frozen,
// using the semi-implicit linearization beta a_ij |u_i|^{p-1}_eps u_i
// |u_j|^{p+1}. src is the FAS coarse-level source (null on the finest level).
void gs_sweep(FieldSet& u, const FieldSet* src, const Problem& pr, double omega) {
  const Grid& g = u.grid;
  const double ihx2 = 1.0 / (g.h(0) * g.h(0));
  const double ihy2 = g.dim() == 2 ? 1.0 / (g.h(1) * g.h(1)) : 0.0;
  const double D = 2.0 * ihx2 + (g.dim() == 2 ? 2.0 * ihy2 : 0.0);
  const int iy_lo = g.dim() == 2 ? 1 : 0;
  const int iy_hi = g.dim() == 2 ? g.n(1) : 0;
  const bool p_is_one = pr.p == 1.0;
  std::array<double, kMaxComponents> s{}, fv{};

  for (int iy = iy_lo; iy <= iy_hi; ++iy)
    for (int ix = 1; ix <= g.n(0); ++ix) {
      for (int j = 0; j < u.d(); ++j) s[j] = u.comp_[j].at(ix, iy);
      for (int i0 = 0; i0 < u.d(); ++i0) {
        const ScalarField& ui = u.comp_[i0];
        double S = (ui.at(ix - 1, iy) + ui.at(ix + 1, iy)) * ihx2;
        if (g.dim() == 2) S += (ui.at(ix, iy - 1) + ui.at(ix, iy + 1)) * ihy2;
        double W = 0.0;
        for (int j0 = 0; j0 < u.d(); ++j0) {
          const double aij = (*pr.A)(i0 + 1, j0 + 1);
          if (aij != 0.0) W += aij * abs_pow(s[j0], pr.p + 1.0);
        }
        const double q =
            p_is_one ? 1.0
                     : std::pow(s[i0] * s[i0] + pr.eps * pr.eps, 0.5 * (pr.p - 1.0));
        const double G = pr.forcing->implicit_coeff(i0 + 1, pr.p, s.data(), pr.eps);
        double rhs = S;
        if (src) rhs += src->comp_[i0].at(ix, iy);
        const double denom = D + pr.beta * q * W - G;
        double v;
        if (denom > 0.5 * D) {
          v = rhs / denom;
        } else {
          // Forcing too stiff for the implicit split at this node: treat the
          // forcing explicitly; the competition part keeps the denominator
          // positive.
          pr.forcing->eval(pr.p, g.node(ix, iy), s.data(), fv.data());
          v = (rhs + fv[i0]) / (D + pr.beta * q * W);
        }
        const double unew = s[i0] + omega * (v - s[i0]);
        u.comp_[i0].at(ix, iy) = unew;
        s[i0] = unew;
      }
    }
}

// ---- FAS multigrid -------------------------------------------------------

struct Level {
  Grid g;
  FieldSet bc;
};

// Coarse fields are sampled from fine ones by interpolation; grids need not
// nest (n does not halve exactly when n+1 is odd).
FieldSet restrict_all(const FieldSet& uf, const Grid& gc) {
  FieldSet out(gc, uf.d());
  for (int i0 = 0; i0 < uf.d(); ++i0)
    for (int iy = 0; iy < gc.ny_total(); ++iy)
      for (int ix = 0; ix < gc.nx_total(); ++ix)
        out.comp_[i0].at(ix, iy) = uf.comp_[i0].interp(gc.node(ix, iy));
  return out;
}

FieldSet restrict_interior(const FieldSet& rf, const Grid& gc) {
  FieldSet out(gc, rf.d());
  const int iy_lo = gc.dim() == 2 ? 1 : 0;
  const int iy_hi = gc.dim() == 2 ? gc.n(1) : 0;
  for (int i0 = 0; i0 < rf.d(); ++i0)
    for (int iy = iy_lo; iy <= iy_hi; ++iy)
      for (int ix = 1; ix <= gc.n(0); ++ix)
        out.comp_[i0].at(ix, iy) = rf.comp_[i0].interp(gc.node(ix, iy));
  return out;
}

void add_prolonged(FieldSet& uf, const FieldSet& ec) {
  const Grid& g = uf.grid;
  const int iy_lo = g.dim() == 2 ? 1 : 0;
  const int iy_hi = g.dim() == 2 ? g.n(1) : 0;
  for (int i0 = 0; i0 < uf.d(); ++i0)
    for (int iy = iy_lo; iy <= iy_hi; ++iy)
      for (int ix = 1; ix <= g.n(0); ++ix)
        uf.comp_[i0].at(ix, iy) += ec.comp_[i0].interp(g.node(ix, iy));
}

std::vector<Level> build_levels(const Grid& fine, const FieldSet& bc) {
  std::vector<Level> levels;
  levels.push_back({fine, bc});
  while (true) {
    const Grid& g = levels.back().g;
    int n0 = g.n(0) / 2;
    int n1 = g.dim() == 2 ? g.n(1) / 2 : 0;
    if (n0 < 8 || (g.dim() == 2 && n1 < 8)) break;
    Grid gc = g.dim() == 2
                  ? Grid::make_2d({g.low(0), g.low(1)}, {g.high(0), g.high(1)},
                                  {n0, n1})
                  : Grid::make_1d(g.low(0), g.high(0), n0);
    levels.push_back({gc, restrict_all(levels.back().bc, gc)});
  }
  return levels;
}

// Returns finest-level sweeps performed (level 0 only).
long vcycle(const std::vector<Level>& levels, size_t lev, FieldSet& u,
            const FieldSet* src, const Problem& pr, const SolveConfig& cfg,
            double omega) {
  if (lev + 1 == levels.size()) {
    for (int k = 0; k < cfg.coarse_sweeps; ++k) gs_sweep(u, src, pr, omega);
    return lev == 0 ? cfg.coarse_sweeps : 0;
  }
  for (int k = 0; k < cfg.pre_sweeps; ++k) gs_sweep(u, src, pr, omega);

  FieldSet Au = apply_operator<true>(u, pr);
  FieldSet rf(u.grid, u.d());
  for (int i0 = 0; i0 < u.d(); ++i0)
    for (long k = 0; k < u.grid.num_total(); ++k)
      rf.comp_[i0].v[k] =
          (src ? src->comp_[i0].v[k] : 0.0) - Au.comp_[i0].v[k];

  const Level& next = levels[lev + 1];
  FieldSet uc = restrict_all(u, next.g);
  FieldSet rc = restrict_interior(rf, next.g);
  FieldSet src_c = apply_operator<true>(uc, pr);
  for (int i0 = 0; i0 < uc.d(); ++i0)
    for (long k = 0; k < next.g.num_total(); ++k)
      src_c.comp_[i0].v[k] += rc.comp_[i0].v[k];

  FieldSet uc0 = uc;
  vcycle(levels, lev + 1, uc, &src_c, pr, cfg, omega);

  for (int i0 = 0; i0 < uc.d(); ++i0)
    for (long k = 0; k < next.g.num_total(); ++k)
      uc.comp_[i0].v[k] -= uc0.comp_[i0].v[k];

  // Prolong the correction once, then take the largest step (1, 1/2, 1/4)
  // that does not increase this level's residual; skip it entirely when even
  // the smallest step makes things worse.  Keeps the cycle stable for stiff
  // coupling where the coarse problem segregates differently from the fine.
  FieldSet corr(u.grid, u.d());
  add_prolonged(corr, uc);
  const double r0 = operator_l2_norm(u, pr, src);
  for (double step : {1.0, 0.5, 0.25}) {
    FieldSet trial = u;
    for (int i0 = 0; i0 < u.d(); ++i0)
      for (long k = 0; k < u.grid.num_total(); ++k)
        trial.comp_[i0].v[k] += step * corr.comp_[i0].v[k];
    if (operator_l2_norm(trial, pr, src) <= r0) {
      u = std::move(trial);
      break;
    }
  }

  for (int k = 0; k < cfg.post_sweeps; ++k) gs_sweep(u, src, pr, omega);
  return lev == 0 ? cfg.pre_sweeps + cfg.post_sweeps : 0;
}

bool fields_finite(const FieldSet& u) {
  for (const auto& c : u.comp_)
    if (!c.all_finite()) return false;
  return true;
}

SolveResult solve_impl(const Grid& grid, const FieldSet& bc,
                       const SolveConfig& cfg, const Problem& pr,
                       FieldSet u) {
  std::vector<Level> levels;
  if (cfg.multigrid) levels = build_levels(grid, bc);

  ConvergenceRecord rec;
  double omega = cfg.damping;
  int halvings = 0;

  auto rel_residual = [&](const FieldSet& f) {
    return operator_max_norm(f, pr) / (1.0 + f.max_abs());
  };

  double res = rel_residual(u);
  FieldSet best = u;
  double best_res = res;
  long sweeps = 0;
  int frozen = 0;
  FieldSet prev_u = u;

  while (res > cfg.tol && sweeps < cfg.max_iters) {
    prev_u = u;
    if (cfg.multigrid)
      sweeps += vcycle(levels, 0, u, nullptr, pr, cfg, omega);
    else {
      gs_sweep(u, nullptr, pr, omega);
      sweeps += 1;
    }
    if (!fields_finite(u)) {
      rec.diverged = true;
      break;
    }
    res = rel_residual(u);
    if (res < best_res) {
      best = u;
      best_res = res;
    } else if (res > 2.0 * best_res && halvings < 4) {
      // Residual increase beyond noise level: damp harder (at most 4 times).
      omega *= 0.5;
      ++halvings;
    }
    // When an iteration no longer moves the iterate beyond rounding noise the
    // residual has hit its floating-point floor; more sweeps cannot help.
    double du = 0.0;
    for (int i0 = 0; i0 < u.d(); ++i0)
      for (long k = 0; k < grid.num_total(); ++k)
        du = std::max(du,
                      std::fabs(u.comp_[i0].v[k] - prev_u.comp_[i0].v[k]));
    if (du == 0.0) {
      if (++frozen >= 3) break;
    } else {
      frozen = 0;
    }
    if (std::getenv("SEGLAB_TRACE"))
      std::fprintf(stderr, "sweeps=%ld res=%.3e omega=%.3f du=%.3e\n", sweeps,
                   res, omega, du);
  }

  rec.iters = sweeps;
  rec.converged = !rec.diverged && res <= cfg.tol;
  if (rec.converged) {
    rec.final_residual = res;
    return {std::move(u), rec};
  }
  rec.final_residual = best_res;
  return {std::move(best), rec};
}

void stamp_boundary(FieldSet& u, const FieldSet& bc) {
  const Grid& g = u.grid;
  for (int i0 = 0; i0 < u.d(); ++i0)
    for (int iy = 0; iy < g.ny_total(); ++iy)
      for (int ix = 0; ix < g.nx_total(); ++ix) {
        const bool bnode = ix == 0 || ix == g.n(0) + 1 ||
                           (g.dim() == 2 && (iy == 0 || iy == g.n(1) + 1));
        if (bnode) u.comp_[i0].at(ix, iy) = bc.comp_[i0].at(ix, iy);
      }
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97f4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

FieldSet residual(const FieldSet& f, const SolveConfig& cfg,
                  const CouplingMatrix& A, const ForcingSpec& forcing) {
  Problem pr{&A, &forcing, cfg.beta, cfg.p, cfg.eps};
  require(f.d() == A.d() && f.d() == forcing.d(), ErrorKind::ShapeMismatch,
          "component counts disagree");
  require(f.d() <= kMaxComponents, ErrorKind::InvalidSolverConfig,
          "at most 16 components supported");
  return apply_operator<true>(f, pr);
}

FieldSet residual_serial(const FieldSet& f, const SolveConfig& cfg,
                         const CouplingMatrix& A, const ForcingSpec& forcing) {
  Problem pr{&A, &forcing, cfg.beta, cfg.p, cfg.eps};
  require(f.d() == A.d() && f.d() == forcing.d(), ErrorKind::ShapeMismatch,
          "component counts disagree");
  return apply_operator<false>(f, pr);
}

double residual_max_norm(const FieldSet& f, const SolveConfig& cfg,
                         const CouplingMatrix& A, const ForcingSpec& forcing) {
  Problem pr{&A, &forcing, cfg.beta, cfg.p, cfg.eps};
  return operator_max_norm(f, pr);
}

FieldSet default_init(const Grid& grid, const FieldSet& boundary,
                      const SolveConfig& cfg) {
  const int d = boundary.d();
  Decomposition dec1 = make_decomposition(d, {0, d});  // one group: no coupling
  CouplingMatrix A0 = validate_coupling(dec1, Mat(d, 0.0));
  ForcingSpec f0 = ForcingSpec::zero(d);

  SolveConfig hcfg = cfg;
  hcfg.beta = 0.0;

  FieldSet u(grid, d);
  stamp_boundary(u, boundary);
  Problem pr{&A0, &f0, 0.0, cfg.p, cfg.eps};
  SolveResult harmonic = solve_impl(grid, boundary, hcfg, pr, std::move(u));

  const double amp = 0.01 * boundary.max_abs();
  if (amp > 0.0) {
    std::uint64_t state = cfg.seed;
    const Grid& g = grid;
    const int iy_lo = g.dim() == 2 ? 1 : 0;
    const int iy_hi = g.dim() == 2 ? g.n(1) : 0;
    for (int i0 = 0; i0 < d; ++i0)
      for (int iy = iy_lo; iy <= iy_hi; ++iy)
        for (int ix = 1; ix <= g.n(0); ++ix) {
          const double xi =
              static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
          harmonic.fields.comp_[i0].at(ix, iy) += amp * (2.0 * xi - 1.0);
        }
  }
  return std::move(harmonic.fields);
}

SolveResult solve(const Grid& grid, const FieldSet& boundary,
                  const SolveConfig& cfg, const Decomposition& dec,
                  const CouplingMatrix& A, const ForcingSpec& forcing,
                  const FieldSet* init) {
  cfg.validate();
  Problem pr{&A, &forcing, cfg.beta, cfg.p, cfg.eps};
  check_shapes(grid, boundary, pr, dec);
  boundary.require_finite("boundary trace");

  FieldSet u = init ? *init : default_init(grid, boundary, cfg);
  if (init) {
    check_shapes(grid, u, pr, dec);
    u.require_finite("initial iterate");
  }
  stamp_boundary(u, boundary);
  return solve_impl(grid, boundary, cfg, pr, std::move(u));
}

std::vector<SweepEntry> beta_sweep(const Grid& grid, const FieldSet& boundary,
                                   const SolveConfig& base,
                                   const Decomposition& dec,
                                   const CouplingMatrix& A,
                                   const ForcingSpec& forcing,
                                   const std::vector<double>& schedule) {
  require(schedule.size() >= 2, ErrorKind::ScheduleTooShort,
          "beta schedule needs at least 2 entries");
  for (size_t k = 0; k < schedule.size(); ++k) {
    require(schedule[k] >= 0.0, ErrorKind::NotAscending, "beta must be >= 0");
    if (k > 0)
      require(schedule[k] > schedule[k - 1], ErrorKind::NotAscending,
              "beta schedule must be strictly ascending");
  }

  std::vector<SweepEntry> out;
  out.reserve(schedule.size());
  const FieldSet* prev = nullptr;
  for (size_t k = 0; k < schedule.size(); ++k) {
    SolveConfig cfg = base;
    cfg.beta = schedule[k];
    SweepEntry e;
    e.beta = schedule[k];
    e.warm_started = prev != nullptr;
    e.restarted_from_default = k > 0 && prev == nullptr;
    e.result = solve(grid, boundary, cfg, dec, A, forcing, prev);
    out.push_back(std::move(e));
    prev = out.back().result.rec.converged ? &out.back().result.fields : nullptr;
  }
  return out;
}

}  // namespace seglab
