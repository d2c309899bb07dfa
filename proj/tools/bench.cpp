#include <chrono>
#include <cmath>
#include <cstdio>

#include "seglab/kernels.hpp"
#include "seglab/quadrature.hpp"
#include "seglab/solver.hpp"
#include "seglab/synthetic.hpp"

using namespace seglab;
using clk = std::chrono::steady_clock;

namespace {

double ms_since(clk::time_point t0) {
  return std::chrono::duration<double, std::milli>(clk::now() - t0).count();
}

template <class F>
double time_best_of(int reps, F&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = clk::now();
    fn();
    best = std::min(best, ms_since(t0));
  }
  return best;
}

}  // namespace

int main() {
  std::printf("threads: %d\n\n", kernels::max_threads());

  // residual evaluation: parallel kernel vs naive serial loop
  {
    const int n = 768, d = 3;
    Grid g = Grid::make_2d({-1.0, -1.0}, {1.0, 1.0}, {n, n});
    FieldSet f = synth_triple_junction(g, Pt{0.0, 0.0});
    SolveConfig cfg;
    cfg.beta = 1e4;
    Decomposition dec = make_decomposition(d, {0, 1, 2, 3});
    Mat a(d);
    for (int i = 1; i <= d; ++i)
      for (int j = 1; j <= d; ++j) a.at(i, j) = i == j ? 0.0 : 1.0;
    CouplingMatrix A = validate_coupling(dec, a);
    ForcingSpec forcing = ForcingSpec::zero(d);

    const double tp = time_best_of(5, [&] { residual(f, cfg, A, forcing); });
    const double ts =
        time_best_of(5, [&] { residual_serial(f, cfg, A, forcing); });
    FieldSet rp = residual(f, cfg, A, forcing);
    FieldSet rs = residual_serial(f, cfg, A, forcing);
    double md = 0.0;
    for (int i = 0; i < d; ++i)
      for (long k = 0; k < g.num_total(); ++k)
        md = std::max(md, std::fabs(rp.comp_[i].v[k] - rs.comp_[i].v[k]));
    const double mpts = n * static_cast<double>(n) * d / 1e6;
    std::printf("residual  %dx%d d=%d  parallel %7.2f ms (%6.1f Mpt/s)  "
                "serial %7.2f ms (%6.1f Mpt/s)  speedup %.2fx  maxdiff %.1e\n",
                n, n, d, tp, mpts / tp * 1e3, ts, mpts / ts * 1e3, ts / tp,
                md);
  }

  // ball quadrature: chunked deterministic sum vs naive loop
  {
    const int n = 2047;
    Grid g = Grid::make_2d({-1.0, -1.0}, {1.0, 1.0}, {n, n});
    ScalarField u(g);
    for (int iy = 0; iy < g.ny_total(); ++iy)
      for (int ix = 0; ix < g.nx_total(); ++ix) {
        const Pt p = g.node(ix, iy);
        u.at(ix, iy) = std::cos(3.0 * p.x) * std::sin(2.0 * p.y);
      }
    const Pt c{0.0, 0.0};
    const double r = 0.9;
    const double tp = time_best_of(5, [&] { ball_integral(u, c, r); });
    const double ts = time_best_of(5, [&] { ball_integral_serial(u, c, r); });
    const double vp = ball_integral(u, c, r);
    const double vs = ball_integral_serial(u, c, r);
    std::printf("ball      %dx%d r=%.1f  parallel %7.2f ms  serial %7.2f ms  "
                "speedup %.2fx  diff %.1e\n",
                n, n, r, tp, ts, ts / tp, std::fabs(vp - vs));
  }

  // gradient energy field assembly (used by every diagnostics call)
  {
    const int n = 1023;
    Grid g = Grid::make_2d({-1.0, -1.0}, {1.0, 1.0}, {n, n});
    FieldSet f = synth_four_sector(g, Pt{0.0, 0.0});
    const double t = time_best_of(5, [&] { gradient_square_sum(f); });
    std::printf("gradsq    %dx%d d=2  %7.2f ms\n", n, n, t);
  }

  return 0;
}
