#include "seglab/freeboundary.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "seglab/errors.hpp"
#include "seglab/quadrature.hpp"

namespace seglab {

namespace {

// |u^h| = sqrt(sum of squares over the group's components) at every node.
ScalarField group_magnitude(const FieldSet& f, const Decomposition& dec,
                            int h) {
  ScalarField out(f.grid, 0.0);
  for (int i : dec.group_members(h)) {
    const ScalarField& u = f.comp(i);
    for (size_t k = 0; k < out.v.size(); ++k) out.v[k] += u.v[k] * u.v[k];
  }
  for (double& v : out.v) v = std::sqrt(v);
  return out;
}

// Shared per-field state for classifying many points.
struct ClassifyContext {
  const FieldSet& f;
  const Decomposition& dec;
  ForcingSpec zero;
  AlmgrenEvaluator ev;
  std::vector<ScalarField> gmass;               // per group, 0-based
  std::vector<std::vector<ScalarField>> grads;  // [component][axis]
  double max_abs;

  ClassifyContext(const FieldSet& f_, const Decomposition& dec_)
      : f(f_),
        dec(dec_),
        zero(ForcingSpec::zero(f_.d())),
        ev(f_, zero, 1.0, AlmgrenMode::Limit),
        max_abs(f_.max_abs()) {
    require(dec.d() == f.d(), ErrorKind::ShapeMismatch,
            "decomposition size does not match the field set");
    for (int h = 1; h <= dec.m(); ++h)
      gmass.push_back(group_magnitude(f, dec, h));
    for (int i = 1; i <= f.d(); ++i) {
      std::vector<ScalarField> gi;
      for (int ax = 0; ax < f.grid.dim(); ++ax)
        gi.push_back(smooth_side_derivative(f.comp(i), ax));
      grads.push_back(std::move(gi));
    }
  }

  // Group (1-based) with the largest magnitude at an off-node point.
  int dominant_at(const Pt& p) const {
    int best = 1;
    double bv = -1.0;
    for (int h = 0; h < static_cast<int>(gmass.size()); ++h) {
      const double v = gmass[h].interp(p);
      if (v > bv) {
        bv = v;
        best = h + 1;
      }
    }
    return best;
  }

  // Sum of |grad u_i|^2 over the group's components at p.
  double side_gradient(const Pt& p, int group) const {
    double acc = 0.0;
    for (int i : dec.group_members(group))
      for (int ax = 0; ax < f.grid.dim(); ++ax) {
        const double v = grads[i - 1][ax].interp(p);
        acc += v * v;
      }
    return acc;
  }
};

// Index rectangle of nodes within distance rad of p (clamped to the grid).
struct Box {
  int xlo, xhi, ylo, yhi;
};
Box ball_box(const Grid& g, const Pt& p, double rad) {
  Box b{};
  b.xlo = std::max(0, static_cast<int>(std::floor((p.x - rad - g.low(0)) / g.h(0))));
  b.xhi = std::min(g.nx_total() - 1,
                   static_cast<int>(std::ceil((p.x + rad - g.low(0)) / g.h(0))));
  if (g.dim() == 2) {
    b.ylo = std::max(0, static_cast<int>(std::floor((p.y - rad - g.low(1)) / g.h(1))));
    b.yhi = std::min(g.ny_total() - 1,
                     static_cast<int>(std::ceil((p.y + rad - g.low(1)) / g.h(1))));
  } else {
    b.ylo = 0;
    b.yhi = 0;
  }
  return b;
}

// Principal direction of the nodal band near p, rotated to a normal; used
// when the magnitude-difference gradient degenerates.
Pt pca_normal(const ClassifyContext& cx, const Pt& p) {
  const Grid& g = cx.f.grid;
  if (g.dim() == 1) return Pt{1.0, 0.0};
  const double rad = 8.0 * g.hmax();
  const double band = 0.1 * cx.max_abs;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  long cnt = 0;
  const Box bx = ball_box(g, p, rad);
  for (int iy = bx.ylo; iy <= bx.yhi; ++iy)
    for (int ix = bx.xlo; ix <= bx.xhi; ++ix) {
      const Pt q = g.node(ix, iy);
      if (std::hypot(q.x - p.x, q.y - p.y) > rad) continue;
      double m = 0.0;
      for (int c = 0; c < cx.f.d(); ++c)
        m = std::max(m, std::fabs(cx.f.comp_[c].at(ix, iy)));
      if (m > band) continue;
      sx += q.x;
      sy += q.y;
      sxx += q.x * q.x;
      sxy += q.x * q.y;
      syy += q.y * q.y;
      ++cnt;
    }
  if (cnt < 2) return Pt{1.0, 0.0};
  const double n = static_cast<double>(cnt);
  const double cxx = sxx / n - (sx / n) * (sx / n);
  const double cxy = sxy / n - (sx / n) * (sy / n);
  const double cyy = syy / n - (sy / n) * (sy / n);
  // Eigenvector of the smaller eigenvalue of [[cxx,cxy],[cxy,cyy]].
  const double tr = cxx + cyy;
  const double det = cxx * cyy - cxy * cxy;
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  const double lmin = tr / 2.0 - disc;
  double vx = cxy, vy = lmin - cxx;
  double len = std::hypot(vx, vy);
  if (len < 1e-14) {
    vx = lmin - cyy;
    vy = cxy;
    len = std::hypot(vx, vy);
  }
  if (len < 1e-14) return Pt{1.0, 0.0};
  return Pt{vx / len, vy / len};
}

void fill_regular_extras(const ClassifyContext& cx, BoundaryPointClass& out,
                         int ix, int iy) {
  const Grid& g = cx.f.grid;
  const Pt p = out.x0;
  const double rad = 8.0 * g.hmax();

  // Two dominant groups near p (by peak magnitude inside B_{8h}).
  const int m = static_cast<int>(cx.gmass.size());
  std::vector<double> peak(m, 0.0);
  const Box bx = ball_box(g, p, rad);
  for (int jy = bx.ylo; jy <= bx.yhi; ++jy)
    for (int jx = bx.xlo; jx <= bx.xhi; ++jx) {
      const Pt q = g.node(jx, jy);
      if (std::hypot(q.x - p.x, q.y - p.y) > rad) continue;
      for (int h = 0; h < m; ++h)
        peak[h] = std::max(peak[h], cx.gmass[h].at(jx, jy));
    }
  int h1 = 0, h2 = 0;
  for (int h = 1; h < m; ++h)
    if (peak[h] > peak[h1]) h1 = h;
  h2 = (h1 == 0 && m > 1) ? 1 : 0;
  for (int h = 0; h < m; ++h)
    if (h != h1 && peak[h] > peak[h2]) h2 = h;

  // Normal from the centered difference of |u^{h1}| - |u^{h2}| at the node
  // (for a single group the signed strongest component takes its place).
  auto diff_at = [&](int jx, int jy) {
    if (m == 1) {
      int best = 0;
      double bv = 0.0;
      for (int c = 0; c < cx.f.d(); ++c) {
        const double v = std::fabs(cx.f.comp_[c].at(jx, jy));
        if (v > bv) {
          bv = v;
          best = c;
        }
      }
      return cx.f.comp_[best].at(jx, jy);
    }
    return cx.gmass[h1].at(jx, jy) - cx.gmass[h2].at(jx, jy);
  };
  Pt nu{};
  nu.x = (diff_at(ix + 1, iy) - diff_at(ix - 1, iy)) / (2.0 * g.h(0));
  if (g.dim() == 2)
    nu.y = (diff_at(ix, iy + 1) - diff_at(ix, iy - 1)) / (2.0 * g.h(1));
  double len = std::hypot(nu.x, nu.y);
  if (len < 1e-8) {
    nu = pca_normal(cx, p);
    len = 1.0;
  } else {
    nu.x /= len;
    nu.y /= len;
  }
  out.normal = nu;

  const double s = 4.0 * g.hmax();
  const Pt plus{p.x + s * nu.x, p.y + s * nu.y};
  const Pt minus{p.x - s * nu.x, p.y - s * nu.y};
  out.g_plus = cx.side_gradient(plus, cx.dominant_at(plus));
  out.g_minus = cx.side_gradient(minus, cx.dominant_at(minus));
}

BoundaryPointClass classify_one(const ClassifyContext& cx, const Pt& x0,
                                double gap_threshold, bool check_membership) {
  const Grid& g = cx.f.grid;
  int ix = 0, iy = 0;
  g.nearest_interior_node(x0, ix, iy);
  const Pt p = g.node(ix, iy);

  if (check_membership) {
    double mv = 0.0;
    for (int c = 0; c < cx.f.d(); ++c)
      mv = std::max(mv, std::fabs(cx.f.comp_[c].at(ix, iy)));
    require(mv <= 0.1 * cx.max_abs, ErrorKind::NotOnNodalSet,
            "point lies inside a support region, not on the nodal set");
  }

  BoundaryPointClass out;
  out.x0 = p;
  FrequencyEstimate est = estimate_frequency_limit(cx.ev, p);
  out.N_hat = est.N_hat;
  out.samples = std::move(est.samples);
  if (est.N_hat < gap_threshold - 0.05)
    out.cls = PointClass::Regular;
  else if (est.N_hat > gap_threshold + 0.05)
    out.cls = PointClass::Singular;
  else
    out.cls = PointClass::Indeterminate;
  if (out.cls == PointClass::Regular) fill_regular_extras(cx, out, ix, iy);
  return out;
}

}  // namespace

NodalSet extract_nodal_set(const FieldSet& f, const Decomposition& dec,
                           double delta, NodalVariant variant) {
  require(delta > 0.0 && delta < 0.5, ErrorKind::ThresholdOutOfRange,
          "nodal threshold must lie in (0, 0.5)");
  require(dec.d() == f.d(), ErrorKind::ShapeMismatch,
          "decomposition size does not match the field set");
  const Grid& g = f.grid;
  const double M = f.max_abs();

  NodalSet out;
  out.variant = variant;
  out.delta = delta;
  out.degenerate_all_zero = (M == 0.0);
  const int mx = g.nx_total();
  const int my = g.ny_total();
  auto push = [&](int ix, int iy) {
    out.points.push_back(g.node(ix, iy));
    out.nodes.push_back({ix, iy});
  };

  if (variant == NodalVariant::Full) {
    const double band = delta * M;
    for (int iy = 0; iy < my; ++iy)
      for (int ix = 0; ix < mx; ++ix) {
        double m = 0.0;
        for (int c = 0; c < f.d(); ++c)
          m = std::max(m, std::fabs(f.comp_[c].at(ix, iy)));
        if (m <= band) push(ix, iy);
      }
    return out;
  }

  // GroupWise: complement of the union over groups of the interior (after one
  // dilation) of the group's support region.
  const double thr = (delta * M) * (delta * M);
  const int oy_max = g.dim() == 2 ? 1 : 0;
  std::vector<char> covered(g.num_total(), 0);
  std::vector<char> sup(g.num_total()), dil(g.num_total());
  for (int h = 1; h <= dec.m(); ++h) {
    std::fill(sup.begin(), sup.end(), 0);
    std::fill(dil.begin(), dil.end(), 0);
    for (int iy = 0; iy < my; ++iy)
      for (int ix = 0; ix < mx; ++ix) {
        double acc = 0.0;
        for (int i : dec.group_members(h)) {
          const double v = f.comp(i).at(ix, iy);
          acc += v * v;
        }
        if (acc > thr) sup[g.idx(ix, iy)] = 1;
      }
    for (int iy = 0; iy < my; ++iy)
      for (int ix = 0; ix < mx; ++ix) {
        bool any = false;
        for (int oy = -oy_max; oy <= oy_max && !any; ++oy)
          for (int ox = -1; ox <= 1 && !any; ++ox) {
            const int jx = ix + ox, jy = iy + oy;
            if (jx < 0 || jx >= mx || jy < 0 || jy >= my) continue;
            any = sup[g.idx(jx, jy)] != 0;
          }
        if (any) dil[g.idx(ix, iy)] = 1;
      }
    for (int iy = 0; iy < my; ++iy)
      for (int ix = 0; ix < mx; ++ix) {
        if (!dil[g.idx(ix, iy)]) continue;
        bool interior = true;
        for (int oy = -oy_max; oy <= oy_max && interior; ++oy)
          for (int ox = -1; ox <= 1 && interior; ++ox) {
            const int jx = ix + ox, jy = iy + oy;
            if (jx < 0 || jx >= mx || jy < 0 || jy >= my) continue;
            interior = dil[g.idx(jx, jy)] != 0;
          }
        if (interior) covered[g.idx(ix, iy)] = 1;
      }
  }
  for (int iy = 0; iy < my; ++iy)
    for (int ix = 0; ix < mx; ++ix)
      if (!covered[g.idx(ix, iy)]) push(ix, iy);
  return out;
}

FieldSet blowup(const FieldSet& f, const Pt& x0, double t) {
  const Grid& g = f.grid;
  require(t > 0.0, ErrorKind::RadiusBelowResolution,
          "blow-up scale must be positive");
  require_ball_inside(g, x0, 2.0 * t, 2.0);

  const int d = f.d();
  auto mass = [&](const Pt& pt) {
    double acc = 0.0;
    for (int c = 0; c < d; ++c) {
      const double v = f.comp_[c].interp(pt);
      acc += v * v;
    }
    return acc;
  };
  const double H =
      circle_eval_integral(g, x0, t, mass) / std::pow(t, g.dim() - 1);
  const double scale = f.max_abs();
  require(H > 1e-24 * scale * scale, ErrorKind::ZeroH,
          "H(x0, t) vanishes; the blow-up cannot be normalized");

  const Grid ref = g.dim() == 1
                       ? Grid::make_1d(-2.0, 2.0, 127)
                       : Grid::make_2d({-2.0, -2.0}, {2.0, 2.0}, {127, 127});
  FieldSet v(ref, d);
  const double s = 1.0 / std::sqrt(H);
  for (int c = 0; c < d; ++c)
    for (int iy = 0; iy < ref.ny_total(); ++iy)
      for (int ix = 0; ix < ref.nx_total(); ++ix) {
        const Pt xr = ref.node(ix, iy);
        const Pt p{x0.x + t * xr.x, x0.y + t * xr.y};
        v.comp_[c].at(ix, iy) = s * f.comp_[c].interp(p);
      }
  return v;
}

FrequencyEstimate estimate_frequency_limit(const AlmgrenEvaluator& ev,
                                           const Pt& x0) {
  const Grid& g = ev.field().grid;
  const double h = g.hmax();
  const double bd = g.boundary_distance(x0);
  require(bd >= 10.0 * h, ErrorKind::RadiusBelowResolution,
          "frequency limit needs the point at least 10h inside the domain");

  FrequencyEstimate out;
  std::vector<double> xs, ys;
  for (double k : {3.0, 4.0, 6.0, 8.0, 12.0, 16.0}) {
    const double r = k * h;
    if (bd < r + 2.0 * h) continue;  // the ball must fit with margin
    AlmgrenSample s = ev.sample(x0, r);
    out.samples.push_back(s);
    if (s.n_defined && xs.size() < 3) {
      xs.push_back(r);
      ys.push_back(s.N);
    }
  }
  require(xs.size() >= 2, ErrorKind::ZeroH,
          "not enough defined frequency samples for the limit fit");

  // Least-squares line N(r) = N0 + c r, evaluated at r = 0.
  const double m = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double c = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  out.N_hat = (sy - c * sx) / m;
  return out;
}

FrequencyEstimate estimate_frequency_limit(const FieldSet& f, const Pt& x0) {
  ForcingSpec zero = ForcingSpec::zero(f.d());
  AlmgrenEvaluator ev(f, zero, 1.0, AlmgrenMode::Limit);
  return estimate_frequency_limit(ev, x0);
}

BoundaryPointClass classify_point(const FieldSet& f, const Decomposition& dec,
                                  const Pt& x0, double gap_threshold) {
  ClassifyContext cx(f, dec);
  return classify_one(cx, x0, gap_threshold, true);
}

std::vector<BoundaryPointClass> classify_nodal_set(const FieldSet& f,
                                                   const Decomposition& dec,
                                                   const NodalSet& ns,
                                                   double gap_threshold) {
  ClassifyContext cx(f, dec);
  const Grid& g = f.grid;
  const double margin = 10.0 * g.hmax();
  std::vector<BoundaryPointClass> out;
  for (const Pt& p : ns.points) {
    if (g.boundary_distance(p) < margin) continue;
    // Membership is given by the extraction; no re-check against the
    // classifier's own band.
    out.push_back(classify_one(cx, p, gap_threshold, false));
  }
  return out;
}

double reflection_residual(const FieldSet& f, const Decomposition& dec,
                           const BoundaryPointClass& x0, double s) {
  require(x0.cls == PointClass::Regular, ErrorKind::WrongClass,
          "reflection law applies to Regular points");
  const double h = f.grid.hmax();
  require(s >= 2.0 * h * (1.0 - 1e-12) && s <= 8.0 * h * (1.0 + 1e-12),
          ErrorKind::ThresholdOutOfRange,
          "probe distance must lie in [2h, 8h]");
  ClassifyContext cx(f, dec);
  const Pt plus{x0.x0.x + s * x0.normal.x, x0.x0.y + s * x0.normal.y};
  const Pt minus{x0.x0.x - s * x0.normal.x, x0.x0.y - s * x0.normal.y};
  const double gp = cx.side_gradient(plus, cx.dominant_at(plus));
  const double gm = cx.side_gradient(minus, cx.dominant_at(minus));
  require(gp > 1e-8 && gm > 1e-8, ErrorKind::VanishingSideGradient,
          "side gradient vanishes at a Regular point");
  return std::fabs(gp - gm) / std::max(gp, gm);
}

std::vector<double> gradient_vanishing_check(
    const FieldSet& f, const BoundaryPointClass& x0,
    const std::vector<double>& radii) {
  require(x0.cls == PointClass::Singular, ErrorKind::WrongClass,
          "gradient vanishing applies to Singular points");
  const Grid& g = f.grid;
  ScalarField gsq(g, 0.0);
  for (int i = 1; i <= f.d(); ++i)
    for (int ax = 0; ax < g.dim(); ++ax) {
      ScalarField di = smooth_side_derivative(f.comp(i), ax);
      for (size_t k = 0; k < gsq.v.size(); ++k) gsq.v[k] += di.v[k] * di.v[k];
    }
  std::vector<double> out;
  out.reserve(radii.size());
  for (double r : radii) {
    require_ball_inside(g, x0.x0, r, 0.0);
    double m = 0.0;
    const Box bx = ball_box(g, x0.x0, r);
    for (int iy = bx.ylo; iy <= bx.yhi; ++iy)
      for (int ix = bx.xlo; ix <= bx.xhi; ++ix) {
        const Pt q = g.node(ix, iy);
        if (std::hypot(q.x - x0.x0.x, q.y - x0.x0.y) > r) continue;
        m = std::max(m, gsq.at(ix, iy));
      }
    out.push_back(m);
  }
  return out;
}

AngleCheck equal_angles_check(const FieldSet& f, const Decomposition& dec,
                              const BoundaryPointClass& x0) {
  const Grid& g = f.grid;
  require(g.dim() == 2, ErrorKind::DimensionMismatch,
          "equal angles is a 2D check");
  require(x0.cls == PointClass::Singular, ErrorKind::WrongClass,
          "equal angles applies to Singular points");
  require(dec.d() == f.d(), ErrorKind::ShapeMismatch,
          "decomposition size does not match the field set");
  const double r = 8.0 * g.hmax();
  require_ball_inside(g, x0.x0, r, 2.0);

  const long M =
      std::max<long>(256, static_cast<long>(std::ceil(
                              2.0 * kPi * r / g.hmin() * 4.0)));
  const int m = dec.m();
  std::vector<std::vector<double>> gs(m, std::vector<double>(M, 0.0));
  double peak = 0.0;
  for (long k = 0; k < M; ++k) {
    const double th = 2.0 * kPi * static_cast<double>(k) / M;
    const Pt p{x0.x0.x + r * std::cos(th), x0.x0.y + r * std::sin(th)};
    for (int h = 1; h <= m; ++h) {
      double acc = 0.0;
      for (int i : dec.group_members(h)) {
        const double v = f.comp(i).interp(p);
        acc += v * v;
      }
      gs[h - 1][k] = acc;
      peak = std::max(peak, acc);
    }
  }
  require(peak > 0.0, ErrorKind::NoRaysFound,
          "the probe circle carries no mass");
  const double thr = 0.02 * peak;

  std::vector<char> below(M);
  long nbelow = 0;
  for (long k = 0; k < M; ++k) {
    bool b = true;
    for (int h = 0; h < m && b; ++h) b = gs[h][k] <= thr;
    below[k] = b;
    nbelow += b;
  }
  require(nbelow > 0 && nbelow < M, ErrorKind::NoRaysFound,
          "no distinguishable rays on the probe circle");

  // Maximal circular runs of below-threshold angles; midpoints are the rays.
  AngleCheck out;
  long start = 0;
  while (below[start]) ++start;  // begin on an above-threshold sample
  long k = start;
  do {
    if (below[k]) {
      long len = 0;
      long j = k;
      while (below[j]) {
        ++len;
        j = (j + 1) % M;
      }
      const double mid =
          2.0 * kPi * (static_cast<double>(k) + (len - 1) / 2.0) / M;
      out.rays.push_back(std::fmod(mid, 2.0 * kPi));
      k = j;
    } else {
      k = (k + 1) % M;
    }
  } while (k != start);
  std::sort(out.rays.begin(), out.rays.end());

  const int nray = static_cast<int>(out.rays.size());
  const double want = 2.0 * kPi / nray;
  for (int i = 0; i < nray; ++i) {
    const double a = out.rays[i];
    const double b = i + 1 < nray ? out.rays[i + 1] : out.rays[0] + 2.0 * kPi;
    out.max_deviation = std::max(out.max_deviation, std::fabs(b - a - want));
  }
  return out;
}

}  // namespace seglab
