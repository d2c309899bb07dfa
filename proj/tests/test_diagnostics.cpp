#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <functional>
#include <vector>

#include "doctest.h"
#include "seglab/diagnostics.hpp"
#include "seglab/quadrature.hpp"
#include "seglab/solver.hpp"
#include "seglab/synthetic.hpp"

using namespace seglab;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::IoError;  // sentinel: "did not throw"
}

// Two-component symmetric 1D problem (crossing boundary data, zero forcing).
struct Sym1D {
  Grid grid;
  Decomposition dec;
  CouplingMatrix A;
  ForcingSpec forcing;
  FieldSet bc;

  static Sym1D make(int n) {
    Grid g = Grid::make_1d(0.0, 1.0, n);
    Decomposition dec = make_decomposition(2, {0, 1, 2});
    Mat a(2);
    a.at(1, 2) = a.at(2, 1) = 1.0;
    CouplingMatrix A = validate_coupling(dec, a);
    ForcingSpec f0 = ForcingSpec::zero(2);
    FieldSet bc(g, 2);
    bc.comp(1).at(0, 0) = 1.0;
    bc.comp(2).at(n + 1, 0) = 1.0;
    return {g, dec, A, f0, bc};
  }
};

}  // namespace

TEST_CASE("holder seminorm: linear profile attains 1 at maximal separation") {
  Grid g = Grid::make_1d(0.0, 1.0, 63);
  FieldSet f = synth_linear(g, 1.0, Pt{1.0, 0.0}, Pt{0.0, 0.0});
  const double v = holder_seminorm(f, 1, 0.5, Window{0.0, 1.0, 0.0, 0.0});
  CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("holder seminorm: constants give zero") {
  Grid g = Grid::make_1d(0.0, 1.0, 63);
  FieldSet f(g, 1);
  fill_component(f, 1, [](const Pt&) { return 4.2; });
  CHECK(holder_seminorm(f, 1, 0.3, Window{0.0, 1.0, 0.0, 0.0}) == 0.0);
}

TEST_CASE("holder seminorm: sqrt kink stays in the derived bracket") {
  Grid g = Grid::make_1d(0.0, 1.0, 255);
  FieldSet f(g, 1);
  fill_component(f, 1,
                 [](const Pt& p) { return std::sqrt(std::fabs(p.x - 0.5)); });
  const double v = holder_seminorm(f, 1, 0.5, Window{0.0, 1.0, 0.0, 0.0});
  CHECK(v >= 1.0 - 1e-12);
  CHECK(v <= 1.5);
}

TEST_CASE("holder seminorm: absolute homogeneity in the field") {
  Grid g = Grid::make_2d({0.0, 0.0}, {1.0, 1.0}, {47, 47});
  FieldSet f(g, 1);
  fill_component(f, 1, [](const Pt& p) {
    return std::sin(3.0 * p.x) * std::cos(2.0 * p.y);
  });
  FieldSet f3(g, 1);
  fill_component(f3, 1, [](const Pt& p) {
    return -3.0 * std::sin(3.0 * p.x) * std::cos(2.0 * p.y);
  });
  const Window w{0.1, 0.9, 0.1, 0.9};
  const double a = holder_seminorm(f, 1, 0.5, w);
  const double b = holder_seminorm(f3, 1, 0.5, w);
  CHECK(b == doctest::Approx(3.0 * a).epsilon(1e-12));
}

TEST_CASE("holder seminorm 2D: affine field maximized on the long diagonal") {
  // 33 nodes per axis: the full-domain diagonal separation 32 is dyadic, so
  // the sampled sup equals the true all-pairs sup for an affine field.
  Grid g = Grid::make_2d({0.0, 0.0}, {1.0, 1.0}, {31, 31});
  FieldSet f(g, 1);
  fill_component(f, 1, [](const Pt& p) { return p.x + p.y; });
  const double v = holder_seminorm(f, 1, 0.5, Window{0.0, 1.0, 0.0, 1.0});
  const double expect = 2.0 / std::sqrt(std::sqrt(2.0));
  CHECK(v == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("holder seminorm: precondition errors") {
  Grid g = Grid::make_1d(0.0, 1.0, 63);
  FieldSet f(g, 1);
  CHECK(kind_of([&] {
          holder_seminorm(f, 1, 1.0, Window{0.0, 1.0, 0.0, 0.0});
        }) == ErrorKind::AlphaOutOfRange);
  CHECK(kind_of([&] {
          holder_seminorm(f, 1, 0.0, Window{0.0, 1.0, 0.0, 0.0});
        }) == ErrorKind::AlphaOutOfRange);
  CHECK(kind_of([&] {
          holder_seminorm(f, 1, 0.5, Window{0.5, 1.5, 0.0, 0.0});
        }) == ErrorKind::WindowOutsideDomain);
  CHECK(kind_of([&] {
          holder_seminorm(f, 1, 0.5, Window{0.5, 0.55, 0.0, 0.0});
        }) == ErrorKind::WindowTooSmall);
}

TEST_CASE("interaction energy: disjoint supports vanish exactly") {
  Grid g = Grid::make_1d(0.0, 1.0, 127);
  FieldSet f = synth_kink_pair(g, Pt{1.0, 0.0}, 1.0, 1.0, Pt{0.5, 0.0});
  Decomposition dec = make_decomposition(2, {0, 1, 2});
  Mat a(2);
  a.at(1, 2) = a.at(2, 1) = 1.0;
  CouplingMatrix A = validate_coupling(dec, a);
  CHECK(interaction_energy(f, 1e5, 1.0, A, 1, 2,
                           Window{0.0, 1.0, 0.0, 0.0}) == 0.0);
}

TEST_CASE("interaction energy: unit constants integrate to beta") {
  Grid g = Grid::make_1d(0.0, 1.0, 63);
  FieldSet f(g, 2);
  fill_component(f, 1, [](const Pt&) { return 1.0; });
  fill_component(f, 2, [](const Pt&) { return 1.0; });
  Decomposition dec = make_decomposition(2, {0, 1, 2});
  Mat a(2);
  a.at(1, 2) = a.at(2, 1) = 1.0;
  CouplingMatrix A = validate_coupling(dec, a);
  const double v =
      interaction_energy(f, 2.0, 1.0, A, 1, 2, Window{0.0, 1.0, 0.0, 0.0});
  CHECK(v == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("interaction energy: same-group pair is rejected") {
  Grid g = Grid::make_1d(0.0, 1.0, 63);
  FieldSet f(g, 3);
  Decomposition dec = make_decomposition(3, {0, 2, 3});
  Mat a(3);
  a.at(1, 3) = a.at(3, 1) = 1.0;
  a.at(2, 3) = a.at(3, 2) = 1.0;
  CouplingMatrix A = validate_coupling(dec, a);
  CHECK(kind_of([&] {
          interaction_energy(f, 1.0, 1.0, A, 1, 2, Window{0.0, 1.0, 0.0, 0.0});
        }) == ErrorKind::NotCrossPair);
}

TEST_CASE("interaction energy: window restriction and 2D measure") {
  Grid g = Grid::make_2d({0.0, 0.0}, {1.0, 1.0}, {63, 63});
  FieldSet f(g, 2);
  fill_component(f, 1, [](const Pt&) { return 1.0; });
  fill_component(f, 2, [](const Pt&) { return 1.0; });
  Decomposition dec = make_decomposition(2, {0, 1, 2});
  Mat a(2);
  a.at(1, 2) = a.at(2, 1) = 2.0;
  CouplingMatrix A = validate_coupling(dec, a);
  const double v =
      interaction_energy(f, 3.0, 1.0, A, 1, 2, Window{0.25, 0.75, 0.25, 0.75});
  // beta * a12 * area of the window, up to one cell layer at the rim.
  CHECK(v == doctest::Approx(3.0 * 2.0 * 0.25).epsilon(0.05));
}

TEST_CASE("segregation sup: trivial cases") {
  Grid g = Grid::make_1d(0.0, 1.0, 31);
  Decomposition dec = make_decomposition(2, {0, 1, 2});

  FieldSet f(g, 2);
  fill_component(f, 1, [](const Pt& p) { return p.x; });
  CHECK(segregation_sup(f, dec) == 0.0);  // second component identically 0

  fill_component(f, 1, [](const Pt&) { return 2.0; });
  fill_component(f, 2, [](const Pt&) { return 3.0; });
  CHECK(segregation_sup(f, dec) == doctest::Approx(6.0));

  // Same-group overlap does not count.
  Decomposition one = make_decomposition(2, {0, 2});
  CHECK(segregation_sup(f, one) == 0.0);
}

TEST_CASE("almgren: linear profile has frequency one") {
  Grid g = Grid::make_2d({0.0, 0.0}, {1.0, 1.0}, {127, 127});
  FieldSet f = synth_linear(g, 1.0, Pt{0.6, 0.8}, Pt{0.5, 0.5});
  ForcingSpec f0 = ForcingSpec::zero(1);
  const Pt c = snap_to_node(g, Pt{0.5, 0.5});
  for (double r : {0.1, 0.2, 0.3}) {
    AlmgrenSample s = almgren(f, f0, 1.0, c, r, AlmgrenMode::Limit);
    REQUIRE(s.n_defined);
    CHECK(s.N == doctest::Approx(1.0).epsilon(0.02));
    CHECK(s.N == doctest::Approx(s.E / s.H).epsilon(1e-12));
  }
}

TEST_CASE("almgren: triple junction has frequency 3/2") {
  Grid g = Grid::make_2d({-1.0, -1.0}, {1.0, 1.0}, {127, 127});
  FieldSet f = synth_triple_junction(g, Pt{0.0, 0.0});
  ForcingSpec f0 = ForcingSpec::zero(3);
  const Pt c = snap_to_node(g, Pt{0.0, 0.0});
  AlmgrenSample s = almgren(f, f0, 1.0, c, 0.4, AlmgrenMode::Limit);
  REQUIRE(s.n_defined);
  CHECK(s.N == doctest::Approx(1.5).epsilon(0.03));
}

TEST_CASE("almgren: constant field in 2D") {
  Grid g = Grid::make_2d({0.0, 0.0}, {1.0, 1.0}, {63, 63});
  FieldSet f(g, 1);
  fill_component(f, 1, [](const Pt&) { return 2.0; });
  ForcingSpec f0 = ForcingSpec::zero(1);
  AlmgrenSample s =
      almgren(f, f0, 1.0, Pt{0.5, 0.5}, 0.25, AlmgrenMode::Limit);
  CHECK(s.H == doctest::Approx(2.0 * kPi * 4.0).epsilon(1e-9));
  CHECK(s.E == doctest::Approx(0.0).epsilon(1e-12));
  REQUIRE(s.n_defined);
  CHECK(s.N == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("almgren: 1D linear profile, exact two-point boundary mass") {
  Grid g = Grid::make_1d(0.0, 1.0, 127);
  FieldSet f = synth_linear(g, 1.0, Pt{1.0, 0.0}, Pt{0.5, 0.0});
  ForcingSpec f0 = ForcingSpec::zero(1);
  const Pt c = snap_to_node(g, Pt{0.5, 0.0});
  AlmgrenSample s = almgren(f, f0, 1.0, c, 0.25, AlmgrenMode::Limit);
  CHECK(s.H == doctest::Approx(2.0 * 0.25 * 0.25).epsilon(1e-9));
  CHECK(s.E == doctest::Approx(2.0 * 0.25 * 0.25).epsilon(1e-9));
  REQUIRE(s.n_defined);
  CHECK(s.N == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("almgren: frequency invariant under field scaling") {
  Grid g = Grid::make_2d({0.0, 0.0}, {1.0, 1.0}, {63, 63});
  FieldSet f = synth_linear(g, 1.0, Pt{1.0, 0.0}, Pt{0.5, 0.5});
  FieldSet fs = synth_linear(g, -7.5, Pt{1.0, 0.0}, Pt{0.5, 0.5});
  ForcingSpec f0 = ForcingSpec::zero(1);
  const Pt c = snap_to_node(g, Pt{0.5, 0.5});
  AlmgrenSample a = almgren(f, f0, 1.0, c, 0.2, AlmgrenMode::Limit);
  AlmgrenSample b = almgren(fs, f0, 1.0, c, 0.2, AlmgrenMode::Limit);
  CHECK(b.N == doctest::Approx(a.N).epsilon(1e-12));
  CHECK(b.H == doctest::Approx(7.5 * 7.5 * a.H).epsilon(1e-12));
}

TEST_CASE("almgren: translation of field and probe together") {
  Grid g = Grid::make_2d({0.0, 0.0}, {1.0, 1.0}, {95, 95});
  ForcingSpec f0 = ForcingSpec::zero(1);
  FieldSet fa = synth_linear(g, 1.0, Pt{1.0, 1.0}, Pt{0.4, 0.4});
  FieldSet fb = synth_linear(g, 1.0, Pt{1.0, 1.0}, Pt{0.6, 0.55});
  const Pt ca = snap_to_node(g, Pt{0.4, 0.4});
  const Pt cb = snap_to_node(g, Pt{0.6, 0.55});
  AlmgrenSample a = almgren(fa, f0, 1.0, ca, 0.15, AlmgrenMode::Limit);
  AlmgrenSample b = almgren(fb, f0, 1.0, cb, 0.15, AlmgrenMode::Limit);
  CHECK(b.N == doctest::Approx(a.N).epsilon(0.02));
  CHECK(b.H == doctest::Approx(a.H).epsilon(0.02));
}

TEST_CASE("almgren: WithForcing subtracts the forcing work") {
  // Constant field c with Linear forcing: E = lambda c^2 pi r^2 exactly,
  // H = 2 pi c^2, so N = lambda r^2 / 2.
  Grid g = Grid::make_2d({0.0, 0.0}, {1.0, 1.0}, {63, 63});
  FieldSet f(g, 1);
  fill_component(f, 1, [](const Pt&) { return 2.0; });
  ForcingSpec lin = ForcingSpec::linear({3.0});
  const double r = 0.3;
  AlmgrenSample s =
      almgren(f, lin, 1.0, Pt{0.5, 0.5}, r, AlmgrenMode::WithForcing);
  CHECK(s.E == doctest::Approx(3.0 * 4.0 * kPi * r * r).epsilon(1e-6));
  REQUIRE(s.n_defined);
  CHECK(s.N == doctest::Approx(3.0 * r * r / 2.0).epsilon(1e-6));
}

TEST_CASE("almgren: precondition errors") {
  Grid g = Grid::make_2d({0.0, 0.0}, {1.0, 1.0}, {31, 31});
  FieldSet f(g, 1);
  ForcingSpec f0 = ForcingSpec::zero(1);
  CHECK(kind_of([&] {
          almgren(f, f0, 1.0, Pt{0.9, 0.5}, 0.2, AlmgrenMode::Limit);
        }) == ErrorKind::BallOutsideDomain);
  CHECK(kind_of([&] {
          almgren(f, f0, 1.0, Pt{0.5, 0.5}, 0.5 * g.h(0), AlmgrenMode::Limit);
        }) == ErrorKind::RadiusBelowResolution);
}

TEST_CASE("almgren: log-derivative of H matches 2N/r on smooth profile") {
  Grid g = Grid::make_2d({0.0, 0.0}, {1.0, 1.0}, {127, 127});
  FieldSet f = synth_linear(g, 2.0, Pt{1.0, 0.5}, Pt{0.5, 0.5});
  ForcingSpec f0 = ForcingSpec::zero(1);
  const Pt c = snap_to_node(g, Pt{0.5, 0.5});
  const double r = 0.2, dr = 0.01;
  AlmgrenSample lo = almgren(f, f0, 1.0, c, r - dr, AlmgrenMode::Limit);
  AlmgrenSample hi = almgren(f, f0, 1.0, c, r + dr, AlmgrenMode::Limit);
  AlmgrenSample mid = almgren(f, f0, 1.0, c, r, AlmgrenMode::Limit);
  const double dlogH = (std::log(hi.H) - std::log(lo.H)) / (2.0 * dr);
  CHECK(dlogH == doctest::Approx(2.0 * mid.N / r).epsilon(0.05));
}

TEST_CASE("frequency curve: homogeneous fields are flat with zero defect") {
  Grid g = Grid::make_2d({-1.0, -1.0}, {1.0, 1.0}, {127, 127});
  FieldSet f = synth_triple_junction(g, Pt{0.0, 0.0});
  ForcingSpec f0 = ForcingSpec::zero(3);
  const Pt c = snap_to_node(g, Pt{0.0, 0.0});
  const double h = g.h(0);
  FrequencyCurve fc = frequency_curve(
      f, f0, 1.0, c, {3 * h, 4 * h, 6 * h, 8 * h, 12 * h, 16 * h, 0.3, 0.4},
      AlmgrenMode::Limit);
  CHECK(fc.C == 0.0);  // zero forcing -> zero drift constant
  CHECK(fc.undefined_samples == 0);
  for (const auto& s : fc.samples)
    CHECK(s.N == doctest::Approx(1.5).epsilon(0.03));
  CHECK(fc.defect < 1e-2);
}

TEST_CASE("frequency curve: kink pair is constant one") {
  Grid g = Grid::make_2d({0.0, 0.0}, {1.0, 1.0}, {127, 127});
  FieldSet f = synth_kink_pair(g, Pt{1.0, 0.0}, 1.0, 1.0, Pt{0.5, 0.5});
  ForcingSpec f0 = ForcingSpec::zero(2);
  const Pt c = snap_to_node(g, Pt{0.5, 0.5});
  FrequencyCurve fc = frequency_curve(f, f0, 1.0, c, {0.1, 0.2, 0.3},
                                      AlmgrenMode::Limit);
  for (const auto& s : fc.samples)
    CHECK(s.N == doctest::Approx(1.0).epsilon(0.02));
  CHECK(fc.defect < 1e-2);
}

TEST_CASE("frequency curve: high-beta interface defect stays small") {
  auto s = Sym1D::make(512);
  SolveConfig cfg;
  cfg.beta = 1e5;
  auto r = solve(s.grid, s.bc, cfg, s.dec, s.A, s.forcing);
  REQUIRE(r.rec.converged);
  const double h = s.grid.h(0);
  std::vector<double> radii;
  for (double rr = 3 * h; rr <= 0.1; rr *= 1.3) radii.push_back(rr);
  FrequencyCurve fc = frequency_curve(r.fields, s.forcing, 1.0,
                                      Pt{0.5, 0.0}, radii, AlmgrenMode::Limit);
  CHECK(fc.undefined_samples == 0);
  CHECK(fc.defect < 1e-2);
}

TEST_CASE("frequency curve: user C override and monotone forgiveness") {
  Grid g = Grid::make_2d({0.0, 0.0}, {1.0, 1.0}, {63, 63});
  FieldSet f = synth_linear(g, 1.0, Pt{1.0, 0.0}, Pt{0.5, 0.5});
  ForcingSpec f0 = ForcingSpec::zero(1);
  const Pt c = snap_to_node(g, Pt{0.5, 0.5});
  FrequencyCurve a = frequency_curve(f, f0, 1.0, c, {0.1, 0.2, 0.3},
                                     AlmgrenMode::Limit, 0.0);
  FrequencyCurve b = frequency_curve(f, f0, 1.0, c, {0.1, 0.2, 0.3},
                                     AlmgrenMode::Limit, 0.7);
  CHECK(b.C == doctest::Approx(0.7));
  CHECK(b.defect <= a.defect + 1e-15);
}

TEST_CASE("frequency curve: radius list validation") {
  Grid g = Grid::make_1d(0.0, 1.0, 63);
  FieldSet f(g, 1);
  ForcingSpec f0 = ForcingSpec::zero(1);
  CHECK(kind_of([&] {
          frequency_curve(f, f0, 1.0, Pt{0.5, 0.0}, {}, AlmgrenMode::Limit);
        }) == ErrorKind::ScheduleTooShort);
  CHECK(kind_of([&] {
          frequency_curve(f, f0, 1.0, Pt{0.5, 0.0}, {0.2, 0.1},
                          AlmgrenMode::Limit);
        }) == ErrorKind::NotAscending);
}

TEST_CASE("pohozaev: harmonic coordinate function balances to zero") {
  Grid g = Grid::make_2d({0.0, 0.0}, {1.0, 1.0}, {127, 127});
  FieldSet f = synth_linear(g, 1.0, Pt{1.0, 0.0}, Pt{0.0, 0.0});
  ForcingSpec f0 = ForcingSpec::zero(1);
  CHECK(pohozaev_residual(f, f0, 1.0, Pt{0.5, 0.5}, 0.3) < 1e-6);
}

TEST_CASE("pohozaev: zero field is exact") {
  Grid g = Grid::make_2d({0.0, 0.0}, {1.0, 1.0}, {31, 31});
  FieldSet f(g, 1);
  ForcingSpec f0 = ForcingSpec::zero(1);
  CHECK(pohozaev_residual(f, f0, 1.0, Pt{0.5, 0.5}, 0.2) == 0.0);
}

TEST_CASE("pohozaev: non-solution shows the analytic imbalance") {
  // u = (x-1/2)^2 is not harmonic; with f = 0 the two sides differ by
  // exactly 2 pi r^4 (the missing -2 source contributes -8 * pi r^4/4).
  Grid g = Grid::make_2d({0.0, 0.0}, {1.0, 1.0}, {127, 127});
  FieldSet f(g, 1);
  fill_component(f, 1, [](const Pt& p) {
    return (p.x - 0.5) * (p.x - 0.5);
  });
  ForcingSpec f0 = ForcingSpec::zero(1);
  const double r = 0.3;
  const double v = pohozaev_residual(f, f0, 1.0, Pt{0.5, 0.5}, r);
  CHECK(v == doctest::Approx(2.0 * kPi * r * r * r * r).epsilon(0.02));
}

TEST_CASE("pohozaev: 1D linear profile balances") {
  Grid g = Grid::make_1d(0.0, 1.0, 127);
  FieldSet f = synth_linear(g, 1.0, Pt{1.0, 0.0}, Pt{0.0, 0.0});
  ForcingSpec f0 = ForcingSpec::zero(1);
  CHECK(pohozaev_residual(f, f0, 1.0, Pt{0.5, 0.0}, 0.25) < 1e-9);
}

TEST_CASE("morrey quotient: unit gradient gives pi in 2D") {
  Grid g = Grid::make_2d({0.0, 0.0}, {1.0, 1.0}, {255, 255});
  FieldSet f = synth_linear(g, 1.0, Pt{1.0, 0.0}, Pt{0.0, 0.0});
  const double v = morrey_quotient(f, Pt{0.5, 0.5}, 0.25);
  CHECK(v == doctest::Approx(kPi).epsilon(0.01));
}

TEST_CASE("morrey quotient: constants give zero") {
  Grid g = Grid::make_2d({0.0, 0.0}, {1.0, 1.0}, {31, 31});
  FieldSet f(g, 1);
  fill_component(f, 1, [](const Pt&) { return 5.0; });
  CHECK(morrey_quotient(f, Pt{0.5, 0.5}, 0.2) == 0.0);
}

TEST_CASE("morrey quotient: kink pair bounded uniformly in r") {
  Grid g = Grid::make_2d({0.0, 0.0}, {1.0, 1.0}, {127, 127});
  FieldSet f = synth_kink_pair(g, Pt{1.0, 0.0}, 1.0, 1.0, Pt{0.5, 0.5});
  const Pt c = snap_to_node(g, Pt{0.5, 0.5});
  double lo = 1e300, hi = 0.0;
  for (double r : {0.05, 0.1, 0.2}) {
    const double v = morrey_quotient(f, c, r);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi / lo <= 10.0);
  CHECK(hi <= 2.0 * kPi);  // |grad|^2 <= 1 a.e. here, so quotient <= pi-ish
}

TEST_CASE("measure sign check: kink pair has no violations") {
  Grid g = Grid::make_1d(0.0, 1.0, 255);
  FieldSet f = synth_kink_pair(g, Pt{1.0, 0.0}, 1.0, 1.0, Pt{0.5, 0.0});
  Decomposition dec = make_decomposition(2, {0, 1, 2});
  ForcingSpec f0 = ForcingSpec::zero(2);
  SignCheckResult r = measure_sign_check(f, f0, 1.0, dec, 0.05);
  CHECK(r.checked > 0);
  CHECK(r.violations == 0);
}

TEST_CASE("measure sign check: smooth harmonic component off its zero set") {
  Grid g = Grid::make_2d({-1.0, -1.0}, {1.0, 1.0}, {63, 63});
  FieldSet f(g, 1);
  fill_component(f, 1, [](const Pt& p) { return p.x * p.y; });
  Decomposition dec = make_decomposition(1, {0, 1});
  ForcingSpec f0 = ForcingSpec::zero(1);
  SignCheckResult r = measure_sign_check(f, f0, 1.0, dec, 0.05);
  CHECK(r.violations == 0);
}

TEST_CASE("measure sign check: converged high-beta solve is clean") {
  auto s = Sym1D::make(512);
  SolveConfig cfg;
  cfg.beta = 1e5;
  auto r = solve(s.grid, s.bc, cfg, s.dec, s.A, s.forcing);
  REQUIRE(r.rec.converged);
  // At beta = 1e5 the components still overlap at ~0.056 of the sup norm
  // where they cross, so a 0.05 band would miss the interface entirely.
  SignCheckResult sc = measure_sign_check(r.fields, s.forcing, 1.0, s.dec,
                                          0.1);
  CHECK(sc.checked > 0);
  CHECK(sc.violations == 0);
}

TEST_CASE("measure sign check: threshold validation and zero field") {
  Grid g = Grid::make_1d(0.0, 1.0, 31);
  FieldSet f(g, 1);
  Decomposition dec = make_decomposition(1, {0, 1});
  ForcingSpec f0 = ForcingSpec::zero(1);
  CHECK(kind_of([&] { measure_sign_check(f, f0, 1.0, dec, 0.0); }) ==
        ErrorKind::ThresholdOutOfRange);
  CHECK(kind_of([&] { measure_sign_check(f, f0, 1.0, dec, 0.6); }) ==
        ErrorKind::ThresholdOutOfRange);
  SignCheckResult r = measure_sign_check(f, f0, 1.0, dec, 0.05);
  CHECK(r.violations == 0);
  CHECK(r.checked == 31);  // every interior node, single component
}

TEST_CASE("interaction energy: decays along an ascending sweep") {
  auto s = Sym1D::make(128);
  SolveConfig cfg;
  auto sweep = beta_sweep(s.grid, s.bc, cfg, s.dec, s.A, s.forcing,
                          {1e2, 1e4});
  REQUIRE(sweep.size() == 2);
  REQUIRE(sweep[0].result.rec.converged);
  REQUIRE(sweep[1].result.rec.converged);
  const Window w{0.25, 0.75, 0.0, 0.0};
  const double e_lo = interaction_energy(sweep[0].result.fields, 1e2, 1.0,
                                         s.A, 1, 2, w);
  const double e_hi = interaction_energy(sweep[1].result.fields, 1e4, 1.0,
                                         s.A, 1, 2, w);
  CHECK(e_hi < e_lo);
  // Segregation sup decreases too.
  CHECK(segregation_sup(sweep[1].result.fields, s.dec) <
        segregation_sup(sweep[0].result.fields, s.dec));
}

TEST_CASE("quadrature oracle: interaction energy against 4x brute force") {
  Grid g = Grid::make_1d(0.0, 1.0, 127);
  FieldSet f(g, 2);
  auto u1 = [](const Pt& p) { return std::sin(kPi * p.x); };
  auto u2 = [](const Pt& p) { return 0.5 + 0.3 * std::cos(2.0 * p.x); };
  fill_component(f, 1, u1);
  fill_component(f, 2, u2);
  Decomposition dec = make_decomposition(2, {0, 1, 2});
  Mat a(2);
  a.at(1, 2) = a.at(2, 1) = 1.5;
  CouplingMatrix A = validate_coupling(dec, a);
  const Window w{0.25, 0.75, 0.0, 0.0};
  const double v = interaction_energy(f, 2.0, 1.0, A, 1, 2, w);

  // Independent midpoint summation of the analytic integrand at 4x cells.
  const long m = 4 * 128;
  const double hh = 1.0 / static_cast<double>(m);
  double oracle = 0.0;
  for (long k = 0; k < m; ++k) {
    const double x = (static_cast<double>(k) + 0.5) * hh;
    if (x < 0.25 || x > 0.75) continue;
    const Pt p{x, 0.0};
    const double a1 = u1(p), a2 = u2(p);
    oracle += a1 * a1 * a2 * a2 * hh;
  }
  oracle *= 2.0 * 1.5;
  CHECK(v == doctest::Approx(oracle).epsilon(0.01));
}

TEST_CASE("quadrature oracle: morrey against 4x brute force") {
  Grid g = Grid::make_2d({0.0, 0.0}, {1.0, 1.0}, {127, 127});
  FieldSet f(g, 1);
  fill_component(f, 1, [](const Pt& p) {
    return std::sin(2.0 * p.x) * std::cos(p.y);
  });
  const Pt c{0.5, 0.5};
  const double r = 0.25;
  const double v = morrey_quotient(f, c, r);

  const long m = 4 * 128;
  const double hh = 1.0 / static_cast<double>(m);
  double oracle = 0.0;
  for (long kx = 0; kx < m; ++kx)
    for (long ky = 0; ky < m; ++ky) {
      const double x = (static_cast<double>(kx) + 0.5) * hh;
      const double y = (static_cast<double>(ky) + 0.5) * hh;
      const double dx = x - c.x, dy = y - c.y;
      if (dx * dx + dy * dy > r * r) continue;
      const double gx = 2.0 * std::cos(2.0 * x) * std::cos(y);
      const double gy = -std::sin(2.0 * x) * std::sin(y);
      oracle += (gx * gx + gy * gy) * hh * hh;
    }
  oracle /= r * r;
  CHECK(v == doctest::Approx(oracle).epsilon(0.01));
}
