#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "seglab/quadrature.hpp"

using namespace seglab;

namespace {

ScalarField sample_2d(const Grid& g, const std::function<double(double, double)>& fn) {
  ScalarField f(g);
  for (int iy = 0; iy < g.ny_total(); ++iy)
    for (int ix = 0; ix < g.nx_total(); ++ix)
      f.at(ix, iy) = fn(g.coord(0, ix), g.coord(1, iy));
  return f;
}

ScalarField sample_1d(const Grid& g, const std::function<double(double)>& fn) {
  ScalarField f(g);
  for (int ix = 0; ix < g.nx_total(); ++ix) f.at(ix, 0) = fn(g.coord(0, ix));
  return f;
}

// Independent brute-force oracle: midpoint summation of the analytic function
// on a lattice `refine` times finer than h, direct loop, no interpolation.
double oracle_ball(const std::function<double(double, double)>& fn, Pt x0, double r,
                   double h, int refine) {
  const double hf = h / refine;
  const long m = static_cast<long>(std::ceil(r / hf)) + 2;
  double acc = 0.0;
  for (long ky = -m; ky < m; ++ky)
    for (long kx = -m; kx < m; ++kx) {
      const double cx = x0.x + (kx + 0.5) * hf;
      const double cy = x0.y + (ky + 0.5) * hf;
      const double dx = cx - x0.x, dy = cy - x0.y;
      if (dx * dx + dy * dy <= r * r) acc += fn(cx, cy);
    }
  return acc * hf * hf;
}

}  // namespace

TEST_CASE("ball integral: constants") {
  Grid g = Grid::make_2d({-0.5, -0.5}, {0.5, 0.5}, {255, 255});
  auto one = sample_2d(g, [](double, double) { return 1.0; });
  const double r = 0.25;
  const double got = ball_integral(one, {0, 0}, r);
  const double want = kPi * r * r;
  // cell-counting rule: error bounded by ~3h * perimeter
  CHECK(std::fabs(got - want) < 3.0 * g.h(0) * (2.0 * kPi * r));

  auto zero = sample_2d(g, [](double, double) { return 0.0; });
  CHECK(ball_integral(zero, {0, 0}, r) == 0.0);
}

TEST_CASE("ball integral of x^2 vs frozen analytic value and 4x oracle") {
  // analytic: integral of x^2 over B_0.25(0) = pi r^4 / 4 = 3.0679616e-3
  Grid g = Grid::make_2d({-0.5, -0.5}, {0.5, 0.5}, {255, 255});
  auto f = sample_2d(g, [](double x, double) { return x * x; });
  const double got = ball_integral(f, {0, 0}, 0.25);
  const double analytic = 3.0679616e-3;
  CHECK(std::fabs(got - analytic) / analytic < 0.01);

  const double orc = oracle_ball([](double x, double) { return x * x; }, {0, 0},
                                 0.25, g.h(0), 4);
  CHECK(std::fabs(orc - analytic) / analytic < 0.005);
  CHECK(std::fabs(got - orc) / std::fabs(orc) < 0.01);
}

TEST_CASE("ball integral parallel kernel matches serial reference") {
  Grid g = Grid::make_2d({-0.5, -0.5}, {0.5, 0.5}, {127, 127});
  auto f = sample_2d(g, [](double x, double y) { return std::sin(3 * x) + y * y; });
  const double a = ball_integral(f, {0.05, -0.03}, 0.3);
  const double b = ball_integral_serial(f, {0.05, -0.03}, 0.3);
  CHECK(a == doctest::Approx(b).epsilon(1e-13));
}

TEST_CASE("ball integral refinement: halving h reduces x^2 error by >= 1.7") {
  const double analytic = 3.0679616e-3;
  double err[2];
  int k = 0;
  for (int n : {255, 511}) {
    Grid g = Grid::make_2d({-0.5, -0.5}, {0.5, 0.5}, {n, n});
    auto f = sample_2d(g, [](double x, double) { return x * x; });
    err[k++] = std::fabs(ball_integral(f, {0, 0}, 0.25) - analytic);
  }
  CHECK(err[0] / err[1] >= 1.7);
}

TEST_CASE("sphere integral: circumference and x^2 moment") {
  Grid g = Grid::make_2d({-0.5, -0.5}, {0.5, 0.5}, {255, 255});
  auto one = sample_2d(g, [](double, double) { return 1.0; });
  const double r = 0.25;
  CHECK(std::fabs(sphere_integral(one, {0, 0}, r) - 2.0 * kPi * r) /
            (2.0 * kPi * r) <
        0.005);

  auto f = sample_2d(g, [](double x, double) { return x * x; });
  const double want = kPi * r * r * r;  // r^2 cos^2 integrated over the circle
  CHECK(std::fabs(sphere_integral(f, {0, 0}, r) - want) / want < 0.01);
}

TEST_CASE("sphere integral refinement on x^2") {
  const double r = 0.25;
  const double want = kPi * r * r * r;
  double err[2];
  int k = 0;
  for (int n : {127, 255}) {
    Grid g = Grid::make_2d({-0.5, -0.5}, {0.5, 0.5}, {n, n});
    auto f = sample_2d(g, [](double x, double) { return x * x; });
    err[k++] = std::fabs(sphere_integral(f, {0, 0}, r) - want);
  }
  CHECK(err[0] / err[1] >= 1.7);
}

TEST_CASE("sphere integral of |x-x0|^gamma for gamma in {0,1,2}") {
  Grid g = Grid::make_2d({-0.5, -0.5}, {0.5, 0.5}, {255, 255});
  for (double gamma : {0.0, 1.0, 2.0}) {
    auto f = sample_2d(g, [gamma](double x, double y) {
      return std::pow(std::sqrt(x * x + y * y), gamma);
    });
    for (double r : {8.0 * g.h(0), 0.1, 0.3}) {
      const double want = std::pow(r, gamma) * 2.0 * kPi * r;
      CHECK(std::fabs(sphere_integral(f, {0, 0}, r) - want) / want < 0.01);
    }
  }
}

TEST_CASE("1D sphere integral is the two-endpoint sum") {
  Grid g = Grid::make_1d(0.0, 1.0, 200);
  auto f = sample_1d(g, [](double x) { return x; });
  CHECK(sphere_integral(f, {0.5, 0}, 0.1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("quadrature preconditions") {
  Grid g = Grid::make_2d({-0.5, -0.5}, {0.5, 0.5}, {63, 63});
  auto f = sample_2d(g, [](double, double) { return 1.0; });
  CHECK_THROWS_AS(ball_integral(f, {0.4, 0.0}, 0.2), Error);
  CHECK_THROWS_AS(sphere_integral(f, {0, 0}, 1.5 * g.h(0)), Error);
  try {
    sphere_integral(f, {0, 0}, 1.5 * g.h(0));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RadiusBelowResolution);
  }
  try {
    ball_integral(f, {0.4, 0.0}, 0.2);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BallOutsideDomain);
  }
}

TEST_CASE("shell ball integral: smooth-in-r rule on smooth fields") {
  Grid g = Grid::make_2d({-0.5, -0.5}, {0.5, 0.5}, {255, 255});
  auto one = sample_2d(g, [](double, double) { return 1.0; });
  auto fx2 = sample_2d(g, [](double x, double) { return x * x; });
  const double r = 0.25;
  const double a1 = shell_ball_integral(g, {0, 0}, r,
                                        [&](const Pt& p) { return one.interp(p); });
  CHECK(std::fabs(a1 - kPi * r * r) / (kPi * r * r) < 3e-3);
  const double a2 = shell_ball_integral(g, {0, 0}, r,
                                        [&](const Pt& p) { return fx2.interp(p); });
  CHECK(std::fabs(a2 - 3.0679616e-3) / 3.0679616e-3 < 5e-3);
}

TEST_CASE("shell ball integral in 1D") {
  Grid g = Grid::make_1d(0.0, 1.0, 400);
  auto f = sample_1d(g, [](double x) { return x * x; });
  const double r = 0.2, x0 = 0.5;
  const double want =
      (std::pow(x0 + r, 3.0) - std::pow(x0 - r, 3.0)) / 3.0;
  const double got =
      shell_ball_integral(g, {x0, 0}, r, [&](const Pt& p) { return f.interp(p); });
  CHECK(std::fabs(got - want) / want < 1e-3);
}
