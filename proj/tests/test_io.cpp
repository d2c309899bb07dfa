#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "seglab/errors.hpp"
#include "seglab/grouping.hpp"
#include "seglab/io.hpp"

using namespace seglab;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string tmp_path(const char* name) {
  return std::string("/tmp/seglab_io_") + name;
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("format_sci uses 9 significant digits") {
  CHECK(format_sci(1.0) == "1.00000000e+00");
  CHECK(format_sci(-0.5) == "-5.00000000e-01");
  CHECK(format_sci(12345.678) == "1.23456780e+04");
}

TEST_CASE("dump/load round-trip, 1d") {
  Grid g = Grid::make_1d(-1.0, 3.0, 17);
  FieldSet f(g, 2);
  for (int ix = 0; ix < g.nx_total(); ++ix) {
    const double x = g.node(ix, 0).x;
    f.comp(1).at(ix, 0) = std::sin(3.0 * x) + 0.25;
    f.comp(2).at(ix, 0) = std::exp(-x * x);
  }
  const std::string path = tmp_path("rt1.txt");
  dump_fields(f, path);

  const std::string text = slurp(path);
  CHECK(text.rfind("# grid dim=1 n=17 extent=[-1,3] d=2", 0) == 0);

  FieldSet r = load_fields(path);
  CHECK(r.grid.dim() == 1);
  CHECK(r.grid.n(0) == 17);
  CHECK(r.grid.low(0) == -1.0);
  CHECK(r.grid.high(0) == 3.0);
  CHECK(r.d() == 2);
  for (int i = 1; i <= 2; ++i)
    for (int ix = 0; ix < g.nx_total(); ++ix) {
      const double a = f.comp(i).at(ix, 0), b = r.comp(i).at(ix, 0);
      CHECK(std::abs(a - b) <= 5e-9 * std::max(1.0, std::abs(a)));
    }
}

TEST_CASE("dump/load round-trip, 2d") {
  Grid g = Grid::make_2d({0.0, -0.5}, {1.0, 0.5}, {9, 13});
  FieldSet f(g, 3);
  for (int i = 1; i <= 3; ++i)
    for (int iy = 0; iy < g.ny_total(); ++iy)
      for (int ix = 0; ix < g.nx_total(); ++ix) {
        const Pt p = g.node(ix, iy);
        f.comp(i).at(ix, iy) = i * p.x - p.y * p.y;
      }
  const std::string path = tmp_path("rt2.txt");
  dump_fields(f, path);

  const std::string text = slurp(path);
  CHECK(text.rfind("# grid dim=2 n=9x13 extent=[0,1]x[-0.5,0.5] d=3", 0) == 0);

  FieldSet r = load_fields(path);
  CHECK(r.grid.n(0) == 9);
  CHECK(r.grid.n(1) == 13);
  CHECK(r.d() == 3);
  double worst = 0.0;
  for (int i = 1; i <= 3; ++i)
    for (int iy = 0; iy < g.ny_total(); ++iy)
      for (int ix = 0; ix < g.nx_total(); ++ix)
        worst = std::max(worst, std::abs(f.comp(i).at(ix, iy) -
                                         r.comp(i).at(ix, iy)));
  CHECK(worst <= 5e-9);
}

TEST_CASE("loader rejects malformed dumps with located errors") {
  const std::string path = tmp_path("bad.txt");

  CHECK_THROWS_AS(load_fields("/nonexistent/dump.txt"), Error);

  spit(path, "not a dump\n");
  CHECK_THROWS_WITH_AS(load_fields(path),
                       doctest::Contains(":1: bad dump header"), Error);

  spit(path, "# grid dim=1 n=9 extent=[0,1] d=1\n# wrong marker\n");
  CHECK_THROWS_WITH_AS(load_fields(path),
                       doctest::Contains("expected '# component 1'"), Error);

  spit(path,
       "# grid dim=1 n=9 extent=[0,1] d=1\n"
       "# component 1\n"
       "0 0 0\n");  // 11 values needed (9 interior + 2 boundary)
  CHECK_THROWS_WITH_AS(load_fields(path), doctest::Contains("short row"),
                       Error);

  spit(path,
       "# grid dim=1 n=9 extent=[0,1] d=1\n"
       "# component 1\n"
       "0 0 0 0 0 0 0 0 0 0 0 0\n");
  CHECK_THROWS_WITH_AS(load_fields(path),
                       doctest::Contains("trailing values"), Error);

  spit(path,
       "# grid dim=1 n=9 extent=[0,1] d=1\n"
       "# component 1\n"
       "0 nan 0 0 0 0 0 0 0 0 0\n");
  CHECK_THROWS_AS(load_fields(path), Error);

  spit(path, "# grid dim=1 n=9 extent=[1,0] d=1\n");  // inverted extent
  CHECK_THROWS_WITH_AS(load_fields(path),
                       doctest::Contains("bad dump header"), Error);
}

TEST_CASE("convergence csv layout") {
  const std::string path = tmp_path("conv.csv");
  write_convergence_csv(
      {{10.0, 42, 5e-10, true}, {100.0, 50000, 2e-6, false}}, path);
  CHECK(slurp(path) ==
        "beta,iters,final_residual,converged\n"
        "1.00000000e+01,42,5.00000000e-10,1\n"
        "1.00000000e+02,50000,2.00000000e-06,0\n");
}

TEST_CASE("sweep diag csv lists cross-group pairs only") {
  Decomposition dec = make_decomposition(3, {0, 1, 3});  // {1}, {2,3}
  DiagnosticsReport rep;
  rep.beta = 100.0;
  rep.holder = {{0.5, 2.0}, {0.75, 3.0}};
  rep.seg_sup = 0.25;
  rep.interactions = {{1, 2, 0.125}, {1, 3, 0.0625}};
  const std::string text = sweep_diag_csv({rep}, dec);
  std::istringstream lines(text);
  std::string header, row1, row2;
  std::getline(lines, header);
  std::getline(lines, row1);
  std::getline(lines, row2);
  CHECK(header == "beta,alpha,holder,seg_sup,interaction_1_2,interaction_1_3");
  CHECK(row1 ==
        "1.00000000e+02,5.00000000e-01,2.00000000e+00,2.50000000e-01,"
        "1.25000000e-01,6.25000000e-02");
  CHECK(row2.substr(0, 30) == "1.00000000e+02,7.50000000e-01,");
}

TEST_CASE("frequency csv serializes 2d centers and undefined N") {
  FrequencyCurve c;
  c.x0 = Pt{0.5, 0.25};
  AlmgrenSample ok;
  ok.x0 = c.x0;
  ok.r = 0.1;
  ok.H = 2.0;
  ok.E = 1.0;
  ok.N = 0.5;
  ok.n_defined = true;
  AlmgrenSample undef;
  undef.x0 = c.x0;
  undef.r = 0.2;
  c.samples = {ok, undef};
  const std::string path = tmp_path("freq.csv");
  write_frequency_csv({c}, 2, path);
  CHECK(slurp(path) ==
        "x0,r,H,E,N\n"
        "5.00000000e-01:2.50000000e-01,1.00000000e-01,2.00000000e+00,"
        "1.00000000e+00,5.00000000e-01\n"
        "5.00000000e-01:2.50000000e-01,2.00000000e-01,0.00000000e+00,"
        "0.00000000e+00,undefined\n");
}

TEST_CASE("classification csv carries class names and the note line") {
  BoundaryPointClass reg;
  reg.x0 = Pt{0.5, 0.0};
  reg.N_hat = 1.02;
  reg.cls = PointClass::Regular;
  reg.g_plus = 1.0;
  reg.g_minus = 0.9;
  reg.normal = Pt{1.0, 0.0};
  BoundaryPointClass sing;
  sing.x0 = Pt{0.25, 0.25};
  sing.N_hat = 1.5;
  sing.cls = PointClass::Singular;
  const std::string path = tmp_path("cls.csv");
  write_classification_csv({reg, sing}, path, "two points");
  const std::string text = slurp(path);
  std::istringstream lines(text);
  std::string l1, l2, l3, l4;
  std::getline(lines, l1);
  std::getline(lines, l2);
  std::getline(lines, l3);
  std::getline(lines, l4);
  CHECK(l1 == "x,y,N_hat,class,Gplus,Gminus,nu_x,nu_y");
  CHECK(l2 == "# two points");
  CHECK(l3.find(",Regular,") != std::string::npos);
  CHECK(l4.find(",Singular,") != std::string::npos);

  // empty note -> no comment line
  write_classification_csv({}, path, "");
  CHECK(slurp(path) == "x,y,N_hat,class,Gplus,Gminus,nu_x,nu_y\n");
}

TEST_CASE("nodal csv is a flat point list") {
  NodalSet ns;
  ns.points = {Pt{0.0, 0.0}, Pt{0.5, 1.0}};
  const std::string path = tmp_path("nodal.csv");
  write_nodal_csv(ns, path);
  CHECK(slurp(path) ==
        "x,y\n"
        "0.00000000e+00,0.00000000e+00\n"
        "5.00000000e-01,1.00000000e+00\n");
}

TEST_CASE("fnv1a matches the reference vectors") {
  CHECK(fnv1a("") == 14695981039346656037ull);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a("foobar") == 0x85944171f73967e8ull);
}
