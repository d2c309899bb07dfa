#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const std::string kBin = SEGLAB_BIN;
const std::string kConfigs = SEGLAB_CONFIG_DIR;
const std::string kRoot = "/tmp/seglab_cli";

struct CliResult {
  int code = -1;
  std::string output;  // stdout + stderr combined
};

CliResult run_cli(const std::string& args) {
  CliResult res;
  FILE* pipe = popen((kBin + " " + args + " 2>&1").c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (size_t got = std::fread(buf, 1, sizeof buf, pipe))
    res.output.append(buf, got);
  const int status = pclose(pipe);
  res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), "missing file: ", path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

// Column `k` (0-based) of a comma-separated row.
std::string col(const std::string& row, int k) {
  size_t pos = 0;
  for (int i = 0; i < k; ++i) {
    pos = row.find(',', pos);
    if (pos == std::string::npos) return "";
    ++pos;
  }
  return row.substr(pos, row.find(',', pos) - pos);
}

struct Cleanup {
  Cleanup() {
    fs::remove_all(kRoot);
    fs::create_directories(kRoot);
  }
} cleanup_once;

}  // namespace

TEST_CASE("validate accepts every bundled config") {
  int seen = 0;
  for (const auto& entry : fs::directory_iterator(kConfigs)) {
    if (entry.path().extension() != ".cfg") continue;
    ++seen;
    CliResult r = run_cli("validate " + entry.path().string());
    CAPTURE(entry.path().string());
    CAPTURE(r.output);
    CHECK(r.code == 0);
    CHECK(r.output.find("OK") != std::string::npos);
  }
  CHECK(seen >= 3);
}

TEST_CASE("validate lists every issue with its location") {
  const fs::path cfg = fs::path(kRoot) / "broken.cfg";
  spit(cfg,
       "[grid]\n"
       "dim = 3\n"
       "n no_equals\n"
       "[sweep]\n"
       "beta = [100, 10]\n");
  CliResult r = run_cli("validate " + cfg.string());
  CHECK(r.code == 1);
  CHECK(r.output.find(cfg.string() + ":2: semantic: dim must be 1 or 2") !=
        std::string::npos);
  CHECK(r.output.find(":3: syntax:") != std::string::npos);
  CHECK(r.output.find("schedule not ascending") != std::string::npos);
}

TEST_CASE("validate of a missing file fails") {
  CliResult r = run_cli("validate /nonexistent.cfg");
  CHECK(r.code == 1);
  CHECK(r.output.find("cannot open") != std::string::npos);
}

TEST_CASE("run on the bundled 1d example writes the full artifact set") {
  const fs::path out = fs::path(kRoot) / "ex1";
  CliResult r = run_cli("run " + kConfigs + "/1d_interface.cfg --out " +
                        out.string());
  CAPTURE(r.output);
  REQUIRE(r.code == 0);
  CHECK(!fs::exists(out / "FAILED"));

  const auto sweep = lines_of(slurp(out / "sweep_diag.csv"));
  REQUIRE(sweep.size() == 6);  // header + five beta rows
  CHECK(sweep[0] == "beta,alpha,holder,seg_sup,interaction_1_2");

  const auto conv = lines_of(slurp(out / "convergence.csv"));
  REQUIRE(conv.size() == 6);
  for (size_t k = 1; k < conv.size(); ++k)
    CHECK(col(conv[k], 3) == "1");  // every solve converged

  for (int k = 1; k <= 5; ++k)
    CHECK(fs::exists(out / ("fields_" + std::to_string(k) + ".txt")));
  CHECK(fs::exists(out / "frequency_curve.csv"));
  CHECK(fs::exists(out / "classification.csv"));
  CHECK(fs::exists(out / "nodal_points.csv"));
  CHECK(fs::exists(out / "fields.svg"));
  CHECK(slurp(out / "report.txt").find("status: ok") != std::string::npos);
}

TEST_CASE("artifacts are identical across thread counts") {
  const fs::path cfg = fs::path(kRoot) / "det.cfg";
  spit(cfg,
       "[grid]\n"
       "dim = 2\n"
       "n = 48\n"
       "low = 0 0\n"
       "high = 1 1\n"
       "[components]\n"
       "d = 2\n"
       "breakpoints = [0, 1, 2]\n"
       "[solver]\n"
       "tol = 1e-8\n"
       "seed = 5\n"
       "[sweep]\n"
       "beta = [100, 1000]\n"
       "[boundary]\n"
       "u1 = edges 1 1 0 0\n"
       "u2 = edges 0 0 1 1\n"
       "[diagnostics]\n"
       "classification = true\n");
  const fs::path a = fs::path(kRoot) / "det_t1";
  const fs::path b = fs::path(kRoot) / "det_t4";
  CliResult r1 =
      run_cli("run " + cfg.string() + " --out " + a.string() + " --threads 1");
  CliResult r4 =
      run_cli("run " + cfg.string() + " --out " + b.string() + " --threads 4");
  CAPTURE(r1.output);
  CAPTURE(r4.output);
  REQUIRE(r1.code == 0);
  REQUIRE(r4.code == 0);
  for (const char* name :
       {"convergence.csv", "sweep_diag.csv", "frequency_curve.csv",
        "classification.csv", "nodal_points.csv", "fields_1.txt",
        "fields_2.txt", "report.txt", "u1.svg", "u2.svg"}) {
    CAPTURE(name);
    CHECK(slurp(a / name) == slurp(b / name));
  }
}

TEST_CASE("diagnose of a solved dump reproduces the published rows") {
  const fs::path cfg = fs::path(kRoot) / "single.cfg";
  spit(cfg,
       "[grid]\n"
       "dim = 1\n"
       "n = 128\n"
       "low = 0\n"
       "high = 1\n"
       "[components]\n"
       "d = 2\n"
       "breakpoints = [0, 1, 2]\n"
       "[solver]\n"
       "seed = 3\n"
       "[sweep]\n"
       "beta = [1000]\n"
       "[boundary]\n"
       "u1 = edges 1 0\n"
       "u2 = edges 0 1\n"
       "[diagnostics]\n"
       "probe = 0.5\n"
       "radii = [0.05, 0.1, 0.2]\n");
  const fs::path run_out = fs::path(kRoot) / "single_run";
  const fs::path sol_out = fs::path(kRoot) / "single_solve";
  REQUIRE(run_cli("run " + cfg.string() + " --out " + run_out.string()).code ==
          0);
  REQUIRE(run_cli("solve " + cfg.string() + " --out " + sol_out.string())
              .code == 0);
  // The cold single solve and the run's only sweep entry are the same
  // computation, so the dumps must match bit for bit...
  CHECK(slurp(run_out / "fields_1.txt") == slurp(sol_out / "fields.txt"));
  // ...and diagnosing the dump must reproduce the run's published rows.
  REQUIRE(run_cli("diagnose " + cfg.string() + " " +
                  (sol_out / "fields.txt").string() + " --out " +
                  sol_out.string())
              .code == 0);
  CHECK(slurp(run_out / "sweep_diag.csv") == slurp(sol_out / "sweep_diag.csv"));
  CHECK(slurp(run_out / "frequency_curve.csv") ==
        slurp(sol_out / "frequency_curve.csv"));
}

TEST_CASE("synthetic junction frequencies sit in the singular band") {
  const fs::path out = fs::path(kRoot) / "junction";
  REQUIRE(run_cli("synth junction --n 256 --out " + out.string()).code == 0);
  REQUIRE(fs::exists(out / "junction.txt"));

  const fs::path cfg = fs::path(kRoot) / "junction.cfg";
  spit(cfg,
       "[grid]\n"
       "dim = 2\n"
       "n = 256\n"
       "low = -1 -1\n"
       "high = 1 1\n"
       "[components]\n"
       "d = 3\n"
       "breakpoints = [0, 1, 2, 3]\n"
       "[diagnostics]\n"
       "probe = 0 0\n"
       "radii = [0.15, 0.3, 0.45]\n");
  CliResult r = run_cli("diagnose " + cfg.string() + " " +
                        (out / "junction.txt").string() + " --out " +
                        out.string());
  CAPTURE(r.output);
  REQUIRE(r.code == 0);
  const auto rows = lines_of(slurp(out / "frequency_curve.csv"));
  REQUIRE(rows.size() == 4);  // header + three radii
  for (size_t k = 1; k < rows.size(); ++k) {
    const double N = std::stod(col(rows[k], 4));
    CAPTURE(rows[k]);
    CHECK(N > 1.4);
    CHECK(N < 1.6);
  }
}

TEST_CASE("classify notes an empty nodal band") {
  const fs::path cfg = fs::path(kRoot) / "flat.cfg";
  spit(cfg,
       "[grid]\n"
       "dim = 1\n"
       "n = 64\n"
       "low = 0\n"
       "high = 1\n"
       "[components]\n"
       "d = 1\n"
       "breakpoints = [0, 1]\n"
       "[sweep]\n"
       "beta = [0]\n"
       "[boundary]\n"
       "u1 = edges 1 1\n");
  const fs::path out = fs::path(kRoot) / "flat";
  REQUIRE(run_cli("solve " + cfg.string() + " --out " + out.string()).code ==
          0);
  CliResult r = run_cli("classify " + cfg.string() + " " +
                        (out / "fields.txt").string() + " --out " +
                        out.string());
  CAPTURE(r.output);
  REQUIRE(r.code == 0);
  CHECK(r.output.find("nodal set empty") != std::string::npos);
  const auto cls = lines_of(slurp(out / "classification.csv"));
  REQUIRE(cls.size() == 2);  // header + note comment, no data rows
  CHECK(cls[0] == "x,y,N_hat,class,Gplus,Gminus,nu_x,nu_y");
  CHECK(cls[1].rfind("# nodal set empty", 0) == 0);
  CHECK(lines_of(slurp(out / "nodal_points.csv")).size() == 1);
}

TEST_CASE("non-converged run exits 2 and leaves the FAILED marker") {
  const fs::path cfg = fs::path(kRoot) / "hard.cfg";
  spit(cfg,
       "[grid]\n"
       "dim = 1\n"
       "n = 64\n"
       "low = 0\n"
       "high = 1\n"
       "[components]\n"
       "d = 2\n"
       "breakpoints = [0, 1, 2]\n"
       "[solver]\n"
       "max_iters = 3\n"
       "[sweep]\n"
       "beta = [100000]\n"
       "warm_start = false\n"
       "[boundary]\n"
       "u1 = edges 1 0\n"
       "u2 = edges 0 1\n");
  const fs::path out = fs::path(kRoot) / "hard";
  CliResult r = run_cli("run " + cfg.string() + " --out " + out.string());
  CAPTURE(r.output);
  CHECK(r.code == 2);
  CHECK(slurp(out / "FAILED").find("non-converged") != std::string::npos);
  CHECK(r.output.find("NOT CONVERGED") != std::string::npos);
  // artifacts are still published for inspection
  CHECK(fs::exists(out / "convergence.csv"));
  CHECK(slurp(out / "report.txt").find("status: non-converged") !=
        std::string::npos);
}

TEST_CASE("unwritable output directory aborts before any artifact") {
  const fs::path flat = fs::path(kRoot) / "flatfile";
  spit(flat, "not a directory\n");
  const std::string out = (flat / "sub").string();
  CliResult r = run_cli("run " + kConfigs + "/1d_interface.cfg --out " + out);
  CHECK(r.code == 1);
  CHECK(r.output.find("not writable") != std::string::npos);
  CHECK(!fs::exists(flat / "sub"));
}

TEST_CASE("--quiet silences progress output") {
  const fs::path out = fs::path(kRoot) / "quiet";
  CliResult r = run_cli("run " + kConfigs + "/1d_interface.cfg --quiet --out " +
                        out.string());
  CHECK(r.code == 0);
  CHECK(r.output.empty());
}

TEST_CASE("bad invocations fail cleanly") {
  CHECK(run_cli("frobnicate").code != 0);
  CHECK(run_cli("").code != 0);
  CliResult r = run_cli("synth pyramid --out " + kRoot + "/synthbad");
  CHECK(r.code == 1);
  CHECK(r.output.find("unknown synthetic") != std::string::npos);
}

TEST_CASE("sweep writes one dump per beta") {
  const fs::path cfg = fs::path(kRoot) / "sweep.cfg";
  spit(cfg,
       "[grid]\n"
       "dim = 1\n"
       "n = 64\n"
       "low = 0\n"
       "high = 1\n"
       "[components]\n"
       "d = 2\n"
       "breakpoints = [0, 1, 2]\n"
       "[sweep]\n"
       "beta = [10, 100]\n"
       "[boundary]\n"
       "u1 = edges 1 0\n"
       "u2 = edges 0 1\n");
  const fs::path out = fs::path(kRoot) / "sweep";
  CliResult r = run_cli("sweep " + cfg.string() + " --out " + out.string());
  CAPTURE(r.output);
  CHECK(r.code == 0);
  CHECK(fs::exists(out / "fields_1.txt"));
  CHECK(fs::exists(out / "fields_2.txt"));
  CHECK(lines_of(slurp(out / "convergence.csv")).size() == 3);
}
