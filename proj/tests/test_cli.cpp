// End-to-end tests of the command-line tool: each case launches the real
// binary (path injected as CLI_BINARY by the build) in a scratch directory
// and inspects exit code, stdout/stderr, and the files it writes.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifdef __unix__
#include <sys/wait.h>
#endif

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct CommandResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE_MESSAGE(bool(in), "missing file: " << p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int line_count(const std::string& text) {
  int n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

CommandResult run_cli(const std::string& args, const fs::path& dir) {
  const fs::path out_file = dir / "stdout.txt";
  const fs::path err_file = dir / "stderr.txt";
  const std::string cmd = std::string(CLI_BINARY) + " " + args + " > " + out_file.string() +
                          " 2> " + err_file.string();
  const int raw = std::system(cmd.c_str());
  CommandResult r;
#ifdef __unix__
  r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
#else
  r.code = raw;
#endif
  r.out = read_file(out_file);
  r.err = read_file(err_file);
  return r;
}

struct ScratchDir {
  fs::path path;
  explicit ScratchDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("nlab_cli_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~ScratchDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

const char* kCriticalSteps = "\"2 2 1 4 2 1 3 3 6 5 6 5 6 5 / 51\"";

double trailing_number(const std::string& text, const std::string& marker) {
  const auto pos = text.find(marker);
  REQUIRE_MESSAGE(pos != std::string::npos, "marker '" << marker << "' not in: " << text);
  return std::strtod(text.c_str() + pos + marker.size(), nullptr);
}

} // namespace

TEST_CASE("eig reports the complex pair of the critical mesh") {
  ScratchDir dir("eig_critical");
  const auto r =
      run_cli(std::string("eig --steps ") + kCriticalSteps + " --out " + dir.str(), dir.path);
  CAPTURE(r.err);
  CHECK(r.code == 0);
  CHECK(r.out.find("COMPLEX_PRESENT") != std::string::npos);
  CHECK(r.out.find("N = 14") != std::string::npos);
  const double lambda_re = trailing_number(r.out, "dominant lambda = ");
  CHECK(lambda_re > 3529.0);
  CHECK(lambda_re < 3531.0);
  const double kappa = trailing_number(r.out, "kappa0 = ");
  CHECK(kappa > 0.22);
  CHECK(kappa < 0.24);

  const std::string csv = read_file(dir.path / "spectrum.csv");
  CHECK(csv.rfind("index,re,im,residual\n", 0) == 0);
  CHECK(line_count(csv) == 14);  // header + 13 eigenvalues

  // Byte-identical on a rerun.
  const auto again =
      run_cli(std::string("eig --steps ") + kCriticalSteps + " --out " + dir.str(), dir.path);
  CHECK(again.code == 0);
  CHECK(read_file(dir.path / "spectrum.csv") == csv);
}

TEST_CASE("eig classifies a uniform mesh as all-real and the oracle agrees") {
  ScratchDir dir("eig_uniform");
  const auto r = run_cli("eig --uniform 8 --oracle --out " + dir.str(), dir.path);
  CAPTURE(r.err);
  CHECK(r.code == 0);
  CHECK(r.out.find("ALL_REAL") != std::string::npos);
  CHECK(r.out.find("N = 8") != std::string::npos);
  CHECK(trailing_number(r.out, "oracle max relative mismatch = ") < 1e-9);
  CHECK(line_count(read_file(dir.path / "spectrum.csv")) == 8);
}

TEST_CASE("run writes norm history and snapshots and reports the error") {
  ScratchDir dir("run_uniform");
  const auto r = run_cli("run --uniform 16 --tau 0.01 --T 0.5 --snapshots 0.25 --out " + dir.str(),
                         dir.path);
  CAPTURE(r.err);
  CHECK(r.code == 0);
  CHECK(r.out.find("ran M = 50 steps, tau = 0.01, T = 0.5") != std::string::npos);
  CHECK(r.out.find("overflowed") == std::string::npos);
  // N = 16 only coarsely resolves the bump; just require a sane error value
  // (accuracy itself is covered by the scheme tests).
  const double err = trailing_number(r.out, "error vs reference at T: ");
  CHECK(err > 0.0);
  CHECK(err < 0.5);

  const std::string norms = read_file(dir.path / "norms.csv");
  CHECK(norms.rfind("m,t,l2h,dirichlet\n", 0) == 0);
  CHECK(line_count(norms) == 52);  // header + levels 0..50

  const std::string snap = read_file(dir.path / "snapshot_t0.25.csv");
  CHECK(snap.rfind("x,v\n0,0\n", 0) == 0);  // header, then the pinned left boundary
  CHECK(line_count(snap) == 18);            // header + 17 nodes
  REQUIRE(snap.size() > 5);
  CHECK(snap.compare(snap.size() - 5, 5, "\n1,0\n") == 0);  // pinned right boundary
}

TEST_CASE("run requires exactly one horizon") {
  ScratchDir dir("run_no_T");
  const auto r = run_cli("run --uniform 8 --tau 0.01 --out " + dir.str(), dir.path);
  CHECK(r.code == 2);
  CHECK(r.err.find("exactly one horizon") != std::string::npos);
}

TEST_CASE("table produces csv plus growth curves and practical rates") {
  ScratchDir dir("table_small");
  const auto r = run_cli("table --uniform 4 --Ks 1,2 --tau 0.01 --T 0.25,0.5 --out " + dir.str(),
                         dir.path);
  CAPTURE(r.err);
  CHECK(r.code == 0);

  const std::string csv = read_file(dir.path / "table.csv");
  CHECK(csv.rfind("K,T,tau,M,error\n", 0) == 0);
  CHECK(line_count(csv) == 5);  // header + {1,2} x {0.25, 0.5}
  CHECK(r.out.find(csv) != std::string::npos);
  CHECK(r.out.find("K = 1: practical rate = ") != std::string::npos);
  CHECK(r.out.find("K = 2: practical rate = ") != std::string::npos);

  CHECK(line_count(read_file(dir.path / "growth_T0.25.csv")) == 3);
  CHECK(line_count(read_file(dir.path / "growth_T0.5.csv")) == 3);
}

TEST_CASE("table fixed-M mode insists on --M") {
  ScratchDir dir("table_fixed_m");
  const auto r = run_cli("table --uniform 4 --Ks 1 --T 0.5 --fixed-M --out " + dir.str(), dir.path);
  CHECK(r.code == 2);
  CHECK(r.err.find("fixed-M mode needs --M") != std::string::npos);
}

TEST_CASE("search over a tiny space is exhaustive and hitless") {
  ScratchDir dir("search_tiny");
  const auto r = run_cli(
      "search --n0-min 2 --n0-max 3 --alphabet 1,2 --uniform 2 --out " + dir.str(), dir.path);
  CAPTURE(r.err);
  CHECK(r.code == 0);
  CHECK(r.out.find("examined 7 candidates, 0 complex-spectrum hits") != std::string::npos);
  CHECK(r.out.find("budget exhausted") == std::string::npos);
  CHECK(read_file(dir.path / "search.csv") == "steps,denominator,re_lambda,im_lambda,kappa0\n");
}

TEST_CASE("search finds complex six-interval meshes and streams them") {
  ScratchDir dir("search_hits");
  const auto r = run_cli(
      "search --n0-min 6 --n0-max 6 --alphabet 1,3,4,5 --uniform 2 --out " + dir.str(), dir.path);
  CAPTURE(r.err);
  CHECK(r.code == 0);
  CHECK(r.out.find("hit: steps ") != std::string::npos);
  const std::string csv = read_file(dir.path / "search.csv");
  CHECK(csv.find("1 3 5 1 3 4,17,") != std::string::npos);
  CHECK(line_count(csv) >= 2);  // header + at least that hit
}

TEST_CASE("check evaluates the uniform step condition both ways") {
  ScratchDir dir("check_uniform");
  const auto ok = run_cli("check --uniform 32 --tau 0.002 --out " + dir.str(), dir.path);
  CAPTURE(ok.err);
  CHECK(ok.code == 0);
  CHECK(ok.out.find("uniform step condition: PASS") != std::string::npos);
  CHECK(ok.out.find("ratio form:") != std::string::npos);
  CHECK(ok.out.find("eigenvalue form:") != std::string::npos);

  const auto bad = run_cli("check --uniform 32 --tau 0.03 --out " + dir.str(), dir.path);
  CHECK(bad.code == 0);
  CHECK(bad.out.find("uniform step condition: FAIL") != std::string::npos);
}

TEST_CASE("check applies the family condition to a non-uniform base") {
  ScratchDir dir("check_family");
  const auto r = run_cli(std::string("check --steps ") + kCriticalSteps +
                             " --K 20 --tau 1e-5 --out " + dir.str(),
                         dir.path);
  CAPTURE(r.err);
  CHECK(r.code == 0);
  const double kappa = trailing_number(r.out, "family condition (kappa = ");
  CHECK(kappa > 0.2);
  CHECK(kappa < 0.3);
  CHECK(r.out.find("PASS") != std::string::npos);
  CHECK(r.out.find("tau* = ") != std::string::npos);

  // Non-uniform base with an all-real spectrum: the condition is vacuous.
  const auto vac =
      run_cli("check --steps \"3 4 / 7\" --K 3 --tau 1e-3 --out " + dir.str(), dir.path);
  CAPTURE(vac.err);
  CHECK(vac.code == 0);
  CHECK(vac.out.find("vacuous") != std::string::npos);
}

TEST_CASE("modal sweeps tau for one eigenvalue") {
  ScratchDir dir("modal_sweep");
  const auto r = run_cli(
      "modal --lambda-re 3529.9 --lambda-im 27.2044 --taus 1e-3,1e-4 --uniform 2 --kappa 0.23 "
      "--out " + dir.str(),
      dir.path);
  CAPTURE(r.err);
  CHECK(r.code == 0);
  const std::string csv = read_file(dir.path / "modal.csv");
  CHECK(csv.rfind("re_lambda,im_lambda,tau,sigma,re_q,im_q,abs_q,kappa0,", 0) == 0);
  CHECK(line_count(csv) == 3);
  CHECK(r.out.find(csv) != std::string::npos);
  CHECK(csv.find("3529.9,27.2044,0.001,") != std::string::npos);

  const auto missing = run_cli("modal --uniform 2 --out " + dir.str(), dir.path);
  CHECK(missing.code == 2);  // --lambda-re is required
}

TEST_CASE("config files drive commands and flags override them") {
  ScratchDir dir("config_drive");
  const fs::path cfg = dir.path / "exp.cfg";
  {
    std::ofstream out(cfg);
    out << "[mesh]\nuniform = 16\n\n[scheme]\na = 1\nsigma = 1/12\n\n"
           "[time]\ntau = 0.01\nT = 0.5\n\n[output]\ndir = " << dir.str() << "\n";
  }
  const auto r = run_cli("run --config " + cfg.string(), dir.path);
  CAPTURE(r.err);
  CHECK(r.code == 0);
  CHECK(r.out.find("ran M = 50 steps") != std::string::npos);

  // A mesh flag replaces the config's mesh source instead of colliding with it.
  const auto o = run_cli("eig --config " + cfg.string() + " --uniform 8", dir.path);
  CAPTURE(o.err);
  CHECK(o.code == 0);
  CHECK(o.out.find("N = 8") != std::string::npos);
}

TEST_CASE("bad invocations exit with code 2") {
  ScratchDir dir("bad_calls");
  CHECK(run_cli("eig --steps \"1 2 / 0\" --out " + dir.str(), dir.path).code == 2);
  CHECK(run_cli("eig --out " + dir.str(), dir.path).code == 2);  // no mesh source
  CHECK(run_cli("eig --uniform 4 --bogus-flag", dir.path).code == 2);
  CHECK(run_cli("", dir.path).code == 2);  // a subcommand is required
}

TEST_CASE("--help succeeds and lists the subcommands") {
  ScratchDir dir("help");
  const auto r = run_cli("--help", dir.path);
  CHECK(r.code == 0);
  for (const char* name : {"eig", "run", "table", "search", "check", "modal"})
    CHECK(r.out.find(name) != std::string::npos);
}
