#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "shiftdenoise/io.hpp"
#include "shiftdenoise/signal.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using namespace shiftdenoise;

namespace {

const std::string kCli = SHIFTDENOISE_CLI_PATH;

struct Sandbox {
  fs::path dir;
  Sandbox() {
    dir = fs::temp_directory_path() / ("sd_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " > /dev/null 2> /dev/null";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

void write_constant_signal(const std::string& path, long n) {
  Signal x(-n, cvec(static_cast<std::size_t>(2 * n + 1), cx{1.0, 0.0}));
  io::write_signal_csv(path, x);
}

}  // namespace

TEST_CASE("help and unknown flags") {
  CHECK(run("--help") == 0);
  CHECK(run("fit --help") == 0);
  CHECK(run("fit --no-such-flag") == 2);
  CHECK(run("frobnicate") == 2);
}

TEST_CASE("fit: constant fixture round trip and exit codes") {
  Sandbox sb;
  write_constant_signal(sb.path("y.csv"), 12);
  io::atomic_write_text(sb.path("cfg.json"),
                        R"({"m": 4, "n": 8, "mode": "constrained", "rho_bar": 1.0,
                            "solver": {"max_iters": 100000, "tol": 1e-12}})");
  CHECK(run("fit --input " + sb.path("y.csv") + " --config " + sb.path("cfg.json") +
            " --output " + sb.path("f.json")) == 0);
  const Filter f = io::read_filter(sb.path("f.json"));
  CHECK(f.m == 4);
  CHECK(f.converged);

  // residual of the fitted filter on the constant fixture is tiny
  const Signal y = io::read_signal_csv(sb.path("y.csv"));
  const Signal est = estimate(f, y, Domain::symmetric(8));
  for (long t = -8; t <= 8; ++t) CHECK(std::abs(est[t] - cx{1.0, 0.0}) < 1e-4);

  // malformed csv -> 3, with bad rho -> 2, missing file -> 3
  io::atomic_write_text(sb.path("bad.csv"), "t,re,im\n0,notanumber,0\n");
  CHECK(run("fit --input " + sb.path("bad.csv") + " --config " + sb.path("cfg.json") +
            " --output " + sb.path("f2.json")) == 3);
  io::atomic_write_text(sb.path("badcfg.json"), R"({"m": 4, "n": 8, "rho_bar": 0.5})");
  CHECK(run("fit --input " + sb.path("y.csv") + " --config " + sb.path("badcfg.json") +
            " --output " + sb.path("f3.json")) == 2);
  CHECK(run("fit --input " + sb.path("missing.csv") + " --config " + sb.path("cfg.json") +
            " --output " + sb.path("f4.json")) == 3);
}

TEST_CASE("denoise: filter application, composite, and missing inputs") {
  Sandbox sb;
  write_constant_signal(sb.path("y.csv"), 16);

  Filter identity;
  identity.cls = FilterClass::bilateral;
  identity.m = 0;
  identity.coeffs = {cx{1.0, 0.0}};
  io::write_filter(sb.path("id.json"), identity);
  CHECK(run("denoise --input " + sb.path("y.csv") + " --mode filter --filter " +
            sb.path("id.json") + " --output " + sb.path("out.csv")) == 0);
  const Signal out = io::read_signal_csv(sb.path("out.csv"));
  const Signal y = io::read_signal_csv(sb.path("y.csv"));
  CHECK(testutil::max_abs_diff(out, y) < 1e-12);

  CHECK(run("denoise --input " + sb.path("y.csv") + " --mode composite --s 1 --output " +
            sb.path("comp.csv")) == 0);
  const Signal comp = io::read_signal_csv(sb.path("comp.csv"));
  double err = 0.0;
  for (long t = -16; t <= 16; ++t) err = std::max(err, std::abs(comp[t] - cx{1.0, 0.0}));
  CHECK(err < 1e-3);

  CHECK(run("denoise --input " + sb.path("y.csv") + " --mode filter --filter " +
            sb.path("nofile.json") + " --output " + sb.path("o.csv")) == 3);
  CHECK(run("denoise --input " + sb.path("y.csv") + " --mode composite --output " +
            sb.path("o.csv")) == 2);
}

TEST_CASE("oracle: averaging filter, separation warning, unit-roots threshold") {
  Sandbox sb;
  io::atomic_write_text(sb.path("const.json"), R"({"modes": [{"omega": 0.0, "mult": 1}]})");
  CHECK(run("oracle --spec " + sb.path("const.json") + " --kind interp --m 6 --output " +
            sb.path("avg.json")) == 0);
  const Filter avg = io::read_filter(sb.path("avg.json"));
  long nonzero = 0;
  for (const auto& e : avg.coeffs)
    if (std::abs(e) > 1e-14) {
      ++nonzero;
      CHECK(std::abs(e - cx{1.0 / 7.0, 0.0}) < 1e-12);
    }
  CHECK(nonzero == 7);

  // close frequencies: warning on stderr but still exit 0
  io::atomic_write_text(sb.path("close.json"),
                        R"({"modes": [{"omega": 1.0, "mult": 1}, {"omega": 1.01, "mult": 1}]})");
  CHECK(run("oracle --spec " + sb.path("close.json") + " --kind separated --m 15 --output " +
            sb.path("sep.json")) == 0);

  CHECK(run("oracle --spec " + sb.path("const.json") + " --kind unitroots --m 3 --output " +
            sb.path("ur.json")) == 2);

  // polynomial form of a spec is accepted too: p(z) = 1 - z
  io::atomic_write_text(sb.path("poly.json"), R"({"poly": [[1.0, 0.0], [-1.0, 0.0]]})");
  CHECK(run("oracle --spec " + sb.path("poly.json") + " --kind interp --m 6 --output " +
            sb.path("avg2.json")) == 0);
  const Filter avg2 = io::read_filter(sb.path("avg2.json"));
  double diff = 0.0;
  for (std::size_t i = 0; i < avg2.coeffs.size(); ++i)
    diff = std::max(diff, std::abs(avg2.coeffs[i] - avg.coeffs[i]));
  CHECK(diff < 1e-9);
}

TEST_CASE("simulate and report: seed determinism across thread counts") {
  Sandbox sb;
  io::atomic_write_text(sb.path("scenario.json"), R"({
    "generator": {"kind": "harmonic", "s": 1, "seed": 3, "n": 12},
    "estimator": {"m": 6, "n": 6, "mode": "constrained", "rho_bar": 4.0},
    "sigma_grid": [0.0, 0.5],
    "trials": 6,
    "master_seed": 99,
    "per_trial": true
  })");
  CHECK(run("simulate --scenario " + sb.path("scenario.json") + " --threads 1 --output " +
            sb.path("r1.json")) == 0);
  CHECK(run("simulate --scenario " + sb.path("scenario.json") + " --threads 8 --output " +
            sb.path("r8.json")) == 0);
  CHECK(io::read_text(sb.path("r1.json")) == io::read_text(sb.path("r8.json")));

  // zero-noise rows of the report carry zero loss
  const auto rep = nlohmann::json::parse(io::read_text(sb.path("r1.json")));
  CHECK(rep.at("results")[0].at("report").at("l2").at("median").get<double>() < 1e-5);

  CHECK(run("report --input " + sb.path("r1.json") + " --output " + sb.path("curve.csv")) == 0);
  const std::string curve = io::read_text(sb.path("curve.csv"));
  CHECK(curve.find("sigma,mean_l2") != std::string::npos);
  CHECK(run("report --input " + sb.path("scenario.json") + " --output " + sb.path("c2.csv")) == 3);

  // per-trial csv dump carries one row per (sigma, trial)
  CHECK(run("simulate --scenario " + sb.path("scenario.json") + " --output " + sb.path("r9.json") +
            " --csv " + sb.path("trials.csv")) == 0);
  const std::string trials = io::read_text(sb.path("trials.csv"));
  CHECK(std::count(trials.begin(), trials.end(), '\n') == 1 + 2 * 6);

  // the threads environment variable is an accepted default
  CHECK(std::system(("SHIFTDENOISE_THREADS=2 " + kCli + " simulate --scenario " +
                     sb.path("scenario.json") + " --output " + sb.path("r2.json") +
                     " > /dev/null 2>&1")
                        .c_str()) == 0);
  CHECK(io::read_text(sb.path("r2.json")) == io::read_text(sb.path("r1.json")));
}

TEST_CASE("simulate smoke scenario at m=n=32 finishes well under a minute") {
  Sandbox sb;
  io::atomic_write_text(sb.path("smoke.json"), R"({
    "generator": {"kind": "harmonic", "s": 2, "seed": 1, "n": 64},
    "estimator": {"m": 32, "n": 32, "mode": "constrained", "rho_bar": 8.0},
    "sigma": 0.5,
    "trials": 10,
    "master_seed": 7
  })");
  const auto start = std::chrono::steady_clock::now();
  CHECK(run("simulate --scenario " + sb.path("smoke.json") + " --output " + sb.path("r.json")) ==
        0);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(secs < 60.0);
}
