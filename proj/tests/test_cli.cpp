#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "gls/cli.hpp"
#include "gls/io.hpp"
#include "oracles.hpp"

using namespace gls;
using doctest::Approx;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = cli::dispatch(args, out, err);
  return {status, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("k-constant prints a bound report") {
    const auto r = run({"k-constant", "--psi", "psi_m", "--m", "2", "--lambda", "1"});
    REQUIRE(r.status == 0);
    const auto j = Json::parse(r.out);
    CHECK(j["value"].get<double>() == Approx(2.598076).epsilon(1e-6));
    CHECK(j["argmin_q"].get<double>() == Approx(3.0).epsilon(1e-6));
    CHECK(j["method"] == "grid+golden");

    const auto c = run({"k-constant", "--psi", "degenerate", "--r", "3", "--lambda", "2", "--method", "closed-form"});
    REQUIRE(c.status == 0);
    CHECK(Json::parse(c.out)["value"].get<double>() == Approx(2.25));

    const auto s = run({"k-constant", "--psi-json", R"({"family":"psi_m","m":2})", "--lambda", "1", "--method",
                        "simple-upper"});
    REQUIRE(s.status == 0);
    CHECK(Json::parse(s.out)["value"].get<double>() == Approx(2 * std::sqrt(2.0)));
  }

  TEST_CASE("tail-bound, conjugate and propagate") {
    const auto t = run({"tail-bound", "--psi", "degenerate", "--r", "2", "--norm", "1", "--y", "2.71828"});
    REQUIRE(t.status == 0);
    CHECK(Json::parse(t.out)["bound"].get<double>() == Approx(std::exp(-2.0)).epsilon(1e-4));

    const auto c = run({"conjugate", "--psi", "psi_m", "--m", "1", "--u", "2"});
    REQUIRE(c.status == 0);
    CHECK(c.out.find("2.71828") != std::string::npos);

    const auto p = run({"propagate", "--psi", "psi_m", "--m", "2", "--lambda", "1", "--nu", "0", "--norm", "1"});
    REQUIRE(p.status == 0);
    CHECK(Json::parse(p.out)["value"].get<double>() == Approx(1.0).epsilon(1e-8));
  }

  TEST_CASE("sample subcommands") {
    const std::string path = "/tmp/gls_cli_test_sample.csv";
    std::ofstream(path) << "0\n2\n";
    const auto n = run({"norm", "--psi", "psi_m", "--m", "2", "--input", path});
    REQUIRE(n.status == 0);
    // sup over p of 2^{1-1/p} / sqrt(p), attained near p = 2 ln 2.
    const double expected = oracle::scan_max([](double p) { return std::pow(2.0, 1 - 1 / p) / std::sqrt(p); }, 1, 1024).value;
    CHECK(Json::parse(n.out)["value"].get<double>() == Approx(expected).epsilon(1e-6));

    const auto r = run({"rearrange", "--input", path, "--t", "0.25,1"});
    CHECK(r.status == 0);
    const auto nat = run({"natural", "--input", path + "," + path});
    CHECK(nat.status == 0);
    const auto u = run({"upsilon", "--psi", "degenerate", "--r", "2", "--lambda", "1", "--p", "1.2"});
    CHECK(u.status == 0);
    const auto cmp = run({"compare", "--psi", "psi_m", "--m", "2", "--against-json", R"({"family":"psi_m","m":1})"});
    CHECK(cmp.status == 0);
  }

  TEST_CASE("verify doob single step passes") {
    const auto r = run({"verify", "doob", "--paths", "4", "--steps", "1", "--p", "2", "--seed", "7"});
    REQUIRE(r.status == 0);
    const auto j = Json::parse(r.out);
    CHECK(j["pass"] == true);
    CHECK(j["config"]["seed"] == 7);
  }

  TEST_CASE("verify without a seed generates and echoes one") {
    const auto r = run({"verify", "doob", "--paths", "16", "--steps", "8"});
    REQUIRE(r.status == 0);
    const auto j = Json::parse(r.out);
    REQUIRE(j["config"].contains("seed"));
    const auto seed = j["config"]["seed"].get<std::uint64_t>();
    const auto again =
        run({"verify", "doob", "--paths", "16", "--steps", "8", "--seed", std::to_string(seed)});
    CHECK(again.out == r.out);
  }

  TEST_CASE("CSV output matches the golden file") {
    const auto r = run({"verify", "doob", "--paths", "1000", "--steps", "64", "--p", "1.5,2,3,4", "--seed", "11",
                        "--format", "csv"});
    REQUIRE(r.status == 0);
    CHECK(r.out == slurp(GLS_TEST_GOLDEN_DIR "/doob_small.csv"));

    const std::string out = "/tmp/gls_cli_test_report.csv";
    const auto f = run({"verify", "doob", "--paths", "1000", "--steps", "64", "--p", "1.5,2,3,4", "--seed", "11",
                        "--out", out});
    REQUIRE(f.status == 0);
    CHECK(slurp(out) == slurp(GLS_TEST_GOLDEN_DIR "/doob_small.csv"));
  }

  TEST_CASE("JSON reports from --out re-parse into equal reports") {
    const std::string out = "/tmp/gls_cli_test_report.json";
    const auto r = run({"verify", "dunford-schwartz", "--grid", "256", "--steps", "16", "--seed", "1", "--out", out});
    REQUIRE(r.status == 0);
    const auto j = read_json_file(out);
    const auto report = verification_report_from_json(j);
    CHECK(to_json(report) == j);
    CHECK(report.pass);
  }

  TEST_CASE("scenario config file") {
    const std::string path = "/tmp/gls_cli_test_config.json";
    std::ofstream(path) << R"({"kind":"doob","paths":32,"steps":4,"seed":9,"p_grid":[2,3]})";
    const auto a = run({"verify", "doob", "--config", path});
    const auto b = run({"verify", "doob", "--paths", "32", "--steps", "4", "--seed", "9", "--p", "2,3"});
    REQUIRE(a.status == 0);
    CHECK(a.out == b.out);
  }

  TEST_CASE("exit status matrix") {
    // usage errors
    CHECK(run({"frobnicate"}).status == cli::kExitUsage);
    CHECK(run({"k-constant", "--bogus", "1"}).status == cli::kExitUsage);
    CHECK(run({"verify", "brownian"}).status == cli::kExitUsage);
    CHECK(run({}).status == cli::kExitUsage);
    // precondition violations
    CHECK(run({"tail-bound", "--psi", "psi_m", "--m", "2", "--norm", "1", "--y", "2"}).status ==
          cli::kExitPrecondition);
    CHECK(run({"k-constant", "--psi", "psi_m", "--m", "-1", "--lambda", "1"}).status == cli::kExitPrecondition);
    CHECK(run({"k-constant", "--psi", "psi_m", "--m", "abc", "--lambda", "1"}).status == cli::kExitPrecondition);
    CHECK(run({"k-constant", "--psi-json", "{broken", "--lambda", "1"}).status == cli::kExitPrecondition);
    CHECK(run({"k-constant", "--psi", "psi_m", "--lambda", "1"}).status == cli::kExitPrecondition);
    CHECK(run({"k-constant", "--psi", "psi_m_l", "--m", "2", "--lambda", "1", "--method", "closed-form"}).status ==
          cli::kExitPrecondition);
    CHECK(run({"verify", "doob", "--paths", "0", "--seed", "1"}).status == cli::kExitPrecondition);
    CHECK(run({"verify", "doob", "--p", "1", "--seed", "1"}).status == cli::kExitPrecondition);
    CHECK(run({"norm", "--psi", "psi_m", "--m", "2", "--input", "/nonexistent.csv"}).status ==
          cli::kExitPrecondition);
    CHECK(run({"propagate", "--psi", "psi_m", "--m", "2", "--lambda", "1", "--nu", "2", "--norm", "1"}).status ==
          cli::kExitPrecondition);
    CHECK(run({"k-constant", "--psi", "psi_m", "--m", "2", "--lambda", "1", "--format", "csv"}).status ==
          cli::kExitPrecondition);
    // computational failure
    CHECK(run({"upsilon", "--psi", "psi_m", "--m", "0.5", "--weight-json", R"({"grid":[1.5,2],"values":[1e308,1e308]})",
               "--p", "1.6"})
              .status == cli::kExitComputation);
    // help
    CHECK(run({"--help"}).status == cli::kExitOk);
  }

  TEST_CASE("diagnostics name the problem") {
    const auto r = run({"frobnicate"});
    CHECK(r.err.find("frobnicate") != std::string::npos);
    const auto t = run({"tail-bound", "--psi", "psi_m", "--m", "2", "--norm", "1", "--y", "2"});
    CHECK(t.err.find("e*||f||") != std::string::npos);
  }

  TEST_CASE("GLS_TOOLKIT_PMAX changes the truncation cap") {
    setenv("GLS_TOOLKIT_PMAX", "16", 1);
    const auto r = run({"k-constant", "--psi", "psi_m", "--m", "1000000", "--lambda", "1"});
    unsetenv("GLS_TOOLKIT_PMAX");
    REQUIRE(r.status == 0);
    const auto j = Json::parse(r.out);
    CHECK(j["argmin_q"].get<double>() == Approx(16.0).epsilon(1e-6));
    CHECK(setenv("GLS_TOOLKIT_PMAX", "bad", 1) == 0);
    CHECK(run({"k-constant", "--psi", "psi_m", "--m", "2", "--lambda", "1"}).status == cli::kExitPrecondition);
    unsetenv("GLS_TOOLKIT_PMAX");
  }
}
