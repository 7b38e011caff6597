#include <doctest.h>

#include "cli.hpp"
#include "detect.hpp"

#include "lrdustat/io.hpp"

#include <filesystem>
#include <sstream>

using namespace lrdustat;
using lrdustat::tools::run_cli;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "lrdustat-cli-test";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("simulate writes a deterministic CSV and a sidecar") {
    const std::string a = temp_path("a.csv");
    const std::string b = temp_path("b.csv");
    CHECK(cli({"simulate", "--family", "fgn", "--D", "0.4", "--n", "4096", "--seed", "7", "-o", a}).code == 0);
    CHECK(cli({"simulate", "--family", "fgn", "--D", "0.4", "--n", "4096", "--seed", "7", "-o", b}).code == 0);
    CHECK(io::read_text(a) == io::read_text(b));
    CHECK(io::read_path(a).size() == 4096);
    const auto sidecar = io::read_json(a + ".run.json");
    CHECK(sidecar["config"]["D"] == 0.4);
    const std::string c = temp_path("c.csv");
    CHECK(cli({"rerun", a + ".run.json", "-o", c}).code == 0);
    CHECK(io::read_text(a) == io::read_text(c));
  }

  TEST_CASE("exit codes") {
    const Run bad = cli({"simulate", "--D", "1.5", "--n", "10"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("(0,1)") != std::string::npos);
    CHECK(cli({"simulate", "--n", "10"}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"--help"}).code == 0);
    const std::string one = temp_path("one.csv");
    io::write_text(one, "value\n0.5\n");
    CHECK(cli({"detect", "-i", one, "--D", "0.4", "--no-cache"}).code == 2);
    const Run missing_d = cli({"detect", "-i", one});
    CHECK(missing_d.code == 2);
    CHECK(missing_d.err.find("--D") != std::string::npos);
    CHECK(cli({"ustat", "-i", temp_path("nope.csv")}).code == 2);
  }

  TEST_CASE("coeffs subcommand lists only the CUSUM entries") {
    const Run r = cli({"coeffs", "--kernel", "cusum", "--Q", "4"});
    REQUIRE(r.code == 0);
    const auto j = io::json::parse(r.out);
    REQUIRE(j["entries"].size() == 2);
    CHECK(j["entries"][0] == io::json::array({0, 1, -1.0}));
    CHECK(j["entries"][1] == io::json::array({1, 0, 1.0}));
  }

  TEST_CASE("verify variance reproduces the three-point example") {
    const Run r = cli({"verify", "variance", "--k", "1", "--D", "0.5", "--n", "3", "--family", "tweaked"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("exact_variance = 6.9831277") != std::string::npos);
  }

  TEST_CASE("limit subcommand gives monotone quantiles") {
    const Run r = cli({"limit", "--kernel", "wilcoxon", "--D", "0.4", "--reps", "2000", "--levels", "0.9,0.95,0.99"});
    REQUIRE(r.code == 0);
    const auto q = io::json::parse(r.out)["quantiles"];
    REQUIRE(q.size() == 3);
    CHECK(q[0]["value"].get<double>() < q[1]["value"].get<double>());
    CHECK(q[1]["value"].get<double>() < q[2]["value"].get<double>());
    CHECK(cli({"limit", "--kernel", "wilcoxon", "--D", "0.4", "--reps", "50"}).code == 2);
    CHECK(cli({"limit", "--kernel", "bump", "--D", "0.6"}).code == 2);
  }

  TEST_CASE("detect rejects a large mean shift and caches its table") {
    const std::string cache = temp_path("cache");
    std::filesystem::remove_all(cache);
    const std::string data = temp_path("shift.csv");
    GaussianPath p = simulate_gaussian({0.4, CovarianceFamily::FGN}, 2000, 21);
    p.values.tail(1000).array() += 2.0;
    io::write_path_csv(data, p.values);
    const std::string report = temp_path("detect.json");
    const Run r = cli({"detect", "-i", data, "--D", "0.4", "--cache-dir", cache, "-o", report});
    REQUIRE(r.code == 0);
    auto j = io::read_json(report);
    CHECK(j["cache_hit"] == false);
    CHECK(j["decisions"][1]["reject"] == true);
    const double where = j["k_star"].get<double>() / 2000.0;
    CHECK(where >= 0.4);
    CHECK(where <= 0.6);
    CHECK(cli({"detect", "-i", data, "--D", "0.4", "--cache-dir", cache, "-o", report}).code == 0);
    j = io::read_json(report);
    CHECK(j["cache_hit"] == true);
  }

  TEST_CASE("cache keys depend on every component") {
    tools::DetectConfig a;
    a.D = 0.4;
    tools::DetectConfig b = a;
    b.reps = 1000;
    tools::DetectConfig c = a;
    c.family = CovarianceFamily::TweakedPowerLaw;
    CHECK(tools::cache_key(a, 1) != tools::cache_key(b, 1));
    CHECK(tools::cache_key(a, 1) != tools::cache_key(c, 1));
    CHECK(tools::cache_key(a, 1) != tools::cache_key(a, 2));
    CHECK(tools::cache_key(a, 1) == tools::cache_key(a, 1));
  }
}
