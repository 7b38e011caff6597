#include <doctest.h>

#include "lrdustat/errors.hpp"
#include "lrdustat/io.hpp"

#include <filesystem>
#include <fstream>

using namespace lrdustat;

namespace {

std::string temp_file(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "lrdustat-io-test";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("CSV and binary paths round-trip exactly") {
    Eigen::VectorXd x(4);
    x << 0.1, -2.5e-300, 3.0, 1.0 / 3.0;
    const std::string csv = temp_file("p.csv");
    const std::string bin = temp_file("p.bin");
    io::write_path_csv(csv, x);
    io::write_path_binary(bin, x);
    CHECK(io::read_path_csv(csv) == x);
    CHECK(io::read_path_binary(bin) == x);
    CHECK(io::read_path(csv) == x);
    CHECK(io::read_path(bin) == x);
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "value");
  }

  TEST_CASE("malformed input is reported") {
    const std::string bad = temp_file("bad.csv");
    std::ofstream(bad) << "value\n1.0\nabc\n";
    CHECK_THROWS_AS(io::read_path_csv(bad), InputError);
    std::ofstream(bad) << "value\n1.0\nnan\n";
    CHECK_THROWS_AS(io::read_path_csv(bad), InputError);
    CHECK_THROWS_AS(io::read_path(temp_file("missing.csv")), InputError);
  }

  TEST_CASE("coefficient JSON lists entries above tolerance") {
    const auto j = io::coeffs_json(coeffs_closed_form(kernels::cusum(), 4));
    CHECK(j["Q"] == 4);
    CHECK(j["rank"] == 1);
    REQUIRE(j["entries"].size() == 2);
    CHECK(j["entries"][0] == io::json::array({0, 1, -1.0}));
    CHECK(j["entries"][1] == io::json::array({1, 0, 1.0}));
  }

  TEST_CASE("U-statistic CSV columns") {
    Eigen::VectorXd x(3);
    x << 1.0, 3.0, 2.0;
    const std::string file = temp_file("u.csv");
    io::write_ustat_csv(file, ustat_wilcoxon(x));
    std::ifstream in(file);
    std::string line;
    std::getline(in, line);
    CHECK(line == "k,lambda,raw,normalized");
    std::getline(in, line);
    CHECK(line.rfind("1,0.33333333333333331,2,2", 0) == 0);
  }

  TEST_CASE("report serializations") {
    ExperimentReport r;
    r.name = "demo";
    r.params = {{"D", "0.4"}};
    ReportRow row;
    row.n = 10;
    row.set("ratio", 1.25);
    r.rows.push_back(row);
    r.pass = true;
    r.seeds = {7};
    const auto j = io::report_json(r);
    CHECK(j["rows"][0]["ratio"] == 1.25);
    CHECK(j["pass"] == true);
    CHECK(io::report_text(r).find("result: PASS") != std::string::npos);
  }
}
