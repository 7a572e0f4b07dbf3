#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "phaseamb/phaseamb.hpp"

using namespace phaseamb;

TEST_CASE("doubles survive a JSON round trip bit-exactly") {
  Rng rng(101);
  for (int k = 0; k < 200; ++k) {
    const double v = rng.uniform(-1e3, 1e3) * std::pow(10.0, rng.uniform_int(-12, 12));
    const std::string s = io::format_double(v);
    REQUIRE(std::stod(s) == v);
  }
  REQUIRE(io::format_double(2.0) == "2");
}

TEST_CASE("signal JSON round trip") {
  const Signal x({1.25, -0.75, 2.0 / 3.0}, -4);
  const auto j = nlohmann::json::parse(io::to_json(x));
  const Signal back = io::signal_from_json(j);
  REQUIRE(back == x);
}

TEST_CASE("autocorrelation JSON round trip") {
  const auto a = autocorrelation(Signal({1.0, 2.0, 0.5}));
  const auto j = nlohmann::json::parse(io::to_json(a));
  REQUIRE(io::autocorrelation_from_json(j).coeffs() == a.coeffs());
}

TEST_CASE("zero-set JSON round trip") {
  const std::vector<std::complex<double>> zeros{
      {-1.5, 0.0}, {0.75, 1.0}, {0.75, -1.0}};
  const auto j = nlohmann::json::parse(io::to_json(zeros));
  REQUIRE(io::zeros_from_json(j) == zeros);
}

TEST_CASE("report JSON carries the documented fields") {
  const auto report = enumerate_solutions(autocorrelation(Signal({2.0, 1.0})));
  const auto j = nlohmann::json::parse(io::to_json(report));
  REQUIRE(j["total_classes"].get<int>() == 1);
  REQUIRE(j["nonnegative_classes"].get<int>() == 1);
  REQUIRE(j["upper_bound"].get<std::uint64_t>() == 1);
  REQUIRE(j["solutions"].is_array());
  REQUIRE(j["solutions"].size() == 1);
  REQUIRE(j["solutions"][0].contains("values"));
  REQUIRE(j["solutions"][0].contains("zeros"));
  REQUIRE(j["solutions"][0].contains("nonnegative"));
  REQUIRE(j["solutions"][0].contains("min_component"));
  REQUIRE(j["warnings"].is_array());
}

TEST_CASE("region JSON carries the documented fields") {
  const auto region =
      feasible_region({{-1.5, 0.0}, {-1.0, 1.0}, {-1.0, -1.0}});
  const auto j = nlohmann::json::parse(io::to_json(region));
  REQUIRE(j["halfplane_re_max"].get<double>() == region.halfplane_re_max);
  REQUIRE(j["excluded_discs"].size() == 3);
  REQUIRE(j["excluded_discs"][0]["center_re"].get<double>() ==
          region.discs[0].center);
  REQUIRE(j["excluded_discs"][0]["radius"].get<double>() ==
          region.discs[0].radius);
}

TEST_CASE("perturb CSV shape") {
  const Signal base({1.0, 2.0, 0.9});
  const auto study = perturb_study(base, 1e-3, 4, 2);
  const std::string csv = io::perturb_csv(study);
  std::istringstream in(csv);
  std::string line;
  REQUIRE(std::getline(in, line));
  REQUIRE(line == "trial,max_root_displacement,total_classes,"
                  "nonnegative_classes");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    REQUIRE(std::count(line.begin(), line.end(), ',') == 3);
  }
  REQUIRE(rows == 4);
}

TEST_CASE("raster CSV covers the window") {
  const auto region = feasible_region({{-2.0, 0.0}});
  const std::string csv = io::raster_csv(region, -1.0, 1.0, 0.0, 0.5, 0.5);
  std::istringstream in(csv);
  std::string line;
  REQUIRE(std::getline(in, line));
  REQUIRE(line == "re,im,feasible");
  int rows = 0, feasible = 0;
  while (std::getline(in, line)) {
    ++rows;
    feasible += line.back() == '1';
  }
  REQUIRE(rows == 10);  // 5 re steps x 2 im steps
  REQUIRE(feasible > 0);
  REQUIRE(feasible < rows);
}

TEST_CASE("readers reject malformed input") {
  REQUIRE_THROWS(io::signal_from_json(nlohmann::json::parse("{\"x\": 1}")));
  REQUIRE_THROWS(io::zeros_from_json(nlohmann::json::parse("[{\"re\": 1}]")));
  REQUIRE_THROWS(io::load_json("/nonexistent/path.json"));
}
