#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "cli.hpp"
#include "unidisc/point_set.hpp"

namespace fs = std::filesystem;
using unidisc::cli::run;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "unidisc_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

nlohmann::json read(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

std::string without_timestamp(const fs::path& p) {
  auto j = read(p);
  j.erase("generated_at");
  return j.dump();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("gen writes point sets with metadata") {
    const auto out = scratch("gen.json");
    CHECK(run({"gen", "--family", "universal-linf", "--n", "4", "--d", "2", "--out", out.string()}) == 0);
    const auto j = read(out);
    CHECK(j["m"] == 16384);
    CHECK(j["metadata"]["r"] == 14);
    CHECK(j["metadata"]["log_term"] == 5);
    CHECK(j["version"] == unidisc::cli::kVersion);
    CHECK(j["config"]["command"] == "gen");
    CHECK(unidisc::point_set_from_json(j).size() == 16384);

    CHECK(run({"gen", "--family", "sparse", "--n", "0", "--d", "2", "--out", out.string()}) == 0);
    CHECK(read(out)["m"] == 16);
    CHECK(run({"gen", "--family", "tensorP", "--N", "1", "--d", "1", "--out", out.string()}) == 0);
    CHECK(read(out)["m"] == 3);
    CHECK(run({"gen", "--family", "universal-linf", "--n", "40", "--d", "2"}) == 2);
    CHECK(run({"gen", "--family", "bogus"}) == 2);
  }

  TEST_CASE("net checks") {
    const auto net = scratch("net.json");
    const auto out = scratch("check.json");
    REQUIRE(run({"gen", "--family", "net", "--n", "6", "--d", "2", "--out", net.string()}) == 0);
    CHECK(run({"check-net", "--in", net.string(), "--t", "0", "--out", out.string()}) == 0);
    CHECK(read(out)["pass"] == true);
    CHECK(run({"min-t", "--in", net.string(), "--out", out.string()}) == 0);
    CHECK(read(out)["t"] == 0);
    const auto rnd = scratch("random.json");
    REQUIRE(run({"gen", "--family", "random", "--m", "64", "--d", "2", "--out", rnd.string()}) == 0);
    CHECK(run({"check-net", "--in", rnd.string(), "--t", "0"}) == 2);
    CHECK(run({"check-net", "--in", scratch("missing.json").string()}) == 2);
  }

  TEST_CASE("dispersion") {
    const auto net = scratch("h8.json");
    const auto out = scratch("disp.json");
    REQUIRE(run({"gen", "--family", "net", "--n", "8", "--d", "2", "--out", net.string()}) == 0);
    CHECK(run({"dispersion", "--in", net.string(), "--out", out.string()}) == 0);
    const auto j = read(out);
    CHECK(j["scaled"].get<double>() <= 8.0);
    CHECK(run({"dispersion", "--in", net.string(), "--method", "dyadic", "--out", out.string()}) == 0);
  }

  TEST_CASE("sweep assertions set the exit code") {
    const auto out = scratch("sweep.json");
    const auto csv = scratch("sweep.csv");
    CHECK(run({"sweep", "--family", "universal-lq", "--n", "3", "--d", "2", "--q", "2", "--a", "3", "--samples",
               "10", "--spikes", "3", "--assert-c1", "0.1", "--out", out.string(), "--csv", csv.string()}) == 0);
    const auto j = read(out);
    CHECK(j["assertions"]["C1_hat"]["pass"] == true);
    CHECK(j["subspaces"].size() == 4);
    CHECK(fs::file_size(csv) > 0);
    CHECK(run({"sweep", "--family", "universal-lq", "--n", "3", "--d", "2", "--q", "2", "--a", "3", "--samples",
               "10", "--spikes", "3", "--assert-c1", "5"}) == 1);
    CHECK(run({"sweep", "--n", "3", "--d", "2"}) == 2);
  }

  TEST_CASE("rerun reproduces the report") {
    const auto first = scratch("first.json");
    const auto second = scratch("second.json");
    REQUIRE(run({"sweep", "--family", "random", "--m", "300", "--n", "3", "--d", "2", "--q", "inf", "--samples", "6",
                 "--spikes", "2", "--seed", "9", "--out", first.string()}) == 0);
    fs::copy_file(first, second, fs::copy_options::overwrite_existing);
    REQUIRE(run({"rerun", "--config", second.string(), "--out", first.string()}) == 0);
    CHECK(without_timestamp(first) == without_timestamp(second));
  }

  TEST_CASE("compare and witness") {
    const auto csv = scratch("compare.csv");
    CHECK(run({"compare", "--n", "3", "--d", "2", "--q", "2", "--samples", "5", "--spikes", "2", "--csv",
               csv.string()}) == 0);
    std::ifstream in(csv);
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 4);
    const auto out = scratch("witness.json");
    CHECK(run({"witness", "--family", "universal-linf", "--n", "4", "--d", "2", "--a-min", "3", "--search",
               "dyadic", "--out", out.string()}) == 0);
    CHECK(read(out)["found"] == false);
  }
}
