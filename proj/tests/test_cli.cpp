#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cvqkd/cli.hpp"
#include "cvqkd/keyrate.hpp"
#include "cvqkd/table.hpp"

using namespace cvqkd;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("number formatting") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(0.1 + 0.2) == "0.3");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(1e-7) == "1e-07");
  CHECK(round_significant(1.0 / 3.0) == 0.333333333333);
  CHECK(csv_safe("a,b\nc") == "a;b;c");
}

TEST_CASE("keyrate JSON") {
  const auto r = invoke({"keyrate", "--vm", "10", "--eta-x", "0.1", "--eps-x", "0.05", "--vpb",
                         "1.005"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["config"]["command"] == "keyrate");
  CHECK(j["config"]["vm"] == 10);
  REQUIRE(j["results"].size() == 1);
  const auto& row = j["results"][0];
  for (const char* key :
       {"variant", "v_p_b", "i_ab", "chi_be", "key_rate", "c_p_evaluated", "worst_case"}) {
    CHECK(row.contains(key));
  }
  CHECK(row["variant"] == "ud-pessimistic");
  CHECK(row["worst_case"] == true);
  const double lib = worst_case_key_rate(ProtocolConfig{10.0}, XChannel{0.1, 0.05}, 1.005).key_rate;
  CHECK(row["key_rate"].get<double>() == doctest::Approx(lib).epsilon(1e-11));
  CHECK(row["i_ab"].get<double>() == doctest::Approx(0.49820336763799584).epsilon(1e-11));
}

TEST_CASE("several variants in one call") {
  const auto r = invoke({"keyrate", "--variant", "gg02", "--variant", "ud-optimistic", "--format",
                         "csv"});
  REQUIRE(r.code == 0);
  const Table t = parse_csv(r.out);
  REQUIRE(t.rows.size() == 2);
  CHECK(std::get<std::string>(t.rows[0][0]) == "gg02");
  CHECK(std::get<std::string>(t.rows[1][0]) == "ud-optimistic");
}

TEST_CASE("invalid input exits 2 with a diagnostic") {
  auto r = invoke({"keyrate", "--eta-x", "1.2"});
  CHECK(r.code == 2);
  CHECK(r.err.find("transmittance") != std::string::npos);
  CHECK(r.out.empty());

  r = invoke({"keyrate", "--variant", "foo"});
  CHECK(r.code == 2);
  CHECK(r.err.find("foo") != std::string::npos);

  CHECK(invoke({"keyrate", "--eps-x", "-0.1"}).code == 2);
  CHECK(invoke({"keyrate", "--vm", "abc"}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({}).code == 2);
  CHECK(invoke({"figure"}).code == 2);
  CHECK(invoke({"figure", "--id", "9"}).code == 2);
  CHECK(invoke({"keyrate", "--format", "xml"}).code == 2);
  CHECK(invoke({"sweep-loss", "--beta", "1.5"}).code == 2);
  CHECK(invoke({"region", "--grid-points", "100"}).code == 2);
}

TEST_CASE("empty region exits 3 with a structured record") {
  auto r = invoke({"keyrate", "--vpb", "0.9"});
  CHECK(r.code == 3);
  const Json j = Json::parse(r.out);
  CHECK(j["error"]["kind"] == "EmptyRegion");
  CHECK(j["results"].empty());

  r = invoke({"keyrate", "--vpb", "0.9", "--format", "csv"});
  CHECK(r.code == 3);
  CHECK(r.out.rfind("status,message\nEmptyRegion,", 0) == 0);
}

TEST_CASE("tolerable-noise marks points without a secure rate") {
  const auto r = invoke({"tolerable-noise", "--vm", "100", "--beta", "0.5", "--loss-db-min", "0",
                         "--loss-db-max", "40", "--loss-db-step", "20", "--variant",
                         "ud-pessimistic"});
  CHECK(r.code == 3);
  const Table t = parse_csv(r.out);
  REQUIRE(t.columns == std::vector<std::string>{"loss_db", "variant", "eps_max", "status"});
  REQUIRE(t.rows.size() == 3);
  CHECK(std::get<std::string>(t.rows[0][3]) == "ok");
  CHECK(std::get<std::string>(t.rows[2][3]) == "NoPositiveRate");
}

TEST_CASE("figure 5 layout") {
  const auto r = invoke({"figure", "--id", "5"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("loss_db,eps_max_gg02,eps_max_ud_estimated,eps_max_ud_pessimistic,"
                    "eps_max_ud_optimistic\n",
                    0) == 0);
  const Table t = parse_csv(r.out);
  CHECK(t.rows.size() == 61);
  CHECK(std::get<double>(t.rows[0][0]) == 0.0);
  CHECK(std::get<double>(t.rows.back()[0]) == 30.0);
}

TEST_CASE("other figures run") {
  for (const char* id : {"2", "3", "4"}) {
    CAPTURE(id);
    const auto r = invoke({"figure", "--id", id});
    CHECK(r.code == 0);
    CHECK(parse_csv(r.out).rows.size() > 10);
  }
}

TEST_CASE("output round-trips byte for byte") {
  SUBCASE("CSV") {
    for (std::vector<std::string> args :
         {std::vector<std::string>{"figure", "--id", "4"},
          std::vector<std::string>{"region", "--resolution", "11"},
          std::vector<std::string>{"keyrate", "--format", "csv"}}) {
      const auto r = invoke(args);
      REQUIRE(r.code == 0);
      CHECK(to_csv(parse_csv(r.out)) == r.out);
    }
  }
  SUBCASE("JSON") {
    for (std::vector<std::string> args :
         {std::vector<std::string>{"keyrate", "--variant", "gg02", "--variant", "ud-estimated"},
          std::vector<std::string>{"region", "--resolution", "11", "--format", "json"},
          std::vector<std::string>{"sweep-cp", "--vpb", "1.00535", "--format", "json"}}) {
      const auto r = invoke(args);
      REQUIRE(r.code == 0);
      CHECK(dump_json(Json::parse(r.out)) == r.out);
    }
  }
}

TEST_CASE("deterministic output and --out") {
  const auto a = invoke({"sweep-loss", "--vm", "100", "--loss-db-max", "10"});
  const auto b = invoke({"sweep-loss", "--vm", "100", "--loss-db-max", "10"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);

  const auto path = std::filesystem::temp_directory_path() / "cvqkd_cli_out_test.csv";
  const auto c = invoke({"sweep-loss", "--vm", "100", "--loss-db-max", "10", "--out",
                         path.string()});
  CHECK(c.code == 0);
  CHECK(c.out.empty());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == a.out);
  std::filesystem::remove(path);

  CHECK(invoke({"keyrate", "--out", "/nonexistent-dir/x.json"}).code == 2);
}

}  // TEST_SUITE
