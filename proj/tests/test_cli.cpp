#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>

#include "phasebell/cli.hpp"

using namespace phasebell;
using namespace phasebell::cli;

namespace {

ExperimentConfig config(const std::string& command) {
  ExperimentConfig c;
  c.command = command;
  return c;
}

nlohmann::json read_json(const std::filesystem::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_NOTHROW(config("wigner").validate());
  CHECK_THROWS_AS(config("nope").validate(), Error);
  auto c = config("wigner");
  c.n = 24;
  CHECK_THROWS_AS(c.validate(), Error);
  c = config("wigner");
  c.box = -1.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = config("quantum-violation");
  c.L = {100.0, 0.5};
  CHECK_THROWS_AS(c.validate(), Error);
  c = config("three-marginal");
  c.epsilon = 0.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = config("three-marginal");
  c.drop_marginal = "xp";
  CHECK_THROWS_AS(c.validate(), Error);
  c = config("three-marginal");
  c.families = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = config("classical-counterexample");
  c.sign = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = config("classical-counterexample");
  c.format = "xml";
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("report carries its config") {
  auto c = config("classical-counterexample");
  c.seed = 42;
  const auto r = run(c);
  CHECK(r.pass());
  const auto j = r.to_json();
  CHECK(j["tool"] == "phasebell");
  CHECK(j["command"] == "classical-counterexample");
  CHECK(j["config"]["seed"] == 42);
  CHECK(j["pass"] == true);
  CHECK(j["tables"].contains("consistency"));
  CHECK(j["results"]["aligned"]["exact_S"] == "4");
  CHECK(j["wall_time_seconds"].get<double>() >= 0.0);
}

TEST_CASE("misaligned pattern value from enumeration") {
  const auto j = run(config("classical-counterexample")).to_json();
  CHECK(j["results"]["misaligned q1"]["exact_S"] == "0");
  CHECK(j["results"]["misaligned particle 1"]["exact_S"] == "-4");
}

TEST_CASE("invalid atoms are rejected") {
  auto c = config("classical-counterexample");
  c.atoms = {0, 0, 0, 1, 0, 0, 1, 1};
  CHECK_THROWS_AS(run(c), Error);
}

TEST_CASE("failed checks clear the pass flag") {
  ExperimentReport r;
  r.check("good", true);
  CHECK(r.pass());
  r.check("bad", false, 1.5, "detail");
  CHECK_FALSE(r.pass());
  CHECK(r.to_json()["checks"][1]["value"] == 1.5);
}

TEST_CASE("non-finite numbers serialize as null") {
  CHECK(number(1.0) == 1.0);
  CHECK(number(std::numeric_limits<double>::infinity()).is_null());
  CHECK(number(std::nan("")).is_null());
}

TEST_CASE("csv tables") {
  const Table t{"demo", {"a", "b"}, {{1, "x,y"}, {2.5, nullptr}}};
  CHECK(table_csv(t) == "a,b\n1,\"x,y\"\n2.5,\n");
}

TEST_CASE("tampered triple aborts three-marginal") {
  auto c = config("three-marginal");
  c.n = 8;
  c.tamper = "ho:1,0";
  const auto r = run(c);
  CHECK_FALSE(r.pass());
  CHECK(r.to_json()["results"]["aborted"] == "consistency failure");
  CHECK(r.to_json()["tables"].contains("consistency"));
}

TEST_CASE("three-marginal is deterministic") {
  auto c = config("three-marginal");
  c.n = 8;
  c.state = "random:3";
  c.families = 3;
  auto a = run(c).to_json(), b = run(c).to_json();
  CHECK(a["pass"] == true);
  a.erase("wall_time_seconds");
  b.erase("wall_time_seconds");
  CHECK(a == b);
}

TEST_CASE("operator-checks refuses large dense grids") {
  auto c = config("operator-checks");
  c.n = 64;
  CHECK_THROWS_AS(run(c), Error);
}

TEST_CASE("quantum-violation mirror") {
  auto c = config("quantum-violation");
  c.L = {100.0, 1e4};
  c.n = 1024;
  c.sign = -1;
  const auto j = run(c).to_json();
  const auto& rows = j["tables"]["sweep"]["rows"];
  CHECK(rows[0][1].get<double>() == doctest::Approx(-2.0350285455702717).epsilon(1e-10));
  CHECK(rows[0][2].get<double>() == doctest::Approx(2.0350285455702717).epsilon(1e-10));
}

TEST_CASE("emit honors --out and the output directory variable") {
  const auto dir = std::filesystem::temp_directory_path() / "phasebell_emit";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  auto c = config("classical-counterexample");
  c.out = (dir / "explicit.json").string();
  emit(run(c));
  CHECK(read_json(dir / "explicit.json")["pass"] == true);

  c.out.clear();
  c.format = "csv";
  ::setenv("PHASEBELL_OUT", dir.c_str(), 1);
  emit(run(c));
  ::unsetenv("PHASEBELL_OUT");
  CHECK(read_json(dir / "classical-counterexample.json")["command"] == "classical-counterexample");
  CHECK(std::filesystem::exists(dir / "classical-counterexample.patterns.csv"));
  CHECK(std::filesystem::exists(dir / "classical-counterexample.consistency.csv"));
  std::filesystem::remove_all(dir);
}
