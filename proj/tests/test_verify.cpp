#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "ell2/errors.hpp"
#include "ell2/verify.hpp"

using namespace ell2;

namespace {

Record sample_record() {
  Record r;
  r.suite = "measure";
  r.check = "demo";
  r.anchor = "a, \"quoted\" statement";
  r.inputs_digest = "0123456789abcdef";
  r.values = {{"lhs", 0.1}, {"rhs", 1.0 / 3.0}, {"gap", INFINITY}};
  r.tolerance = 1e-12;
  r.pass = false;
  r.detail = "line one";
  r.wall_seconds = 1.5;
  return r;
}

std::string slurp(const std::string& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("config defaults and round trip") {
  RunConfig c = parse_config("{}");
  CHECK(c == RunConfig{});
  c.seed = 7;
  c.suites = {"measure", "ck"};
  c.weight_ratio = 0.25;
  CHECK(parse_config(to_json(c)) == c);
}

TEST_CASE("config errors") {
  auto kind = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::IoError;
  };
  CHECK(kind("{\"sed\": 1}") == ErrorKind::ConfigError);
  CHECK(kind("[1]") == ErrorKind::ConfigError);
  CHECK(kind("{") == ErrorKind::ConfigError);
  CHECK(kind("{\"weight_ratio\": 1.5}") == ErrorKind::ConfigError);
  CHECK(kind("{\"suites\": [\"nope\"]}") == ErrorKind::ConfigError);
  CHECK(kind("{\"dims\": \"eight\"}") == ErrorKind::ConfigError);
}

TEST_CASE("seed override from the environment") {
  RunConfig c;
  setenv("ELL2_SEED", "99", 1);
  apply_env_overrides(c);
  CHECK(c.seed == 99);
  setenv("ELL2_SEED", "x", 1);
  CHECK_THROWS_AS(apply_env_overrides(c), Error);
  unsetenv("ELL2_SEED");
}

TEST_CASE("empty selection gives an empty report") {
  Report r = run_suite(RunConfig{});
  CHECK(r.records.empty());
  CHECK(r.all_pass());
  CHECK(to_csv(r) == "suite,check,anchor,inputs_digest,values,tolerance,pass,detail\n");
}

TEST_CASE("csv and json serialisation") {
  Report r;
  r.records.push_back(sample_record());
  std::string csv = to_csv(r);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  CHECK(csv.find("\"a, \"\"quoted\"\" statement\"") != std::string::npos);
  CHECK(csv.find("rhs=0.33333333333333331") != std::string::npos);
  CHECK(csv.find("gap=inf") != std::string::npos);
  CHECK(csv.find("1.5") == std::string::npos);  // wall time stays out of the body
  Report back = report_from_json(to_json(r));
  CHECK(back == r);
  CHECK_FALSE(back.all_pass());
  CHECK_THROWS_AS(report_from_json("{\"records\": [{}]}"), Error);
}

TEST_CASE("emit writes the report and the timing sidecar") {
  Report r;
  r.records.push_back(sample_record());
  auto dir = std::filesystem::temp_directory_path() / "ell2_verify_test";
  std::filesystem::create_directories(dir);
  std::string p = (dir / "r.csv").string();
  emit(r, p, "csv");
  CHECK(slurp(p) == to_csv(r));
  CHECK(slurp(p + ".timing.csv").find("measure,demo,1.5") != std::string::npos);
  emit(r, (dir / "r.json").string(), "json");
  CHECK(report_from_json(slurp((dir / "r.json").string())) == r);
  CHECK_THROWS_AS(emit(r, (dir / "missing" / "r.csv").string(), "csv"), Error);
  CHECK_THROWS_AS(emit(r, p, "xml"), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("sha1") {
  CHECK(sha1_hex("abc") == "a9993e364706816aba3e25717850c26c9cd0d89d");
  CHECK(sha1_hex("") == "da39a3ee5e6b4b0d3255bfef95601890afd80709");
}

TEST_CASE("a fast suite is deterministic and self-describing") {
  RunConfig c;
  c.suites = {"dbar", "ck"};
  Report a = run_suite(c), b = run_suite(c);
  CHECK(a == b);
  CHECK(a.digest() == b.digest());
  CHECK(a.records.size() == 3);
  for (auto& rec : a.records) {
    CHECK(rec.pass);
    CHECK_FALSE(rec.anchor.empty());
    CHECK(rec.inputs_digest.size() == 16);
    CHECK_FALSE(rec.values.empty());
  }
  c.seed = 1;
  CHECK(run_suite(c).records[0].inputs_digest != a.records[0].inputs_digest);
}
