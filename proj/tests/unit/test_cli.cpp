#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qce/cli.hpp"
#include "qce/errors.hpp"

using namespace qce;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "qce");
  std::ostringstream out, err;
  int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

int count_prefix(const std::string& text, const std::string& prefix) {
  std::istringstream is(text);
  int n = 0;
  for (std::string line; std::getline(is, line);)
    if (line.rfind(prefix, 0) == 0) ++n;
  return n;
}

}  // namespace

TEST_CASE("number lists") {
  CHECK(parse_number_list({"0:5:20"}) == std::vector<double>{0, 5, 10, 15, 20});
  CHECK(parse_number_list({"4", "8"}) == std::vector<double>{4, 8});
  CHECK(parse_number_list({"2.5"}) == std::vector<double>{2.5});
  CHECK_THROWS_AS(parse_number_list({"1:0:3"}), ParameterError);
}

TEST_CASE("selftest passes") {
  auto r = run({"selftest"});
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("sweep-snr has one row per snr point and algorithm") {
  auto r = run({"sweep-snr", "--k", "4", "--n", "16", "--m", "8", "--l", "8", "--snr", "0:5:20",
                "--trials", "20", "--seed", "7"});
  REQUIRE(r.code == 0);
  CHECK(count_prefix(r.out, "algorithm,") == 1);
  CHECK(count_prefix(r.out, "proposed,") == 5);
  CHECK(count_prefix(r.out, "msm,") == 5);
  CHECK(count_prefix(r.out, "zf,") == 5);
}

TEST_CASE("precode returns a feasible point") {
  auto r = run({"precode", "--k", "2", "--n", "4", "--m", "4", "--l", "4", "--seed", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("feasible = true") != std::string::npos);
}

TEST_CASE("instance files round trip through precode") {
  const std::string path = "test_cli_instance.json";
  auto a = run({"precode", "--k", "2", "--n", "4", "--m", "8", "--l", "8", "--seed", "9",
                "--save-instance", path});
  auto b = run({"precode", "--instance", path});
  auto inst = load_instance(path);
  std::remove(path.c_str());
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(a.out == b.out);
  CHECK(inst.M == 8);
  CHECK(inst.users() == 2);
}

TEST_CASE("config file with flags taking precedence") {
  const std::string path = "test_cli_config.ini";
  {
    std::ofstream f(path);
    f << "k = 2\nn = 4\nm = 4\nl = 4\nseed = 3\n";
  }
  auto from_file = run({"--config", path, "precode"});
  auto overridden = run({"--config", path, "--seed", "5", "precode"});
  std::remove(path.c_str());
  auto direct3 = run({"precode", "--k", "2", "--n", "4", "--m", "4", "--l", "4", "--seed", "3"});
  auto direct5 = run({"precode", "--k", "2", "--n", "4", "--m", "4", "--l", "4", "--seed", "5"});
  CHECK(from_file.code == 0);
  CHECK(from_file.out == direct3.out);
  CHECK(overridden.out == direct5.out);
}

TEST_CASE("bad input exits nonzero with usage") {
  auto r = run({"sweep-snr", "--frobnicate"});
  CHECK(r.code != 0);
  auto m = run({"precode", "--m", "6"});
  CHECK(m.code != 0);
  CHECK(m.err.find("Usage") != std::string::npos);
  CHECK(run({}).code != 0);
}
