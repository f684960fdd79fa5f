#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

struct Result {
  int code;
  std::string out;
};

Result run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " '" DSERIES_CLI_PATH "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "dseries_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

nlohmann::json reports_of(const std::string& out) { return nlohmann::json::parse(out)["reports"]; }

}  // namespace

TEST_CASE("eval targets") {
  auto r = run("eval sigma --gamma 1 --k 6");
  CHECK(r.code == 0);
  CHECK(r.out == "2\n");
  r = run("eval sigma --gamma 1 --k 6 --positive");
  CHECK(r.out == "12\n");
  r = run("eval d-factorial --a 3 --gamma 1 --k 4");
  CHECK(r.code == 0);
  CHECK(r.out == "2.1875\n");
  r = run("eval zeta-shifted --a 2 --gamma 1 --n 1");
  CHECK(std::stod(r.out) == doctest::Approx(1.6449340668482264).epsilon(1e-14));
  r = run("eval jordan --m 2 --shifts 1 --gamma 1 --n 1");
  CHECK(r.out == "0.5\n");
}

TEST_CASE("eval theta reports value, terms, tail bound and status") {
  const auto r = run("eval theta --spec '2;;;;' --gamma 1 --z 2 --max-k 1000000");
  CHECK(r.code == 0);
  REQUIRE(r.out.rfind("value=", 0) == 0);
  const double value = std::stod(r.out.substr(6));
  CHECK(value == doctest::Approx(1.6449340668482264 * 1.2020569031595943).epsilon(1e-5));
  CHECK(r.out.find("terms_used=1000000\n") != std::string::npos);
  CHECK(r.out.find("tail_bound=") != std::string::npos);
  CHECK(r.out.find("status=") != std::string::npos);
}

TEST_CASE("verify D-binomial grid") {
  const auto r = run("verify --ids E1.16 --n 1..4 --beta 2 --gamma 1");
  CHECK(r.code == 0);
  const auto reports = reports_of(r.out);
  REQUIRE(reports.size() == 4);
  for (const auto& rep : reports) CHECK(rep["status"] == "pass");
}

TEST_CASE("verify D-Kummer three-way record") {
  const auto r = run("verify --ids E4.10 --m 2 --a 4 --b 2");
  CHECK(r.code == 0);
  const auto reports = reports_of(r.out);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0]["status"] == "pass");
  CHECK(reports[0]["inputs"].contains("form_j_ratio"));
  CHECK(reports[0]["inputs"].contains("form_sigma_product"));
  CHECK(reports[0]["inputs"].contains("form_q_kummer"));
}

TEST_CASE("documented discrepancies pass only when expected") {
  auto r = run("verify --ids E1.25");
  CHECK(r.code == 0);
  bool documented = false;
  for (const auto& rep : reports_of(r.out)) documented |= rep["status"] == "discrepancy-documented";
  CHECK(documented);
  r = run("verify --ids E1.25 --expected E1.16");
  CHECK(r.code == 1);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run("verify --ids E9.99").code == 2);
  CHECK(run("verify --bogus").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("eval sigma --gamma 1").code == 2);
  CHECK(run("eval theta --spec 'x;y' --z 2").code == 2);
  CHECK(run("verify --ids E1.16 --n 4..1").code == 2);
  CHECK(run("verify --format yaml").code == 2);
  CHECK(run("eval sigma --k 6", "D_SERIES_SIEVE_BOUND=abc").code == 2);
}

TEST_CASE("i/o errors exit 3") {
  CHECK(run("verify --ids E1.17 -o /nonexistent_dir/out.json").code == 3);
  CHECK(run("verify --config /nonexistent_dir/config.json").code == 3);
}

TEST_CASE("config file with flags taking precedence") {
  const auto path = scratch("config.json");
  {
    std::ofstream f(path);
    f << R"({"ids":["E1.17"],"m":[2],"n":[1],"format":"text"})";
  }
  auto r = run("verify --config '" + path.string() + "'");
  CHECK(r.code == 0);
  CHECK(r.out.find("m=2") != std::string::npos);
  r = run("verify --config '" + path.string() + "' --m 6 --format csv");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("id,status,", 0) == 0);
  CHECK(r.out.find("m=6") != std::string::npos);
  CHECK(r.out.find("m=2;") == std::string::npos);
}

TEST_CASE("output file and env sieve bound") {
  const auto path = scratch("out.json");
  std::filesystem::remove(path);
  const auto r = run("verify --ids E1.17 --m 2 -o '" + path.string() + "'",
                     "D_SERIES_SIEVE_BOUND=200000");
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(path);
  const auto doc = nlohmann::json::parse(f);
  CHECK(doc["summary"]["total"] == 3);
  CHECK(run("eval sigma --gamma 1 --k 6", "D_SERIES_SIEVE_BOUND=1000").out == "2\n");
}

TEST_CASE("coefficient table") {
  auto r = run("table --pairs 2:1,4:2,4:3,6:1,6:2 --k 2 --format csv");
  CHECK(r.code == 0);
  CHECK(r.out.find("2,1,1,2,1\n") != std::string::npos);
  CHECK(r.out.find("6,1,1,2,1\n") != std::string::npos);
  CHECK(r.out.find("4,2,1,2,1.607142857142857") != std::string::npos);
  r = run("table --pairs '' --format csv");
  CHECK(r.code == 0);
  CHECK(r.out == "a,b,gamma,k,coefficient\n");
  r = run("table");
  CHECK(r.code == 0);
  CHECK(r.out.find("coefficient") != std::string::npos);
}
