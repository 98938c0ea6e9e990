#include <doctest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "magspec/errors.hpp"
#include "magspec/io.hpp"
#include "magspec/run.hpp"

using namespace magspec;
using nlohmann::json;

namespace {

struct Output {
  std::string text;
  int status = -1;
};

Output cli(const std::string& args, const std::string& env = "") {
  const char* exe = std::getenv("MAGSPEC_CLI");
  REQUIRE_MESSAGE(exe != nullptr, "MAGSPEC_CLI is not set");
  std::string cmd = env + (env.empty() ? "" : " ") + "'" + exe + "' " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  Output out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.text.append(buf, n);
  int raw = pclose(p);
  out.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return out;
}

std::string temp_path(const std::string& name) {
  const char* dir = std::getenv("TMPDIR");
  return std::string(dir && *dir ? dir : "/tmp") + "/magspec_cli_" + name;
}

}  // namespace

TEST_CASE("config round-trips through JSON") {
  RunConfig c;
  c.shape.kind = ShapeKind::star;
  c.shape.radius = 1.1;
  c.shape.epsilon = 0.1;
  c.shape.lobes = 3;
  c.shape.center = {0.1, -0.3};
  c.b = 0.1 + 0.2;
  c.gamma = {5.5, {0.25}, {-0.125}};
  c.gammas = {5.0, 10.0};
  c.window = {10, 30};
  c.model = RateModel::log;
  c.format = OutputFormat::csv;
  json j = to_json(c);
  RunConfig back = config_from_json(json::parse(j.dump()));
  CHECK(to_json(back) == j);
  CHECK(back.b == c.b);
  CHECK(back.gamma.sin_coeffs == c.gamma.sin_coeffs);
}

TEST_CASE("config validation lists every violated field") {
  json j = {{"b", -1.0}, {"N", 15}, {"digits", 0}, {"colour", "red"}, {"shape", {{"kind", "ellipse"}, {"semi_a", 0.0}}}};
  try {
    config_from_json(j);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    auto has = [&](const std::string& key) {
      for (const auto& v : e.violations())
        if (v.rfind(key, 0) == 0) return true;
      return false;
    };
    CHECK(e.violations().size() == 5);
    CHECK(has("b:"));
    CHECK(has("N:"));
    CHECK(has("digits:"));
    CHECK(has("colour:"));
    CHECK(has("shape:"));
  }
  CHECK_THROWS_AS(config_from_json(json{{"window", "20:60"}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json{{"n", 1.5}}), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::array()), ConfigError);
}

TEST_CASE("fixed notation keeps significant digits") {
  Precision p{256};
  CHECK(format_fixed(BigReal(0.5, p), 4) == "0.5000");
  CHECK(format_fixed(BigReal(123.456, p), 5) == "123.46");
  CHECK(format_fixed(BigReal("1.25e-30", p), 3) == "0.00000000000000000000000000000125");
  std::string tiny = format_fixed(BigReal("3.5e-100", p), 17);
  CHECK(tiny.find('e') == std::string::npos);
  CHECK(BigReal(tiny, p).to_string(17) == BigReal("3.5e-100", p).to_string(17));
  CHECK(format_double(0.1, 3) == "1.00e-01");
}

TEST_CASE("csv tables use LF and reject ragged rows") {
  CsvTable t{{"j", "v"}, {{"1", "0.5"}, {"2", "0.25"}}};
  CHECK(t.str() == "j,v\n1,0.5\n2,0.25\n");
  CsvTable back = parse_csv("j,v\r\n1,0.5\r\n");
  CHECK(back.header.size() == 2);
  CHECK(back.rows.size() == 1);
  CHECK_THROWS_AS(parse_csv("j,v\n1\n"), DomainError);
  CHECK_THROWS_AS(parse_csv(""), DomainError);
}

TEST_CASE("run dispatch and error records") {
  RunConfig c;
  RunResult r = run("capacity", c);
  CHECK(r.record["capacity"] == 1.0);
  CHECK(r.record["config"] == to_json(c));
  CHECK_THROWS_AS(run("nonsense", c), ConfigError);
  HypothesisError h("gamma too small");
  CHECK(exit_status(h) == 3);
  CHECK(error_record("cluster", h)["error"]["type"] == "hypothesis");
  ConfigError ce({"b: bad"});
  CHECK(exit_status(ce) == 2);
  CHECK(error_record("x", ce)["error"]["violations"].size() == 1);
}

TEST_CASE("capacity of the unit disk") {
  Output o = cli("capacity --shape disk --radius 1");
  REQUIRE(o.status == 0);
  json j = json::parse(o.text);
  CHECK(j["capacity"] == 1.0);
  CHECK(j["method"] == "analytic");
  CHECK(j["schema"] == kSchema);
  CHECK(j["config"]["shape"]["kind"] == "disk");
}

TEST_CASE("toeplitz CSV feeds rate") {
  const std::string args = "toeplitz --n 1 --b 2 --shape disk --radius 1 --count 60 --bits 512 --format csv";
  Output o = cli(args);
  REQUIRE(o.status == 0);
  CHECK(o.text.find('\r') == std::string::npos);
  CHECK(o.text.find('e') == std::string::npos);
  CsvTable t = parse_csv(o.text);
  REQUIRE(t.header == std::vector<std::string>{"j", "s_j", "rho_j"});
  REQUIRE(t.rows.size() == 60);
  for (std::size_t i = 1; i < t.rows.size(); ++i) CHECK(std::stod(t.rows[i][2]) > std::stod(t.rows[i - 1][2]));
  // byte-identical on rerun
  CHECK(cli(args).text == o.text);

  const std::string path = temp_path("toeplitz.csv");
  std::ofstream(path, std::ios::binary) << o.text;
  Output rate = cli("rate --input '" + path + "' --window 20:60");
  REQUIRE(rate.status == 0);
  json j = json::parse(rate.text);
  double limit = j["limit"], err = j["error_estimate"];
  CHECK(std::fabs(limit - 1.0) < 0.02);
  CHECK(err > 0.0);
  CHECK(err < 0.02);
  CHECK(j["column"] == "s_j");
  CHECK(j["window"] == json::array({20, 60}));
  std::remove(path.c_str());
}

TEST_CASE("config file with flag overrides") {
  const std::string path = temp_path("config.json");
  std::ofstream(path) << R"({"shape": {"kind": "ellipse", "semi_a": 1.5, "semi_b": 0.5}, "method": "fekete", "points": 48})";
  Output o = cli("capacity --config '" + path + "' --points 100");
  REQUIRE(o.status == 0);
  json j = json::parse(o.text);
  CHECK(j["config"]["points"] == 100);
  CHECK(j["config"]["shape"]["semi_a"] == 1.5);
  CHECK(j["method"] == "fekete");
  CHECK(std::fabs(j["capacity"].get<double>() - 1.0) < 2e-3);
  std::remove(path.c_str());
}

TEST_CASE("precision from the environment") {
  Output o = cli("toeplitz --count 10", "MAGSPEC_BITS=128");
  REQUIRE(o.status == 0);
  CHECK(json::parse(o.text)["diagnostics"]["bits"] == 128);
  CHECK(json::parse(cli("toeplitz --count 10 --bits 200", "MAGSPEC_BITS=128").text)["diagnostics"]["bits"] == 200);
  Output bad = cli("toeplitz --count 10", "MAGSPEC_BITS=12");
  CHECK(bad.status == 2);
}

TEST_CASE("failures produce machine-readable records") {
  Output o = cli("capacity --shape blob --b x --digits 0");
  CHECK(o.status == 2);
  json j = json::parse(o.text);
  CHECK(j["error"]["type"] == "config");
  CHECK(j["error"]["violations"].size() == 3);

  Output h = cli("cluster --shape disk -N 32 -M 5 --gamma 1");
  CHECK(h.status == 3);
  CHECK(json::parse(h.text)["error"]["type"] == "hypothesis");

  Output unknown = cli("capacity --no-such-flag");
  CHECK(unknown.status == 2);
  CHECK(json::parse(unknown.text)["error"]["type"] == "config");

  CHECK(cli("verify nowhere").status == 2);
}

TEST_CASE("cluster CSV and gamma sweep") {
  Output o = cli("cluster --shape disk -N 64 -M 12 --count 8 --format csv");
  REQUIRE(o.status == 0);
  CsvTable t = parse_csv(o.text);
  CHECK(t.header == std::vector<std::string>{"j", "t_j", "ell_j", "rho_j"});
  CHECK(t.rows.size() == 8);
  for (const auto& row : t.rows) {
    CHECK(std::stod(row[1]) > 0.0);
    CHECK(std::stod(row[2]) < 1.0);
  }
  Output s = cli("cluster --shape disk -N 64 -M 12 --gammas 5,10");
  REQUIRE(s.status == 0);
  json j = json::parse(s.text);
  CHECK(j["runs"].size() == 2);
  CHECK(j["runs"][1]["gamma"] == 10.0);
  CHECK(j["runs"][0]["diagnostics"]["clamped"] == 0);
  CHECK(j["sweep"]["consistent"] == true);
}

TEST_CASE("boundary-ops checks") {
  Output o = cli("boundary-ops --shape ellipse --semi-a 1.5 --semi-b 0.5 -N 64 --check-jump --check-green");
  REQUIRE(o.status == 0);
  json j = json::parse(o.text);
  CHECK(j["diagnostics"]["asymmetry_A"].get<double>() < 1e-10);
  CHECK(j["diagnostics"]["hypothesis_satisfied"] == true);
  CHECK(j["green"]["exterior"].get<double>() < 1e-3);
  CHECK(j.contains("jump"));
}

TEST_CASE("kernel value and series cross-check") {
  Output o = cli("kernel --x 1,0 --y 0,0 --series-terms 4000");
  REQUIRE(o.status == 0);
  json j = json::parse(o.text);
  CHECK(j["diagnostics"]["series_difference"].get<double>() < 1e-8);
  CHECK(std::stod(j["value"]["re"].get<std::string>()) > 0.0);
}
