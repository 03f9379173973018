#include "doctest.h"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ade/cli.hpp"
#include "ade/textio.hpp"
#include "golden_cases.hpp"
#include "helpers.hpp"

using namespace ade;
using testing_util::poly;
using testing_util::random_series;

namespace {
const RationalField Q;
const PrimeField F3(3), F7(7), F11(11);

struct Run {
  int code;
  std::string out;
};

Run cli(std::vector<std::string> args) {
  for (auto& a : args)
    if (auto at = a.find("@DIR@"); at != std::string::npos) a.replace(at, 5, ADE_GOLDEN_DIR);
  std::ostringstream out;
  int code = run_cli(args, out);
  return {code, out.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json js(const Run& r) { return nlohmann::json::parse(r.out); }
}  // namespace

TEST_CASE("parse_polynomial: grammar examples") {
  std::vector<std::string> xy{"x", "y"};
  CHECK(parse_polynomial<Rational>("x^2 + y^3", xy, Q, 8).series == poly(Q, 2, 8, {{1, {2}}, {1, {0, 3}}}));
  CHECK(parse_polynomial<Rational>("x*y*(x+y)", xy, Q, 8).series == poly(Q, 2, 8, {{1, {2, 1}}, {1, {1, 2}}}));
  CHECK(parse_polynomial<Fp>("1/2 x^2", {"x"}, F3, 8).series == poly(F3, 1, 8, {{2, {2}}}));
  CHECK(parse_polynomial<Rational>("  -x ^ 2-3/4 y^3 ", xy, Q, 8).series ==
        poly(Q, 2, 8, {{-1, {2}}, {-3, 4, {0, 3}}}));
  CHECK(parse_polynomial<Rational>("(x-y)^2", xy, Q, 8).series ==
        poly(Q, 2, 8, {{1, {2}}, {-2, {1, 1}}, {1, {0, 2}}}));
  CHECK(parse_polynomial<Rational>("2x y", xy, Q, 8).series == poly(Q, 2, 8, {{2, {1, 1}}}));
  CHECK(parse_polynomial<Fp>("7*x + x^2", {"x"}, F7, 8).series == poly(F7, 1, 8, {{1, {2}}}));
  CHECK(parse_polynomial<Rational>("x - x", xy, Q, 8).series.is_zero());

  auto p = parse_polynomial<Rational>("x^2 + y^5 + x^7", xy, Q, 4);
  CHECK(p.dropped_terms == 2);
  CHECK(p.series == poly(Q, 2, 4, {{1, {2}}}));

  CHECK(detect_variables("y1*x + x^2 + b_2") == std::vector<std::string>{"b_2", "x", "y1"});
  CHECK(parse_variable_list(" x, y ,z") == std::vector<std::string>{"x", "y", "z"});
}

TEST_CASE("parse_polynomial: errors carry codes and positions") {
  auto code_at = [](const std::string& text, std::vector<std::string> vars, ErrorCode code, std::size_t at) {
    try {
      parse_polynomial<Fp>(text, vars, F3, 8);
      FAIL("no error for " << text);
    } catch (const Error& e) {
      CHECK(e.code() == code);
      REQUIRE(e.location());
      CHECK(*e.location() == at);
    }
  };
  code_at("x^2+", {"x"}, ErrorCode::SyntaxError, 4);
  code_at("x^^2", {"x"}, ErrorCode::SyntaxError, 2);
  code_at("(x+1", {"x"}, ErrorCode::SyntaxError, 4);
  code_at("x + z", {"x"}, ErrorCode::UnknownVariable, 4);
  code_at("x + 1/6", {"x"}, ErrorCode::DivisionByCharacteristic, 4);
  CHECK_THROWS_AS(parse_polynomial<Fp>("", {"x"}, F3, 8), Error);
  CHECK_THROWS_AS(parse_variable_list("x,x"), Error);
  CHECK_THROWS_AS(parse_variable_list("x,2y"), Error);
}

TEST_CASE("render: fixed outputs") {
  std::vector<std::string> xy{"x", "y"};
  CHECK(render(poly(Q, 2, 8, {{1, {2}}, {1, {0, 3}}}), xy) == "x^2 + y^3");
  CHECK(render(poly(Q, 2, 8, {{-1, 2, {1, 1}}, {3, {0, 2}}, {-1, {3}}}), xy) == "3*y^2 - 1/2*x*y - x^3");
  CHECK(render(poly(F7, 2, 8, {{6, {2}}, {5, {}}}), xy) == "-2 - x^2");
  CHECK(render(poly(Q, 2, 8, {}), xy) == "0");
  CHECK(render(poly(Q, 2, 8, {{1, {}}}), xy) == "1");
}

TEST_CASE("parse/render round trip on random series") {
  std::mt19937_64 rng(9);
  std::vector<std::string> vars{"x", "y", "z", "w1"};
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + trial % 4;
    std::vector<std::string> v(vars.begin(), vars.begin() + n);
    auto f = random_series(rng, Q, n, 10, 0, 8);
    CHECK(parse_polynomial<Rational>(render(f, v), v, Q, 10).series == f);
    auto g = random_series(rng, F11, n, 10, 0, 8);
    CHECK(parse_polynomial<Fp>(render(g, v), v, F11, 10).series == g);
  }
}

TEST_CASE("cli: golden files") {
  for (const auto& c : golden_cases()) {
    CAPTURE(c.name);
    Run r = cli(c.args);
    CHECK(r.code == c.exit_code);
    CHECK(r.out == slurp(std::string(ADE_GOLDEN_DIR) + "/" + c.name + ".out"));
  }
}

TEST_CASE("cli: spec examples and exit codes") {
  auto a2 = cli({"classify", "x^2+y^3", "--field", "fp:7", "--precision", "12"});
  CHECK(a2.code == 0);
  CHECK(js(a2)["verdict"] == "A2");
  CHECK(js(a2)["schema"] == "ade-cert/1");
  auto e61 = cli({"classify", "x^3+y^4+x^2*y^2", "--field", "fp:3"});
  CHECK(js(e61)["verdict"] == "E6_1");
  auto bad = cli({"verify", "--cert", "@DIR@/cert_d6_tampered.json", "--field", "fp:13"});
  CHECK(bad.code == 1);
  CHECK(js(bad)["error"] == "certificate mismatch");

  CHECK(cli({"classify", "x*y*(x+y)"}).code == 2);
  CHECK(cli({"classify", "x*y*(x+y)", "--field", "fp:5"}).code == 0);
  CHECK(cli({"split", "x^2+y^3"}).code == 0);
  CHECK(cli({"split", "x^2+"}).code == 1);
  CHECK(cli({"mf-build", "--verdict", "E7"}).code == 0);
  CHECK(cli({"mf-build", "--verdict", "Undetermined"}).code == 1);
  CHECK(cli({"mf-build"}).code == 1);
  CHECK(cli({"mf-sharp", "--mf", "@DIR@/mf_a2.json", "--var", "y"}).code == 1);  // b already occurs
  CHECK(cli({"mf-flat", "--mf", "@DIR@/mf_a2.json", "--var", "q"}).code == 1);
  CHECK(cli({"mf-verify", "--mf", "@DIR@/missing.json"}).code == 1);
  CHECK(cli({"classify", "x^2", "--format", "xml"}).code == 1);
  CHECK(cli({"frobnicate"}).code == 1);
  CHECK(cli({"classify", "--help"}).code == 0);
}

TEST_CASE("cli: classify output re-verifies through verify") {
  std::mt19937_64 rng(4);
  for (std::string text : {"x^2*y+y^4+z^2+x*z", "x^3+y^5+x^2*y^2", "x^2+y^2+z^5", "x^3+x*y^3+y^5"}) {
    auto r = cli({"classify", text, "--field", "fp:13", "--precision", "10"});
    REQUIRE(r.code == 0);
    std::string path = std::string(ADE_SCRATCH_DIR) + "/tmp_cert.json";
    std::ofstream(path) << r.out;
    CHECK(cli({"verify", "--cert", path, "--field", "fp:13"}).code == 0);
    std::remove(path.c_str());
  }
}

TEST_CASE("cli: determinism and batch order") {
  std::vector<std::string> job{"classify", "x^3+y^4+x^2*y^5+3*x*y^3", "--field", "fp:7", "--seed", "5"};
  CHECK(cli(job).out == cli(job).out);

  auto batch = cli({"classify", "--batch", "@DIR@/batch_input.txt", "--field", "fp:7", "--precision", "10"});
  CHECK(batch.out == cli({"classify", "--batch", "@DIR@/batch_input.txt", "--field", "fp:7", "--precision", "10"}).out);
  std::istringstream lines(slurp(std::string(ADE_GOLDEN_DIR) + "/batch_input.txt"));
  std::istringstream outs(batch.out);
  std::string line, got;
  int count = 0;
  while (std::getline(lines, line)) {
    REQUIRE(std::getline(outs, got));
    auto single = nlohmann::ordered_json::parse(cli({"classify", line, "--field", "fp:7", "--precision", "10"}).out);
    if (single.contains("error")) single["input"] = line;
    CHECK(single.dump() == got);
    ++count;
  }
  CHECK(count == 8);
  CHECK_FALSE(std::getline(outs, got));
}
