#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "nucad/frontend.hpp"
#include "nucad/oracle.hpp"

using namespace nucad;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string input_file(const std::string& name, const std::string& text) {
  auto p = std::filesystem::temp_directory_path() / ("nucad_cli_" + name + ".smt2");
  std::ofstream(p) << text;
  return p.string();
}

const char* kExample2 = R"((declare-const x1 Real)(declare-const x2 Real)
(assert (and (<= (- (* (- 0.006) (- x1 2) (+ x1 2) (- x1 3) (+ x1 3) (- x1 4) (+ x1 4)) x2) 0)
             (> (- (+ (* (+ x1 2.5) (+ x1 2.5)) (* (- x2 1.5) (- x2 1.5))) 0.25) 0)
             (>= (- (+ (* (- x1 2.5) (- x1 2.5)) (* (- x2 1.5) (- x2 1.5))) 0.25) 0)
             (<= x2 2.5) (<= x1 0)))
(check-sat))";

const char* kDisc = "(declare-const x Real)(assert (exists ((y Real)) (< (+ (* x x) (* y y)) 1)))(eliminate-quantifiers)";

}  // namespace

TEST_CASE("solve prints a witness that satisfies the input") {
  std::string f = input_file("e2", kExample2);
  Run r = cli({"solve", f});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string first;
  std::getline(lines, first);
  CHECK(first == "sat");
  std::vector<Rational> w;
  for (std::string line; std::getline(lines, line);) {
    auto eq = line.find(" = ");
    REQUIRE(eq != std::string::npos);
    w.emplace_back(line.substr(eq + 3));
    w.back().canonicalize();
  }
  REQUIRE(w.size() == 2);
  CHECK(holds(parse_smtlib(kExample2).assertion, w));

  Run u = cli({"solve", input_file("unsat", "(declare-const x Real)(assert (< (* x x) (- 1)))")});
  CHECK(u.code == 0);
  CHECK(u.out == "unsat\n");
}

TEST_CASE("decide and qe") {
  Run d = cli({"decide", input_file("sqrt", "(assert (forall ((x Real)) (exists ((y Real)) (= (* y y) x))))")});
  CHECK(d.code == 0);
  CHECK(d.out == "false\n");
  Run c = cli({"decide", "--split", "classic",
               input_file("cube", "(assert (forall ((x Real)) (exists ((y Real)) (= (* y y y) x))))")});
  CHECK(c.out == "true\n");

  std::string disc = input_file("disc", kDisc);
  Run q = cli({"qe", disc});
  CHECK(q.code == 0);
  CHECK(q.out == "x + 1 > 0 and x - 1 < 0\n");
  // the SMT-LIB form parses back to the same set
  Run s = cli({"qe", "--smtlib", disc});
  auto back = parse_smtlib("(declare-const x Real)(assert " + s.out + ")");
  std::mt19937_64 rng(kOracleSeed);
  for (int k = 0; k < 1000; ++k) {
    Rational x(static_cast<long>(rng() % 6001) - 3000, 1000);
    CHECK(holds(back.assertion, std::vector<Rational>{x}) == (x > -1 && x < 1));
  }
  Run t = cli({"qe", "--tree", "--tree-json", disc});
  CHECK(t.out.find("\"children\"") != std::string::npos);
  CHECK(t.out.find("TRUE") != std::string::npos);
}

TEST_CASE("stats are deterministic") {
  std::string disc = input_file("disc", kDisc);
  Run a = cli({"stats", disc}), b = cli({"stats", disc});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("atoms,cells,leaves,symbolic_intervals,sections,aborted\n", 0) == 0);
  Run t = cli({"stats", "--times", "--format", "text", disc});
  CHECK(t.out.find("total time") != std::string::npos);
  Run q1 = cli({"qe", input_file("e2qe", kExample2)}), q2 = cli({"qe", input_file("e2qe", kExample2)});
  CHECK(q1.out == q2.out);
  Run par = cli({"qe", "--threads", "4", input_file("e2qe", kExample2)});
  CHECK(par.out == q1.out);
}

TEST_CASE("plot") {
  auto out = std::filesystem::temp_directory_path() / "nucad_cli_plot.svg";
  std::filesystem::remove(out);
  Run r = cli({"plot", "--samples", "--resolution", "120", "-o", out.string(), input_file("e2", kExample2)});
  CHECK(r.code == 0);
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str().rfind("<svg", 0) == 0);
  Run s = cli({"plot", input_file("sqrt", "(assert (forall ((x Real)) (exists ((y Real)) (= (* y y) x))))")});
  CHECK(s.code == 0);
  CHECK(s.out.find("</svg>") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"--help"}).code == kExitOk);
  CHECK(cli({"solve"}).code == kExitUsage);
  CHECK(cli({"solve", "--split", "sideways", input_file("e2", kExample2)}).code == kExitUsage);
  CHECK(cli({"solve", "/nonexistent/input.smt2"}).code == kExitUsage);
  CHECK(cli({"solve", input_file("bad", "(assert (> x 0))")}).code == kExitUsage);
  CHECK(cli({"decide", input_file("e2", kExample2)}).code == kExitUsage);
  CHECK(cli({"solve", input_file("sin", "(declare-const x Real)(assert (> (sin x) 0))")}).code == kExitUnsupported);
  CHECK(cli({"plot", input_file("three", "(declare-const a Real)(declare-const b Real)(declare-const c Real)"
                                         "(assert (> (+ a b c) 0))")})
            .code == kExitUnsupported);
  Run b = cli({"stats", "--budget", "3", input_file("e2qe", kExample2)});
  CHECK(b.code == kExitBudget);
  CHECK(b.out.find(",true") != std::string::npos);
  CHECK(cli({"qe", "--budget", "2", input_file("e2", kExample2)}).code == kExitBudget);
}

TEST_CASE("standard input") {
  std::istringstream in("(declare-const x Real)(assert (> (* x x) 2))(check-sat)");
  auto* old = std::cin.rdbuf(in.rdbuf());
  Run r = cli({"solve", "-"});
  std::cin.rdbuf(old);
  CHECK(r.code == 0);
  CHECK(r.out.rfind("sat\nx = ", 0) == 0);
}
