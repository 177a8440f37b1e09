#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string outfile = "cli_test_out.tmp";
    std::string cmd = std::string(FGLNH_CLI_PATH) + " " + args + " > " + outfile + " 2>&1";
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(outfile);
    std::stringstream buf;
    buf << in.rdbuf();
    r.out = buf.str();
    std::remove(outfile.c_str());
    return r;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

}  // namespace

TEST_CASE("present prints the closed forms and exits 0") {
    RunResult r = run("present --fgl multiplicative --trunc 8");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("s(x1,x2) = β") != std::string::npos);
    CHECK(r.out.find("t(x1,x2) = 1 - β*x2") != std::string::npos);
}

TEST_CASE("json output is byte-identical across runs") {
    RunResult a = run("present --fgl chi --trunc 8 --format json");
    RunResult b = run("present --fgl chi --trunc 8 --format json");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("\"l\": \"α\"") != std::string::npos);
}

TEST_CASE("latex output renders greek parameters") {
    RunResult r = run("present --fgl multiplicative --trunc 8 --format latex");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\\beta") != std::string::npos);
}

TEST_CASE("verify exits 0 on every catalog law") {
    for (const std::string name : {"additive", "multiplicative", "chi", "euler"}) {
        RunResult r = run("verify --fgl " + name + " --trunc 8");
        INFO(name);
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("ALL RELATIONS PASS") != std::string::npos);
    }
}

TEST_CASE("genus tables are exact rationals") {
    RunResult r = run("genus --fgl multiplicative -N 4");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("rho(CP^3) = β^3") != std::string::npos);
    CHECK(r.out.find('.') == std::string::npos);  // never floating point
}

TEST_CASE("obstruction reports the braid verdict") {
    RunResult holds = run("obstruction --fgl additive --trunc 8");
    CHECK(holds.exit_code == 0);
    CHECK(holds.out.find("BRAID HOLDS") != std::string::npos);
    RunResult fails = run("obstruction --fgl chi --trunc 8");
    CHECK(fails.exit_code == 0);
    CHECK(fails.out.find("BRAID FAILS") != std::string::npos);
}

TEST_CASE("perturb prints first-order deltas") {
    RunResult r = run("perturb --fgl additive --f1 \"x*y\" --trunc 8");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("delta s = -1") != std::string::npos);
    CHECK(r.out.find("delta t = x2") != std::string::npos);
}

TEST_CASE("perturb rejects a unit-breaking direction with exit 2") {
    RunResult r = run("perturb --fgl additive --f1 \"x^2\" --trunc 8");
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("unit") != std::string::npos);
}

TEST_CASE("input errors exit 2") {
    CHECK(run("present --fgl unknown_name --trunc 8").exit_code == 2);
    CHECK(run("present --trunc 8").exit_code == 2);  // no FGL source
    CHECK(run("present --fgl additive --spec x.json").exit_code == 2);  // two sources
    CHECK(run("present --spec does_not_exist.json").exit_code == 2);
    CHECK(run("render -n 2 \"d5\"").exit_code == 2);
    CHECK(run("render -n 2 \"bogus\"").exit_code == 2);
}

TEST_CASE("a non-associative spec file is rejected with exit 2 naming the axiom") {
    write_file("broken_spec.tmp.json", R"({
      "name": "broken",
      "graded": false,
      "form": {"type": "polynomial", "expr": "x + y + x^2*y^2"}
    })");
    RunResult r = run("verify --spec broken_spec.tmp.json --trunc 8");
    std::remove("broken_spec.tmp.json");
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("associativity") != std::string::npos);
}

TEST_CASE("spec files load and run end to end") {
    write_file("chi_a.tmp.json", R"({
      "name": "chi_a",
      "graded": false,
      "params": [{"name": "a", "degree": 0}],
      "form": {"type": "rational", "num": "x + y + (a - 1)*x*y", "den": "1 + a*x*y"}
    })");
    RunResult r = run("genus --spec chi_a.tmp.json -N 4 --ungraded");
    std::remove("chi_a.tmp.json");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("rho(CP^2) = 1 - a + a^2") != std::string::npos);
}

TEST_CASE("FGLNH_TRUNC sets the default truncation") {
    RunResult r = run("present --fgl additive");  // default via env below
    CHECK(r.exit_code == 0);
    std::string cmd = std::string("FGLNH_TRUNC=8 ") + FGLNH_CLI_PATH +
                      " present --fgl additive > cli_env_out.tmp 2>&1";
    CHECK(std::system(cmd.c_str()) == 0);
    std::ifstream in("cli_env_out.tmp");
    std::stringstream buf;
    buf << in.rdbuf();
    std::remove("cli_env_out.tmp");
    CHECK(buf.str().find("trunc=8") != std::string::npos);
}

TEST_CASE("render draws dots and crossings") {
    RunResult dot = run("render -n 2 \"x1\"");
    CHECK(dot.exit_code == 0);
    CHECK(dot.out.find('*') != std::string::npos);
    RunResult cross = run("render -n 2 \"d1\"");
    CHECK(cross.exit_code == 0);
    CHECK(cross.out.find('X') != std::string::npos);
    RunResult stacked = run("render -n 2 \"d1 d1\"");
    CHECK(stacked.out.find("X    X") != std::string::npos);
    RunResult latex = run("render -n 2 \"d1\" --format latex");
    CHECK(latex.out.find("\\begin{xy}") != std::string::npos);
}

TEST_CASE("-o writes to a file") {
    RunResult r = run("genus --fgl additive -N 2 -o cli_file_out.tmp");
    CHECK(r.exit_code == 0);
    std::ifstream in("cli_file_out.tmp");
    std::stringstream buf;
    buf << in.rdbuf();
    std::remove("cli_file_out.tmp");
    CHECK(buf.str().find("rho(CP^0) = 1") != std::string::npos);
}
