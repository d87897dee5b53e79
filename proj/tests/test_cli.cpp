#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#include "doctest.h"

// Drives the built command-line tool end to end: every subcommand, the
// documented exit-code contract (0 affirmative, 1 negative, 2 usage, 3
// resource), and byte-level determinism of the reports.

namespace {

struct cli_result {
  int code = -1;
  std::string out;  // stdout and stderr interleaved
};

cli_result run_cli(const std::string& args) {
  cli_result r;
  std::string cmd = std::string(LPFD_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 512> buf;
  while (std::fgets(buf.data(), buf.size(), pipe) != nullptr) r.out += buf.data();
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string fixture(const std::string& name) {
  return std::string(LPFD_FIXTURE_DIR) + "/" + name;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("parse renders the formula and its connective-only form") {
  cli_result r = run_cli("parse 'p(x) -> D{x}y' --vocab 'vars=x,y; preds=p/1'");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "p(x) -> D{x}y"));
  CHECK(contains(r.out, "~(p(x) & ~D{x}y)"));
  CHECK(contains(r.out, "modal depth: 0"));
}

TEST_CASE("parse reports syntax errors with the offset and exits 2") {
  cli_result r = run_cli("parse 'p(x) & & p(y)' --vocab 'vars=x,y; preds=p/1'");
  CHECK(r.code == 2);
  CHECK(contains(r.out, "offset 7"));
}

TEST_CASE("check answers with the truth value in the exit code") {
  cli_result t = run_cli("check " + fixture("example2.json") +
                         " --point a4p --formula 'Na{1,2}'");
  CHECK(t.code == 0);
  CHECK(contains(t.out, "true"));
  cli_result f = run_cli("check " + fixture("example2.json") +
                         " --point a --formula 'Na{1,2}'");
  CHECK(f.code == 1);
  CHECK(contains(f.out, "false"));
  cli_result missing = run_cli("check " + fixture("example2.json") +
                               " --point nobody --formula 'Na{1,2}'");
  CHECK(missing.code == 2);
}

TEST_CASE("validate accepts the fixtures and lists reducedness violations") {
  cli_result r = run_cli("validate " + fixture("example1.json"));
  CHECK(r.code == 0);
  CHECK(contains(r.out, "kind: cpd"));
  CHECK(contains(r.out, "a4p a6p app"));
  CHECK(contains(r.out, "valid"));
}

TEST_CASE("valid distinguishes model validities from refutable formulas") {
  cli_result v = run_cli("valid " + fixture("example2.json") +
                         " --formula 'D{1,2}1'");
  CHECK(v.code == 0);
  cli_result f = run_cli("valid " + fixture("example2.json") +
                         " --formula 'Na{1,2}'");
  CHECK(f.code == 1);
  CHECK(contains(f.out, "fails at a"));
}

TEST_CASE("effectivity reports the extension and the forcing verdict") {
  cli_result r = run_cli("effectivity " + fixture("example2.json") +
                         " --coalition '{1,2}' --formula 'p{1,2}'");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "a4p a5p a6p a7p"));
  CHECK(contains(r.out, "effective"));
}

TEST_CASE("sat maps verdicts onto exit codes") {
  cli_result sat = run_cli("sat --formula '~D{}y' --vocab 'vars=x,y'");
  CHECK(sat.code == 0);
  CHECK(contains(sat.out, "sat"));
  cli_result unsat = run_cli("sat --formula 'D{x}y & ~D{x}y' --vocab 'vars=x,y'");
  CHECK(unsat.code == 1);
  CHECK(contains(unsat.out, "unsat"));
  cli_result res = run_cli(
      "sat --formula 'p(x)' --vocab 'vars=x; preds=p/1' --max-closure 2");
  CHECK(res.code == 3);
  CHECK(contains(res.out, "resource"));
}

TEST_CASE("sat certificates round-trip through validate and check") {
  std::string cert = "/tmp/lpfd_cli_test_cert.json";
  std::remove(cert.c_str());
  cli_result sat = run_cli("sat --formula '~D{}y' --vocab 'vars=x,y'"
                           " --emit-certificate " +
                           cert);
  CHECK(sat.code == 0);
  CHECK(contains(sat.out, "certificate written"));
  cli_result val = run_cli("validate " + cert);
  CHECK(val.code == 0);
  CHECK(contains(val.out, "kind: rpd"));
  std::remove(cert.c_str());
}

TEST_CASE("convert produces a loadable assignment model") {
  std::string out = "/tmp/lpfd_cli_test_pd.json";
  std::remove(out.c_str());
  cli_result conv =
      run_cli("convert " + fixture("example2.json") + " --to pd -o " + out);
  CHECK(conv.code == 0);
  cli_result val = run_cli("validate " + out);
  CHECK(val.code == 0);
  CHECK(contains(val.out, "kind: pd"));
  std::remove(out.c_str());
}

TEST_CASE("game analyze prints the full report and succeeds on the fixture") {
  cli_result r = run_cli("game analyze " + fixture("example2.json"));
  CHECK(r.code == 0);
  CHECK(contains(r.out, "nash {1,2}: a3p a4p a5p a6p a7p"));
  CHECK(contains(r.out, "core: a4p"));
  CHECK(contains(r.out, "result: ok"));
}

TEST_CASE("reports are byte-identical across repeated runs") {
  std::string args = "game analyze " + fixture("example2.json") +
                     " --report json";
  cli_result a = run_cli(args);
  cli_result b = run_cli(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(contains(a.out, "\"core\""));
}

TEST_CASE("fuzz-axioms runs both systems clean on a small budget") {
  cli_result l = run_cli("fuzz-axioms --system lpfd --trials 2 --seed 7");
  CHECK(l.code == 0);
  CHECK(contains(l.out, "no counterexamples"));
  cli_result h =
      run_cli("fuzz-axioms --system hlpfd --trials 2 --seed 7 --report json");
  CHECK(h.code == 0);
  CHECK(contains(h.out, "\"counterexamples\": []"));
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("").code == 2);
  CHECK(run_cli("frobnicate").code == 2);
  CHECK(run_cli("check --formula 'top'").code == 2);  // missing model
  CHECK(run_cli("validate /nonexistent/path.json").code == 2);
  CHECK(run_cli("sat --formula 'p(x' --vocab 'vars=x; preds=p/1'").code == 2);
}

}  // TEST_SUITE
