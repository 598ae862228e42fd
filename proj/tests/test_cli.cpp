#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

struct CliResult {
  int status = -1;
  std::string out;
};

CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
  std::string command = env_prefix + std::string(SEPLOG_CLI_PATH) + " " + args + " 2>&1";
  std::array<char, 4096> buffer{};
  CliResult result;
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::size_t n = fread(buffer.data(), 1, buffer.size(), pipe))
    result.out.append(buffer.data(), n);
  int raw = pclose(pipe);
  result.status = WEXITSTATUS(raw);
  return result;
}

std::string corpus(const std::string& name) {
  return std::string(SEPLOG_CORPUS_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("run reproduces the golden abort trace byte for byte") {
  CliResult r = run_cli("run " + corpus("abort_demo.sl") + " --alloc-base 10 --trace");
  CHECK(r.status == 1);  // abort is a finding, not a tool failure
  CHECK(r.out == slurp(std::string(SEPLOG_GOLDEN_DIR) + "/abort_demo_trace.txt"));
}

TEST_CASE("check exit statuses") {
  CHECK(run_cli("check " + corpus("swap.sl")).status == 0);
  CHECK(run_cli("check " + corpus("list_reverse.sl")).status == 0);
  CliResult broken = run_cli("check " + corpus("list_reverse_broken.sl"));
  CHECK(broken.status == 1);
  CliResult summary = run_cli("check " + corpus("list_reverse.sl"));
  CHECK(summary.out.find("all 13 obligations proven") != std::string::npos);
}

TEST_CASE("sat verdicts answer with status 0") {
  CliResult r = run_cli("sat 'x |-> 1 * x |-> 1' --store x=10 --heap 10:1");
  CHECK(r.status == 0);
  CHECK(r.out == "false\n");
  CliResult t = run_cli("sat 'x |-> 1' --store x=10 --heap 10:1");
  CHECK(t.status == 0);
  CHECK(t.out == "true\n");
}

TEST_CASE("the quantifier domain flag bounds what exists can reach") {
  CliResult narrow = run_cli("sat 'exists v . v = 9' --domain 0..5");
  CHECK(narrow.status == 0);
  CHECK(narrow.out == "false\n");
  CliResult wide = run_cli("sat 'exists v . v = 9' --domain 0..9");
  CHECK(wide.out == "true\n");
}

TEST_CASE("entail statuses distinguish proven, refuted and depth-limited") {
  CHECK(run_cli("entail 'emp |- emp'").status == 0);
  CHECK(run_cli("entail 'x |-> 1 |- x |-> 2'").status == 1);
  CliResult deep = run_cli(
      "entail 'exists alpha . i ~>[alpha] nil && !(i = nil) |- "
      "exists a, p, alpha2 . i |-> a, p * p ~>[alpha2] nil' --depth 1");
  CHECK(deep.status == 3);
  // the default depth proves it
  CliResult fine = run_cli(
      "entail 'exists alpha . i ~>[alpha] nil && !(i = nil) |- "
      "exists a, p, alpha2 . i |-> a, p * p ~>[alpha2] nil'");
  CHECK(fine.status == 0);
}

TEST_CASE("the environment variable sets the default search depth") {
  std::string query =
      "'exists alpha . i ~>[alpha] nil && !(i = nil) |- "
      "exists a, p, alpha2 . i |-> a, p * p ~>[alpha2] nil'";
  CliResult limited = run_cli("entail " + query, "SEPLOG_DEPTH=1 ");
  CHECK(limited.status == 3);
  CliResult fine = run_cli("entail " + query, "SEPLOG_DEPTH=64 ");
  CHECK(fine.status == 0);
}

TEST_CASE("a proof trace prints as an indented rule tree") {
  CliResult r = run_cli("entail 'x |-> 1 * y |-> 2 |- y |-> 2 * x |-> 1' --trace");
  CHECK(r.status == 0);
  CHECK(r.out.find("[match-cell]") != std::string::npos);
  CHECK(r.out.find("  ") != std::string::npos);
}

TEST_CASE("usage and parse problems exit with status 2") {
  CHECK(run_cli("check /nonexistent.sl").status == 2);
  CHECK(run_cli("entail 'x |->'").status == 2);
  CHECK(run_cli("frobnicate").status == 2);
  CHECK(run_cli("run " + corpus("swap.sl") + " --no-such-flag").status == 2);
}

TEST_CASE("fuel exhaustion maps to the resource status") {
  CliResult r = run_cli("run " + corpus("swap.sl") + " --fuel 1");
  CHECK(r.status == 3);
}

TEST_CASE("fuzz statuses") {
  CHECK(run_cli("fuzz " + corpus("swap.sl") + " --samples 40 --seed 3").status == 0);
  // the abort demo aborts, so fuzzing flags it
  CHECK(run_cli("fuzz " + corpus("abort_demo.sl") + " --samples 10 --seed 3").status == 1);
}

TEST_CASE("json reports parse and agree with the text verdicts") {
  CliResult check = run_cli("check " + corpus("offset_list.sl") + " --json");
  CHECK(check.status == 0);
  json c = json::parse(check.out);
  CHECK(c["schema"] == "seplog.check/1");
  CHECK(c["verdict"] == "proven");
  CHECK(c["proven"] == c["total"]);
  CHECK(c["obligations"].is_array());
  CHECK(!c["obligations"].empty());
  for (const auto& ob : c["obligations"]) {
    CHECK(ob.contains("kind"));
    CHECK(ob.contains("line"));
    CHECK(ob.contains("verdict"));
  }

  CliResult run = run_cli("run " + corpus("abort_demo.sl") + " --alloc-base 10 --json");
  CHECK(run.status == 1);
  json r = json::parse(run.out);
  CHECK(r["schema"] == "seplog.run/1");
  CHECK(r["outcome"] == "abort");
  CHECK(r["abort"]["address"] == 11);
  CHECK(r["trace"].size() == 3);
  CHECK(r["trace"][0]["store"]["x"] == 10);
  CHECK(r["trace"][0]["heap"]["10"] == 1);

  CliResult fuzz = run_cli("fuzz " + corpus("swap.sl") + " --samples 20 --seed 4 --json");
  CHECK(fuzz.status == 0);
  json f = json::parse(fuzz.out);
  CHECK(f["schema"] == "seplog.fuzz/1");
  CHECK(f["verdict"] == "ok");
  CHECK(f["seed"] == 4);

  json s = json::parse(run_cli("sat 'emp' --json").out);
  CHECK(s["schema"] == "seplog.sat/1");
  CHECK(s["verdict"] == true);

  json e = json::parse(run_cli("entail 'emp |- emp' --json").out);
  CHECK(e["schema"] == "seplog.entail/1");
  CHECK(e["status"] == "proven");
}
