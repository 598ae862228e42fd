#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "seplog/errors.hpp"
#include "seplog/fuzz.hpp"
#include "seplog/parser.hpp"
#include "seplog/printer.hpp"
#include "seplog/report.hpp"
#include "seplog/semantics.hpp"
#include "seplog/symbolic.hpp"
#include "seplog/verifier.hpp"

namespace {

// 0 success/proven, 1 verification or fuzz failure (a finding, including
// abort during run), 2 usage/parse error, 3 resource limit (fuel, search
// depth, domain/fragment).
enum ExitStatus : int { kOk = 0, kFinding = 1, kUsage = 2, kLimit = 3 };

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw seplog::Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int default_depth() {
  if (const char* env = std::getenv("SEPLOG_DEPTH")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring invalid SEPLOG_DEPTH value '" << env << "'\n";
    }
  }
  return 64;
}

std::vector<std::int64_t> parse_range(const std::string& text, const std::string& what) {
  auto dots = text.find("..");
  if (dots == std::string::npos)
    throw seplog::Error("invalid " + what + " range '" + text + "' (expected LO..HI)");
  std::int64_t lo = std::stoll(text.substr(0, dots));
  std::int64_t hi = std::stoll(text.substr(dots + 2));
  if (hi < lo || hi - lo > 4096) throw seplog::Error("unreasonable " + what + " range " + text);
  std::vector<std::int64_t> out;
  for (std::int64_t v = lo; v <= hi; ++v) out.push_back(v);
  return out;
}

int cmd_check(const std::string& file, bool json, int depth) {
  seplog::Program prog = seplog::parse_program(slurp(file));
  seplog::CheckConfig cfg;
  cfg.max_depth = depth;
  if (!json)
    cfg.on_result = [](const seplog::ObligationResult& r) {
      std::cout << seplog::obligation_line(r) << "\n";
    };
  seplog::CheckReport report = seplog::check_outline(prog, cfg);
  if (json)
    std::cout << seplog::check_report_json(report, file) << "\n";
  else
    std::cout << seplog::check_summary_line(report) << "\n";
  if (report.all_proven()) return kOk;
  return report.resource_limited() ? kLimit : kFinding;
}

int cmd_run(const std::string& file, const std::string& store_lit, const std::string& heap_lit,
            std::int64_t fuel, std::int64_t alloc_base, bool trace, bool json) {
  seplog::Program prog = seplog::parse_program(slurp(file));
  seplog::State initial = seplog::initial_state(prog, seplog::parse_store_literal(store_lit));
  initial.heap = seplog::parse_heap_literal(heap_lit);
  seplog::ExecResult result = seplog::exec(prog.body, initial, {fuel, alloc_base});
  if (json)
    std::cout << seplog::run_report_json(result, initial) << "\n";
  else
    std::cout << seplog::run_text(result, initial, trace);
  switch (result.kind) {
    case seplog::ExecResult::Kind::Final: return kOk;
    case seplog::ExecResult::Kind::Abort: return kFinding;
    case seplog::ExecResult::Kind::OutOfFuel: return kLimit;
  }
  return kUsage;
}

int cmd_sat(const std::string& assertion_text, const std::string& store_lit,
            const std::string& heap_lit, const std::string& domain, const std::string& locs,
            bool json) {
  seplog::AssertionPtr a = seplog::parse_assertion(assertion_text);
  seplog::State st{seplog::parse_store_literal(store_lit), seplog::parse_heap_literal(heap_lit)};
  seplog::DomainConfig cfg = seplog::DomainConfig::defaults_for(st, *a);
  if (!domain.empty()) cfg.values = parse_range(domain, "value");
  if (!locs.empty()) cfg.locations = parse_range(locs, "location");
  bool verdict = seplog::sat(*a, st, cfg);
  if (json)
    std::cout << seplog::sat_report_json(verdict, assertion_text) << "\n";
  else
    std::cout << (verdict ? "true" : "false") << "\n";
  return kOk;
}

int cmd_entail(const std::string& query, bool trace, int depth, bool json) {
  auto [lhs, rhs] = seplog::parse_entailment(query);
  seplog::EntailResult result =
      seplog::entails(seplog::to_symbolic(lhs), seplog::to_symbolic(rhs), {depth});
  if (json) {
    std::cout << seplog::entail_report_json(result, query) << "\n";
  } else {
    switch (result.status) {
      case seplog::EntailResult::Status::Proven:
        std::cout << "proven\n";
        if (trace) std::cout << seplog::to_string(result.trace);
        break;
      case seplog::EntailResult::Status::NotProven:
        std::cout << "not proven: " << result.reason << "\n";
        break;
      case seplog::EntailResult::Status::DepthExceeded:
        std::cout << "depth exceeded: " << result.reason << "\n";
        break;
    }
  }
  switch (result.status) {
    case seplog::EntailResult::Status::Proven: return kOk;
    case seplog::EntailResult::Status::NotProven: return kFinding;
    case seplog::EntailResult::Status::DepthExceeded: return kLimit;
  }
  return kUsage;
}

int cmd_fuzz(const std::string& file, std::size_t samples, std::uint64_t seed, std::int64_t fuel,
             std::int64_t alloc_base, const std::string& domain, const std::string& locs,
             std::size_t max_seq_len, bool json) {
  seplog::Program prog = seplog::parse_program(slurp(file));
  seplog::FuzzConfig cfg;
  cfg.samples = samples;
  cfg.seed = seed;
  cfg.fuel = fuel;
  cfg.alloc_base = alloc_base;
  cfg.max_ghost_seq_len = max_seq_len;
  if (!domain.empty()) cfg.domain.values = parse_range(domain, "value");
  if (!locs.empty()) cfg.domain.locations = parse_range(locs, "location");
  seplog::FuzzReport report =
      seplog::fuzz_triple(prog.precondition, prog.body, prog.postcondition, prog.variables, cfg);
  if (json)
    std::cout << seplog::fuzz_report_json(report, file) << "\n";
  else
    std::cout << report.to_text();
  return report.ok() ? kOk : kFinding;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seplog: execute, model-check and verify heap programs"};
  app.require_subcommand(1);

  std::string file, assertion_text, query;
  std::string store_lit, heap_lit, domain, locs;
  bool json = false, trace = false;
  int depth = default_depth();
  std::int64_t fuel = 10000, alloc_base = 1;
  std::size_t samples = 100, max_seq_len = 4;
  std::uint64_t seed = 0;

  auto* check = app.add_subcommand("check", "check a fully annotated program");
  check->add_option("file", file, "program file (.sl)")->required();
  check->add_flag("--json", json, "machine-readable report");
  check->add_option("--depth", depth, "entailment search depth bound");

  auto* run = app.add_subcommand("run", "execute a program");
  run->add_option("file", file, "program file (.sl)")->required();
  run->add_option("--store", store_lit, "initial store, e.g. x=10,y=11");
  run->add_option("--heap", heap_lit, "initial heap, e.g. 10:1,11:2");
  run->add_option("--fuel", fuel, "step budget");
  run->add_option("--alloc-base", alloc_base, "lowest address for allocation");
  run->add_flag("--trace", trace, "print one state line per step");
  run->add_flag("--json", json, "machine-readable report");

  auto* sat = app.add_subcommand("sat", "decide an assertion on a concrete state");
  sat->add_option("assertion", assertion_text, "assertion text")->required();
  sat->add_option("--store", store_lit, "store, e.g. x=10,y=11");
  sat->add_option("--heap", heap_lit, "heap, e.g. 10:1,11:2");
  sat->add_option("--domain", domain, "quantifier value domain LO..HI");
  sat->add_option("--locs", locs, "location universe LO..HI");
  sat->add_flag("--json", json, "machine-readable report");

  auto* entail = app.add_subcommand("entail", "prove an entailment 'P |- Q'");
  entail->add_option("query", query, "entailment text")->required();
  entail->add_flag("--trace", trace, "print the rule tree of a proof");
  entail->add_option("--depth", depth, "search depth bound");
  entail->add_flag("--json", json, "machine-readable report");

  auto* fuzz = app.add_subcommand("fuzz", "differential-test a program against its pre/postcondition");
  fuzz->add_option("file", file, "program file (.sl)")->required();
  fuzz->add_option("--samples", samples, "number of sampled states");
  fuzz->add_option("--seed", seed, "random seed");
  fuzz->add_option("--fuel", fuel, "step budget per run");
  fuzz->add_option("--alloc-base", alloc_base, "lowest address for allocation");
  fuzz->add_option("--values", domain, "sampling value domain LO..HI");
  fuzz->add_option("--locs", locs, "sampling location universe LO..HI");
  fuzz->add_option("--max-seq-len", max_seq_len, "length bound for sequence ghosts");
  fuzz->add_flag("--json", json, "machine-readable report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kUsage;
  }

  try {
    if (*check) return cmd_check(file, json, depth);
    if (*run) return cmd_run(file, store_lit, heap_lit, fuel, alloc_base, trace, json);
    if (*sat) return cmd_sat(assertion_text, store_lit, heap_lit, domain, locs, json);
    if (*entail) return cmd_entail(query, trace, depth, json);
    if (*fuzz)
      return cmd_fuzz(file, samples, seed, fuel, alloc_base, domain, locs, max_seq_len, json);
  } catch (const seplog::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const seplog::FragmentError& e) {
    std::cerr << e.what() << "\n";
    return kLimit;
  } catch (const seplog::LimitError& e) {
    std::cerr << e.what() << "\n";
    return kLimit;
  } catch (const seplog::EvalError& e) {
    std::cerr << e.what() << "\n";
    return e.kind == seplog::EvalError::Kind::Overflow ? kLimit : kUsage;
  } catch (const seplog::Error& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
