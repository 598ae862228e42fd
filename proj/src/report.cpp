#include "seplog/report.hpp"

#include <sstream>

#include <json.hpp>

namespace seplog {

namespace {

using nlohmann::json;

json state_json(const State& s) {
  json store = json::object();
  for (const auto& [k, v] : s.store) store[k] = v;
  json heap = json::object();
  for (const auto& [k, v] : s.heap) heap[std::to_string(k)] = v;
  return json{{"store", store}, {"heap", heap}};
}

}  // namespace

std::string check_report_json(const CheckReport& r, const std::string& file) {
  json obligations = json::array();
  for (const auto& ob : r.results) {
    json entry{{"kind", kind_name(ob.obligation.kind)},
               {"line", ob.obligation.pos.line},
               {"column", ob.obligation.pos.column},
               {"description", ob.obligation.description},
               {"verdict", verdict_name(ob.verdict)}};
    if (!ob.obligation.antecedent.empty()) entry["antecedent"] = ob.obligation.antecedent;
    if (!ob.diagnostic.empty()) entry["diagnostic"] = ob.diagnostic;
    if (ob.verdict == ObligationResult::Verdict::Proven)
      entry["trace"] = to_string(ob.trace);
    if (ob.resource_limited) entry["resource_limited"] = true;
    obligations.push_back(std::move(entry));
  }
  json out{{"schema", "seplog.check/1"},
           {"file", file},
           {"obligations", obligations},
           {"proven", r.proven_count()},
           {"total", r.results.size()},
           {"verdict", r.all_proven() ? "proven" : "not_proven"},
           {"resource_limited", r.resource_limited()}};
  return out.dump(2);
}

std::string run_report_json(const ExecResult& r, const State& initial) {
  json trace = json::array();
  for (const auto& step : r.trace) {
    json entry = state_json(step.after);
    entry["command"] = step.command;
    entry["line"] = step.pos.line;
    entry["column"] = step.pos.column;
    trace.push_back(std::move(entry));
  }
  json out{{"schema", "seplog.run/1"}, {"initial", state_json(initial)}, {"trace", trace}};
  switch (r.kind) {
    case ExecResult::Kind::Final:
      out["outcome"] = "final";
      out["final"] = state_json(r.final_state);
      break;
    case ExecResult::Kind::Abort:
      out["outcome"] = "abort";
      out["abort"] = json{{"command", r.abort_command},
                          {"address", r.abort_address},
                          {"line", r.abort_pos.line},
                          {"column", r.abort_pos.column}};
      break;
    case ExecResult::Kind::OutOfFuel:
      out["outcome"] = "out_of_fuel";
      break;
  }
  return out.dump(2);
}

std::string fuzz_report_json(const FuzzReport& r, const std::string& file) {
  json failures = json::array();
  for (const auto& f : r.failures) {
    failures.push_back(json{
        {"kind", f.kind == FuzzFailure::Kind::Abort ? "abort" : "post_failed"},
        {"sample", f.sample_index},
        {"store", store_literal(f.initial.store)},
        {"heap", heap_literal(f.initial.heap)},
        {"ghosts", f.ghosts},
        {"detail", f.detail}});
  }
  json out{{"schema", "seplog.fuzz/1"},
           {"file", file},
           {"seed", r.seed},
           {"requested", r.requested},
           {"samples_run", r.samples_run},
           {"out_of_fuel", r.out_of_fuel},
           {"failures", failures},
           {"verdict", r.ok() ? "ok" : "failed"}};
  return out.dump(2);
}

std::string sat_report_json(bool verdict, const std::string& assertion) {
  json out{{"schema", "seplog.sat/1"}, {"assertion", assertion}, {"verdict", verdict}};
  return out.dump(2);
}

std::string entail_report_json(const EntailResult& r, const std::string& query) {
  const char* status = r.status == EntailResult::Status::Proven      ? "proven"
                       : r.status == EntailResult::Status::NotProven ? "not_proven"
                                                                     : "depth_exceeded";
  json out{{"schema", "seplog.entail/1"}, {"query", query}, {"status", status}};
  if (!r.reason.empty()) out["reason"] = r.reason;
  if (r.proven()) out["trace"] = to_string(r.trace);
  return out.dump(2);
}

std::string obligation_line(const ObligationResult& r) {
  std::ostringstream out;
  out << "[" << verdict_name(r.verdict) << "] " << kind_name(r.obligation.kind) << " @"
      << r.obligation.pos.line << ":" << r.obligation.pos.column << "  "
      << r.obligation.description;
  if (!r.diagnostic.empty()) out << "\n    " << r.diagnostic;
  return out.str();
}

std::string check_summary_line(const CheckReport& r) {
  std::ostringstream out;
  if (r.all_proven())
    out << "all " << r.results.size() << " obligations proven";
  else
    out << r.proven_count() << " of " << r.results.size() << " obligations proven";
  return out.str();
}

std::string run_text(const ExecResult& r, const State& initial, bool with_trace) {
  std::ostringstream out;
  if (with_trace) {
    out << state_line(initial) << "\n";
    for (const auto& step : r.trace) out << state_line(step.after) << "\n";
  }
  switch (r.kind) {
    case ExecResult::Kind::Final:
      out << "final " << state_line(r.final_state) << "\n";
      break;
    case ExecResult::Kind::Abort:
      out << "abort at " << r.abort_command << " (address " << r.abort_address << ")\n";
      break;
    case ExecResult::Kind::OutOfFuel:
      out << "out of fuel after " << r.trace.size() << " steps\n";
      break;
  }
  return out.str();
}

}  // namespace seplog
