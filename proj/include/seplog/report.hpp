#pragma once

#include <string>

#include "seplog/fuzz.hpp"
#include "seplog/semantics.hpp"
#include "seplog/symbolic.hpp"
#include "seplog/verifier.hpp"

namespace seplog {

// Machine-readable reports (schema documented in docs/report-schema.md)
// and the human-readable forms the CLI prints. Both renderings carry the
// same verdicts.

std::string check_report_json(const CheckReport& r, const std::string& file);
std::string run_report_json(const ExecResult& r, const State& initial);
std::string fuzz_report_json(const FuzzReport& r, const std::string& file);
std::string sat_report_json(bool verdict, const std::string& assertion);
std::string entail_report_json(const EntailResult& r, const std::string& query);

std::string obligation_line(const ObligationResult& r);
std::string check_summary_line(const CheckReport& r);
/// Trace serialization: one "store {...} heap {...}" line per step, the
/// initial state first, then the outcome line.
std::string run_text(const ExecResult& r, const State& initial, bool with_trace);

}  // namespace seplog
