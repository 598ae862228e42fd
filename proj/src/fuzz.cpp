#include "seplog/fuzz.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "seplog/errors.hpp"
#include "seplog/printer.hpp"
#include "seplog/subst.hpp"

namespace seplog {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

using Rng = std::mt19937_64;

std::int64_t pick(const std::vector<std::int64_t>& from, Rng& rng) {
  std::uniform_int_distribution<std::size_t> d(0, from.size() - 1);
  return from[d(rng)];
}

// Equations between a program variable and a logical variable in the
// conjunctive skeleton of P; sampling aligns the ghost with the sampled
// store value so preconditions like x = X are satisfiable at once.
void ghost_equations(const Assertion& a, const std::set<std::string>& declared,
                     std::vector<std::pair<std::string, std::string>>& out) {
  std::visit(overloaded{
                 [&](const Assertion::Pure& p) {
                   const auto* q = std::get_if<BExpr::Eq>(&p.cond->node);
                   if (!q) return;
                   const auto* l = std::get_if<AExpr::Var>(&q->lhs->node);
                   const auto* r = std::get_if<AExpr::Var>(&q->rhs->node);
                   if (!l || !r) return;
                   if (declared.count(l->name) && !declared.count(r->name))
                     out.emplace_back(l->name, r->name);
                   else if (declared.count(r->name) && !declared.count(l->name))
                     out.emplace_back(r->name, l->name);
                 },
                 [&](const Assertion::Bin& b) {
                   if (b.op != LBinOp::And) return;
                   ghost_equations(*b.lhs, declared, out);
                   ghost_equations(*b.rhs, declared, out);
                 },
                 [&](const Assertion::SepConj& s) {
                   ghost_equations(*s.lhs, declared, out);
                   ghost_equations(*s.rhs, declared, out);
                 },
                 [](const auto&) {},
             },
             a.node);
}

Store random_store(const std::vector<std::string>& vars, const DomainConfig& domain, Rng& rng) {
  Store s;
  for (const auto& v : vars) s[v] = pick(domain.values, rng);
  return s;
}

// One state satisfying the (logical-variable-free) assertion, or nullopt.
std::optional<State> one_state(const AssertionPtr& p, const Store& store,
                               const FuzzConfig& cfg, Rng& rng) {
  if (is_heap_free(*p)) {
    State st{store, {}};
    return sat(*p, st, cfg.domain) ? std::optional<State>(st) : std::nullopt;
  }
  std::vector<Heap> models = models_of(*p, store, cfg.domain);
  if (models.empty()) return std::nullopt;
  std::uniform_int_distribution<std::size_t> d(0, models.size() - 1);
  return State{store, models[d(rng)]};
}

struct GhostEnv {
  Substitution ints;
  SeqSubstitution seqs;

  AssertionPtr apply(const AssertionPtr& a) const { return subst_seq(subst(a, ints), seqs); }

  std::string to_text() const {
    std::string out;
    for (const auto& [n, e] : ints) out += (out.empty() ? "" : ", ") + n + " = " + render(e);
    for (const auto& [n, s] : seqs) out += (out.empty() ? "" : ", ") + n + " = " + render(s);
    return out;
  }
};

GhostEnv sample_ghosts(const Assertion& pre, const Assertion& post,
                       const std::vector<std::string>& declared, const Store& store,
                       const FuzzConfig& cfg, Rng& rng) {
  std::set<std::string> declared_set(declared.begin(), declared.end());
  std::set<std::string> iv, sv;
  free_vars(pre, iv, sv);
  free_vars(post, iv, sv);
  for (const auto& v : declared) iv.erase(v);

  std::vector<std::pair<std::string, std::string>> eqs;
  ghost_equations(pre, declared_set, eqs);

  GhostEnv env;
  std::set<std::string> bound;
  for (const auto& [prog, ghost] : eqs) {
    if (!iv.count(ghost) || bound.count(ghost)) continue;
    env.ints.emplace_back(ghost, lit(store.at(prog)));
    bound.insert(ghost);
  }
  for (const auto& g : iv) {
    if (bound.count(g)) continue;
    env.ints.emplace_back(g, lit(pick(cfg.domain.values, rng)));
  }
  for (const auto& g : sv) {
    std::uniform_int_distribution<std::size_t> len(0, cfg.max_ghost_seq_len);
    std::vector<std::int64_t> values(len(rng));
    for (auto& v : values) v = pick(cfg.domain.values, rng);
    env.seqs.emplace_back(g, seq_literal(values));
  }
  return env;
}

}  // namespace

std::vector<State> sample_states(const AssertionPtr& p,
                                 const std::vector<std::string>& declared_vars,
                                 const FuzzConfig& cfg) {
  Rng rng(cfg.seed);
  std::set<State> seen;
  std::vector<State> out;
  std::size_t attempts = std::max<std::size_t>(cfg.samples * 50, 2000);
  for (std::size_t k = 0; k < attempts && out.size() < cfg.samples; ++k) {
    Store store = random_store(declared_vars, cfg.domain, rng);
    auto st = one_state(p, store, cfg, rng);
    if (!st) continue;
    if (seen.insert(*st).second) out.push_back(*st);
  }
  return out;
}

std::string FuzzReport::to_text() const {
  std::ostringstream out;
  out << "seed " << seed << ", " << samples_run << " of " << requested << " samples run";
  if (out_of_fuel) out << ", " << out_of_fuel << " ran out of fuel";
  out << "\n";
  for (const auto& f : failures) {
    out << "sample " << f.sample_index << " "
        << (f.kind == FuzzFailure::Kind::Abort ? "aborted" : "violated the postcondition") << ": "
        << f.detail << "\n";
    out << "  replay: --store " << store_literal(f.initial.store);
    if (!f.initial.heap.empty()) out << " --heap " << heap_literal(f.initial.heap);
    if (!f.ghosts.empty()) out << "   (with " << f.ghosts << ")";
    out << "\n";
  }
  out << (failures.empty() ? "no failures" : std::to_string(failures.size()) + " failure(s)")
      << "\n";
  return out.str();
}

FuzzReport fuzz_triple(const AssertionPtr& pre, const Block& body, const AssertionPtr& post,
                       const std::vector<std::string>& declared_vars, const FuzzConfig& cfg) {
  FuzzReport report;
  report.seed = cfg.seed;
  report.requested = cfg.samples;
  Rng rng(cfg.seed);
  std::set<std::pair<std::string, State>, std::less<>> seen;

  std::size_t attempts = std::max<std::size_t>(cfg.samples * 50, 2000);
  for (std::size_t k = 0; k < attempts && report.samples_run < cfg.samples; ++k) {
    Store store = random_store(declared_vars, cfg.domain, rng);
    GhostEnv env = sample_ghosts(*pre, *post, declared_vars, store, cfg, rng);
    AssertionPtr pre_inst = env.apply(pre);
    auto st = one_state(pre_inst, store, cfg, rng);
    if (!st) continue;
    if (!seen.insert(std::make_pair(env.to_text(), *st)).second) continue;

    std::size_t index = report.samples_run++;
    ExecResult run = exec(body, *st, ExecConfig{cfg.fuel, cfg.alloc_base});
    if (run.out_of_fuel()) {
      ++report.out_of_fuel;
      continue;
    }
    if (run.aborted()) {
      report.failures.push_back({FuzzFailure::Kind::Abort, index, *st, env.to_text(),
                                 "abort at " + run.abort_command + " (address " +
                                     std::to_string(run.abort_address) + ")"});
      continue;
    }
    AssertionPtr post_inst = env.apply(post);
    bool holds = sat(*post_inst, run.final_state,
                     DomainConfig::defaults_for(run.final_state, *post_inst));
    if (!holds) {
      report.failures.push_back({FuzzFailure::Kind::PostFailed, index, *st, env.to_text(),
                                 "final state " + state_line(run.final_state) +
                                     " does not satisfy { " + render(post_inst) + " }"});
    }
  }
  return report;
}

}  // namespace seplog
