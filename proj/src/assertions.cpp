#include "seplog/assertions.hpp"

#include <algorithm>

#include "seplog/errors.hpp"
#include "seplog/subst.hpp"

namespace seplog {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr std::size_t kMaxSplitCells = 20;

bool disjoint(const Heap& a, const Heap& b) {
  const Heap& small = a.size() <= b.size() ? a : b;
  const Heap& large = a.size() <= b.size() ? b : a;
  for (const auto& [k, _] : small)
    if (large.count(k)) return false;
  return true;
}

Heap heap_union(const Heap& a, const Heap& b) {
  Heap out = a;
  out.insert(b.begin(), b.end());
  return out;
}

std::vector<SeqExprPtr> sequences_over(const std::vector<std::int64_t>& values,
                                       std::size_t max_len) {
  std::vector<std::vector<std::int64_t>> all{{}};
  std::size_t first_of_prev = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::size_t end = all.size();
    for (std::size_t i = first_of_prev; i < end; ++i)
      for (std::int64_t v : values) {
        auto next = all[i];
        next.push_back(v);
        all.push_back(std::move(next));
      }
    first_of_prev = end;
  }
  std::vector<SeqExprPtr> out;
  out.reserve(all.size());
  for (const auto& vs : all) out.push_back(seq_literal(vs));
  return out;
}

bool listrep_holds(const std::vector<std::int64_t>& contents, std::int64_t head,
                   std::int64_t end, const Heap& h) {
  // The heap must be exactly the two-cell-per-node chain; a nonempty
  // segment's node address always differs from the end address.
  Heap remaining = h;
  std::int64_t cur = head;
  for (std::int64_t value : contents) {
    if (cur == end) return false;
    auto cell = remaining.find(cur);
    if (cell == remaining.end() || cell->second != value) return false;
    auto link = remaining.find(cur + 1);
    if (link == remaining.end()) return false;
    std::int64_t next = link->second;
    remaining.erase(cell);
    remaining.erase(cur + 1);
    cur = next;
  }
  return cur == end && remaining.empty();
}

struct Checker {
  const DomainConfig& cfg;

  bool check(const Assertion& a, const State& st) {
    return std::visit(
        overloaded{
            [&](const Assertion::Pure& p) { return eval_bexpr(st.store, *p.cond); },
            [&](const Assertion::Emp&) { return st.heap.empty(); },
            [&](const Assertion::PointsTo& p) {
              if (st.heap.size() != 1) return false;
              std::int64_t addr = eval_aexpr(st.store, *p.address);
              std::int64_t value = eval_aexpr(st.store, *p.value);
              const auto& cell = *st.heap.begin();
              return cell.first == addr && cell.second == value;
            },
            [&](const Assertion::SepConj& c) {
              if (st.heap.size() > kMaxSplitCells)
                throw LimitError("heap too large to enumerate splits of *");
              std::vector<Heap::const_iterator> cells;
              for (auto it = st.heap.begin(); it != st.heap.end(); ++it) cells.push_back(it);
              std::uint64_t n = std::uint64_t{1} << cells.size();
              for (std::uint64_t mask = 0; mask < n; ++mask) {
                Heap left, right;
                for (std::size_t i = 0; i < cells.size(); ++i) {
                  if (mask & (std::uint64_t{1} << i))
                    left.insert(*cells[i]);
                  else
                    right.insert(*cells[i]);
                }
                if (check(*c.lhs, State{st.store, std::move(left)}) &&
                    check(*c.rhs, State{st.store, std::move(right)}))
                  return true;
              }
              return false;
            },
            [&](const Assertion::Wand& w) {
              std::vector<Heap> extensions;
              try {
                extensions = models_of(*w.lhs, st.store, cfg);
              } catch (const FragmentError& e) {
                throw FragmentError(std::string("the left operand of -* is not precise: ") +
                                    e.what());
              }
              for (const auto& ext : extensions) {
                if (!disjoint(ext, st.heap)) continue;
                if (!check(*w.rhs, State{st.store, heap_union(st.heap, ext)})) return false;
              }
              return true;
            },
            [&](const Assertion::Bin& b) {
              switch (b.op) {
                case LBinOp::And:
                  return check(*b.lhs, st) && check(*b.rhs, st);
                case LBinOp::Or:
                  return check(*b.lhs, st) || check(*b.rhs, st);
                case LBinOp::Imp:
                default:
                  return !check(*b.lhs, st) || check(*b.rhs, st);
              }
            },
            [&](const Assertion::Not& n) { return !check(*n.arg, st); },
            [&](const Assertion::Quant& q) {
              if (q.sort == VarSort::Int) {
                for (std::int64_t v : cfg.values) {
                  bool holds = check(*subst(q.body, Substitution{{q.var, lit(v)}}), st);
                  if (q.universal && !holds) return false;
                  if (!q.universal && holds) return true;
                }
                return q.universal;
              }
              for (const auto& s : sequences_over(cfg.values, cfg.max_seq_len)) {
                bool holds = check(*subst_seq(q.body, SeqSubstitution{{q.var, s}}), st);
                if (q.universal && !holds) return false;
                if (!q.universal && holds) return true;
              }
              return q.universal;
            },
            [&](const Assertion::ListRep& l) {
              return listrep_holds(seq_denote(*l.contents, st.store),
                                   eval_aexpr(st.store, *l.head),
                                   eval_aexpr(st.store, *l.end), st.heap);
            },
            [&](const Assertion::SeqEq& s) {
              return seq_denote(*s.lhs, st.store) == seq_denote(*s.rhs, st.store);
            },
        },
        a.node);
  }
};

void sorted_unique(std::vector<Heap>& hs) {
  std::sort(hs.begin(), hs.end());
  hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
}

struct Enumerator {
  const Store& store;
  const DomainConfig& cfg;

  std::vector<Heap> models(const Assertion& a) {
    return std::visit(
        overloaded{
            [&](const Assertion::Emp&) { return std::vector<Heap>{{}}; },
            [&](const Assertion::PointsTo& p) {
              std::int64_t addr = eval_aexpr(store, *p.address);
              std::int64_t value = eval_aexpr(store, *p.value);
              if (addr < 1) return std::vector<Heap>{};
              return std::vector<Heap>{{{addr, value}}};
            },
            [&](const Assertion::SepConj& c) {
              std::vector<Heap> lhs = models(*c.lhs);
              std::vector<Heap> rhs = models(*c.rhs);
              std::vector<Heap> out;
              for (const auto& l : lhs)
                for (const auto& r : rhs)
                  if (disjoint(l, r)) out.push_back(heap_union(l, r));
              sorted_unique(out);
              return out;
            },
            [&](const Assertion::Bin& b) {
              if (b.op != LBinOp::And)
                throw FragmentError("only conjunction with a heap-free side is precise");
              const Assertion* spatial = nullptr;
              const Assertion* cond = nullptr;
              if (is_heap_free(*b.rhs)) {
                spatial = b.lhs.get();
                cond = b.rhs.get();
              } else if (is_heap_free(*b.lhs)) {
                spatial = b.rhs.get();
                cond = b.lhs.get();
              } else {
                throw FragmentError(
                    "conjunction of two heap-constraining assertions is not precise");
              }
              if (!Checker{cfg}.check(*cond, State{store, {}})) return std::vector<Heap>{};
              return models(*spatial);
            },
            [&](const Assertion::Quant& q) {
              if (q.universal)
                throw FragmentError("universal quantification is not precise");
              std::vector<Heap> out;
              if (q.sort == VarSort::Int) {
                for (std::int64_t v : cfg.values) {
                  auto sub = models(*subst(q.body, Substitution{{q.var, lit(v)}}));
                  out.insert(out.end(), sub.begin(), sub.end());
                }
              } else {
                for (const auto& s : sequences_over(cfg.values, cfg.max_seq_len)) {
                  auto sub = models(*subst_seq(q.body, SeqSubstitution{{q.var, s}}));
                  out.insert(out.end(), sub.begin(), sub.end());
                }
              }
              sorted_unique(out);
              return out;
            },
            [&](const Assertion::ListRep& l) {
              std::vector<std::int64_t> contents = seq_denote(*l.contents, store);
              std::int64_t head = eval_aexpr(store, *l.head);
              std::int64_t end = eval_aexpr(store, *l.end);
              std::vector<Heap> out;
              if (contents.empty()) {
                if (head == end) out.push_back({});
                return out;
              }
              if (head < 1 || head == end) return out;
              Heap chain;
              build_chains(contents, 0, head, end, chain, out);
              sorted_unique(out);
              return out;
            },
            [&](const Assertion::Pure&) -> std::vector<Heap> {
              throw FragmentError("a pure condition alone does not determine a heap");
            },
            [&](const auto&) -> std::vector<Heap> {
              throw FragmentError("assertion is outside the precise fragment");
            },
        },
        a.node);
  }

  // Enumerate acyclic chains: node i at address `at` holds contents[i] and
  // a link to the next node; later node addresses come from cfg.locations.
  void build_chains(const std::vector<std::int64_t>& contents, std::size_t index,
                    std::int64_t at, std::int64_t end, Heap& chain, std::vector<Heap>& out) {
    if (at < 1 || at == end) return;
    if (chain.count(at) || chain.count(at + 1)) return;
    chain[at] = contents[index];
    if (index + 1 == contents.size()) {
      chain[at + 1] = end;
      out.push_back(chain);
      chain.erase(at + 1);
    } else {
      for (std::int64_t next : cfg.locations) {
        chain[at + 1] = next;
        build_chains(contents, index + 1, next, end, chain, out);
        chain.erase(at + 1);
      }
    }
    chain.erase(at);
  }
};

}  // namespace

DomainConfig DomainConfig::defaults_for(const State& st, const Assertion& a) {
  DomainConfig cfg;
  std::set<std::int64_t> values;
  collect_literals(a, values);
  for (const auto& [_, v] : st.store) values.insert(v);
  for (const auto& [l, v] : st.heap) {
    values.insert(l);
    values.insert(v);
  }
  for (std::int64_t v = 0; v <= 7; ++v) values.insert(v);
  cfg.values.assign(values.begin(), values.end());

  std::set<std::int64_t> locations;
  std::set<std::int64_t> mentioned;
  collect_literals(a, mentioned);
  for (const auto& [l, _] : st.heap) locations.insert(l);
  for (std::int64_t v : mentioned)
    if (v >= 1) locations.insert(v);
  std::int64_t top = locations.empty() ? 0 : *locations.rbegin();
  for (std::int64_t k = 1; k <= 4; ++k) locations.insert(top + k);
  cfg.locations.assign(locations.begin(), locations.end());
  return cfg;
}

bool sat(const Assertion& a, const State& st, const DomainConfig& cfg) {
  return Checker{cfg}.check(a, st);
}

std::vector<Heap> models_of(const Assertion& a, const Store& store, const DomainConfig& cfg) {
  return Enumerator{store, cfg}.models(a);
}

bool is_heap_free(const Assertion& a) {
  return std::visit(overloaded{
                        [](const Assertion::Pure&) { return true; },
                        [](const Assertion::Emp&) { return false; },
                        [](const Assertion::PointsTo&) { return false; },
                        [](const Assertion::SepConj&) { return false; },
                        [](const Assertion::Wand&) { return false; },
                        [](const Assertion::Bin& b) {
                          return is_heap_free(*b.lhs) && is_heap_free(*b.rhs);
                        },
                        [](const Assertion::Not& n) { return is_heap_free(*n.arg); },
                        [](const Assertion::Quant& q) { return is_heap_free(*q.body); },
                        [](const Assertion::ListRep&) { return false; },
                        [](const Assertion::SeqEq&) { return true; },
                    },
                    a.node);
}

std::vector<std::int64_t> seq_denote(const SeqExpr& s, const Store& store) {
  return std::visit(
      overloaded{
          [](const SeqExpr::Empty&) { return std::vector<std::int64_t>{}; },
          [&](const SeqExpr::Var& v) -> std::vector<std::int64_t> {
            throw EvalError(EvalError::Kind::UnboundVariable,
                            "unbound sequence variable '" + v.name + "'");
          },
          [&](const SeqExpr::Cons& c) {
            std::vector<std::int64_t> out{eval_aexpr(store, *c.head)};
            auto tail = seq_denote(*c.tail, store);
            out.insert(out.end(), tail.begin(), tail.end());
            return out;
          },
          [&](const SeqExpr::Concat& c) {
            auto out = seq_denote(*c.lhs, store);
            auto rhs = seq_denote(*c.rhs, store);
            out.insert(out.end(), rhs.begin(), rhs.end());
            return out;
          },
          [&](const SeqExpr::Rev& r) {
            auto out = seq_denote(*r.arg, store);
            std::reverse(out.begin(), out.end());
            return out;
          },
      },
      s.node);
}

}  // namespace seplog
