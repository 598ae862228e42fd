#include "seplog/semantics.hpp"

#include <sstream>

#include "seplog/printer.hpp"

namespace seplog {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::int64_t checked(std::int64_t a, std::int64_t b, ABinOp op) {
  std::int64_t r = 0;
  bool bad = false;
  switch (op) {
    case ABinOp::Add: bad = __builtin_add_overflow(a, b, &r); break;
    case ABinOp::Sub: bad = __builtin_sub_overflow(a, b, &r); break;
    case ABinOp::Mul: bad = __builtin_mul_overflow(a, b, &r); break;
  }
  if (bad)
    throw EvalError(EvalError::Kind::Overflow,
                    "arithmetic overflow: the result does not fit in 64 bits");
  return r;
}

}  // namespace

std::int64_t eval_aexpr(const Store& store, const AExpr& e) {
  return std::visit(overloaded{
                        [](const AExpr::Lit& l) { return l.value; },
                        [&](const AExpr::Var& v) {
                          auto it = store.find(v.name);
                          if (it == store.end())
                            throw EvalError(EvalError::Kind::UnboundVariable,
                                            "unbound variable '" + v.name + "'");
                          return it->second;
                        },
                        [&](const AExpr::Bin& b) {
                          return checked(eval_aexpr(store, *b.lhs), eval_aexpr(store, *b.rhs),
                                         b.op);
                        },
                    },
                    e.node);
}

bool eval_bexpr(const Store& store, const BExpr& e) {
  return std::visit(
      overloaded{
          [](const BExpr::True&) { return true; },
          [](const BExpr::False&) { return false; },
          [&](const BExpr::Eq& q) {
            return eval_aexpr(store, *q.lhs) == eval_aexpr(store, *q.rhs);
          },
          [&](const BExpr::Not& n) { return !eval_bexpr(store, *n.arg); },
          [&](const BExpr::Bin& b) {
            switch (b.op) {
              case BBinOp::And:
                return eval_bexpr(store, *b.lhs) && eval_bexpr(store, *b.rhs);
              case BBinOp::Or:
                return eval_bexpr(store, *b.lhs) || eval_bexpr(store, *b.rhs);
              case BBinOp::Imp:
              default:
                return !eval_bexpr(store, *b.lhs) || eval_bexpr(store, *b.rhs);
            }
          },
      },
      e.node);
}

namespace {

struct Machine {
  State state;
  ExecConfig config;
  std::int64_t fuel;
  ExecResult result;

  explicit Machine(State s, const ExecConfig& c) : state(std::move(s)), config(c), fuel(c.fuel) {}

  bool spend() {
    if (fuel <= 0) {
      result.kind = ExecResult::Kind::OutOfFuel;
      return false;
    }
    --fuel;
    return true;
  }

  void record(const Command& c) {
    result.trace.push_back(ExecStep{std::make_shared<Command>(c), render(c), c.pos, state});
  }

  bool abort_at(const Command& c, std::int64_t address) {
    result.kind = ExecResult::Kind::Abort;
    result.abort_command = render(c);
    result.abort_pos = c.pos;
    result.abort_address = address;
    return false;
  }

  std::int64_t assign_target(const std::string& name, const Command& c) {
    auto it = state.store.find(name);
    if (it == state.store.end())
      throw EvalError(EvalError::Kind::UnboundVariable,
                      "assignment to undeclared variable '" + name + "' in " + render(c));
    return it->second;
  }

  // Smallest l >= alloc_base with l, ..., l+n-1 all free.
  std::int64_t find_block(std::int64_t n) {
    std::int64_t candidate = config.alloc_base;
    while (true) {
      bool clash = false;
      for (std::int64_t k = 0; k < n; ++k) {
        auto it = state.heap.find(checked(candidate, k, ABinOp::Add));
        if (it != state.heap.end()) {
          candidate = it->first + 1;
          clash = true;
          break;
        }
      }
      if (!clash) return candidate;
    }
  }

  // Returns false when execution stopped (abort or fuel).
  bool run(const Block& b) {
    for (const auto& item : b.items) {
      if (item.is_annotation()) continue;
      if (!run(*item.command())) return false;
    }
    return true;
  }

  bool run(const Command& c) {
    return std::visit(
        overloaded{
            [&](const Command::Skip&) {
              if (!spend()) return false;
              record(c);
              return true;
            },
            [&](const Command::Assign& a) {
              if (!spend()) return false;
              assign_target(a.target, c);
              state.store[a.target] = eval_aexpr(state.store, *a.value);
              record(c);
              return true;
            },
            [&](const Command::If& f) {
              return eval_bexpr(state.store, *f.cond) ? run(*f.then_body) : run(*f.else_body);
            },
            [&](const Command::While& w) {
              while (true) {
                if (!spend()) return false;  // each loop test costs a step
                if (!eval_bexpr(state.store, *w.cond)) return true;
                if (!run(*w.body)) return false;
              }
            },
            [&](const Command::Alloc& a) {
              if (!spend()) return false;
              assign_target(a.target, c);
              std::vector<std::int64_t> values;
              values.reserve(a.fields.size());
              for (const auto& f : a.fields) values.push_back(eval_aexpr(state.store, *f));
              std::int64_t l = find_block(static_cast<std::int64_t>(values.size()));
              for (std::size_t k = 0; k < values.size(); ++k)
                state.heap[l + static_cast<std::int64_t>(k)] = values[k];
              state.store[a.target] = l;
              record(c);
              return true;
            },
            [&](const Command::Lookup& l) {
              if (!spend()) return false;
              assign_target(l.target, c);
              std::int64_t address = eval_aexpr(state.store, *l.address);
              auto it = state.heap.find(address);
              if (it == state.heap.end()) return abort_at(c, address);
              state.store[l.target] = it->second;
              record(c);
              return true;
            },
            [&](const Command::Mutate& m) {
              if (!spend()) return false;
              std::int64_t address = eval_aexpr(state.store, *m.address);
              std::int64_t value = eval_aexpr(state.store, *m.value);
              auto it = state.heap.find(address);
              if (it == state.heap.end()) return abort_at(c, address);
              it->second = value;
              record(c);
              return true;
            },
            [&](const Command::Free& f) {
              if (!spend()) return false;
              std::int64_t address = eval_aexpr(state.store, *f.address);
              auto it = state.heap.find(address);
              if (it == state.heap.end()) return abort_at(c, address);
              state.heap.erase(it);
              record(c);
              return true;
            },
        },
        c.node);
  }
};

}  // namespace

ExecResult exec(const Block& body, State initial, const ExecConfig& config) {
  Machine m(std::move(initial), config);
  if (m.run(body)) m.result.kind = ExecResult::Kind::Final;
  m.result.final_state = std::move(m.state);
  return m.result;
}

ExecResult exec(const Command& c, State initial, const ExecConfig& config) {
  Block b;
  b.items.push_back(Block::Item{std::make_shared<Command>(c), c.pos});
  return exec(b, std::move(initial), config);
}

State initial_state(const Program& p, const Store& overrides) {
  State s;
  for (const auto& v : p.variables) s.store[v] = 0;
  for (const auto& [k, v] : overrides) s.store[k] = v;
  return s;
}

std::string store_literal(const Store& s) {
  std::string out;
  for (const auto& [k, v] : s) {
    if (!out.empty()) out += ",";
    out += k + "=" + std::to_string(v);
  }
  return out;
}

std::string heap_literal(const Heap& h) {
  std::string out;
  for (const auto& [k, v] : h) {
    if (!out.empty()) out += ",";
    out += std::to_string(k) + ":" + std::to_string(v);
  }
  return out;
}

namespace {
std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      current += c;
    }
  }
  if (!current.empty()) parts.push_back(current);
  return parts;
}

std::int64_t parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    std::int64_t v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error("invalid " + what + " '" + s + "'");
  }
}
}  // namespace

Store parse_store_literal(const std::string& text) {
  Store s;
  for (const auto& part : split(text, ',')) {
    auto eq = part.find('=');
    if (eq == std::string::npos || eq == 0)
      throw Error("invalid store entry '" + part + "' (expected name=value)");
    s[part.substr(0, eq)] = parse_int(part.substr(eq + 1), "store value");
  }
  return s;
}

Heap parse_heap_literal(const std::string& text) {
  Heap h;
  for (const auto& part : split(text, ',')) {
    auto colon = part.find(':');
    if (colon == std::string::npos || colon == 0)
      throw Error("invalid heap entry '" + part + "' (expected location:value)");
    std::int64_t loc = parse_int(part.substr(0, colon), "heap location");
    if (loc < 1) throw Error("heap locations must be >= 1, got " + std::to_string(loc));
    h[loc] = parse_int(part.substr(colon + 1), "heap value");
  }
  return h;
}

std::string state_line(const State& s) {
  std::ostringstream out;
  out << "store {";
  bool first = true;
  for (const auto& [k, v] : s.store) {
    if (!first) out << ", ";
    first = false;
    out << k << ":" << v;
  }
  out << "} heap {";
  first = true;
  for (const auto& [k, v] : s.heap) {
    if (!first) out << ", ";
    first = false;
    out << k << ":" << v;
  }
  out << "}";
  return out.str();
}

}  // namespace seplog
