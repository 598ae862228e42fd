#include "poly.hpp"

#include <algorithm>
#include <numeric>

#include "seplog/errors.hpp"
#include "seplog/printer.hpp"

namespace seplog::detail {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r))
    throw EvalError(EvalError::Kind::Overflow, "coefficient overflow in term arithmetic");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    throw EvalError(EvalError::Kind::Overflow, "coefficient overflow in term arithmetic");
  return r;
}

void add_term(Poly& p, Mono m, std::int64_t coeff) {
  if (coeff == 0) return;
  auto it = p.terms.find(m);
  if (it == p.terms.end()) {
    p.terms.emplace(std::move(m), coeff);
    return;
  }
  it->second = checked_add(it->second, coeff);
  if (it->second == 0) p.terms.erase(it);
}

}  // namespace

Poly Poly::constant(std::int64_t c) {
  Poly p;
  if (c != 0) p.terms[{}] = c;
  return p;
}

Poly Poly::variable(const std::string& name) {
  Poly p;
  p.terms[{name}] = 1;
  return p;
}

bool Poly::is_constant() const {
  return terms.empty() || (terms.size() == 1 && terms.begin()->first.empty());
}

std::int64_t Poly::constant_value() const {
  return terms.empty() ? 0 : terms.begin()->second;
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly out = a;
  for (const auto& [m, c] : b.terms) add_term(out, m, c);
  return out;
}

Poly operator-(const Poly& a, const Poly& b) {
  Poly out = a;
  for (const auto& [m, c] : b.terms) add_term(out, m, checked_mul(c, -1));
  return out;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms) {
      Mono m;
      m.reserve(ma.size() + mb.size());
      std::merge(ma.begin(), ma.end(), mb.begin(), mb.end(), std::back_inserter(m));
      add_term(out, std::move(m), checked_mul(ca, cb));
    }
  return out;
}

Poly neg(const Poly& a) { return Poly::constant(0) - a; }

Poly to_poly(const AExpr& e) {
  return std::visit(overloaded{
                        [](const AExpr::Lit& l) { return Poly::constant(l.value); },
                        [](const AExpr::Var& v) { return Poly::variable(v.name); },
                        [](const AExpr::Bin& b) {
                          Poly l = to_poly(*b.lhs);
                          Poly r = to_poly(*b.rhs);
                          switch (b.op) {
                            case ABinOp::Add: return l + r;
                            case ABinOp::Sub: return l - r;
                            case ABinOp::Mul:
                            default: return l * r;
                          }
                        },
                    },
                    e.node);
}

AExprPtr from_poly(const Poly& p) {
  if (p.terms.empty()) return lit(0);
  AExprPtr acc;
  for (const auto& [m, c] : p.terms) {
    AExprPtr base;
    for (const auto& v : m) base = base ? mul(base, var(v)) : var(v);
    std::int64_t magnitude = c < 0 ? -c : c;
    AExprPtr term;
    if (!base)
      term = lit(magnitude);
    else if (magnitude == 1)
      term = base;
    else
      term = mul(lit(magnitude), base);
    if (!acc)
      acc = c < 0 ? (base ? sub(lit(0), term) : lit(c)) : term;
    else
      acc = c < 0 ? sub(acc, term) : add(acc, term);
  }
  return acc;
}

bool poly_mentions(const Poly& p, const std::string& name) {
  for (const auto& [m, _] : p.terms)
    if (std::find(m.begin(), m.end(), name) != m.end()) return true;
  return false;
}

std::set<std::string> poly_vars(const Poly& p) {
  std::set<std::string> out;
  for (const auto& [m, _] : p.terms) out.insert(m.begin(), m.end());
  return out;
}

Poly subst_poly(const Poly& p, const std::string& name, const Poly& replacement) {
  Poly out;
  for (const auto& [m, c] : p.terms) {
    Mono rest;
    std::size_t power = 0;
    for (const auto& v : m) {
      if (v == name)
        ++power;
      else
        rest.push_back(v);
    }
    Poly term;
    term.terms[rest] = c;
    for (std::size_t k = 0; k < power; ++k) term = term * replacement;
    out = out + term;
  }
  return out;
}

Poly normalize_sign(const Poly& p) {
  if (p.terms.empty()) return p;
  std::int64_t g = 0;
  for (const auto& [_, c] : p.terms) g = std::gcd(g, c < 0 ? -c : c);
  if (g == 0) return p;
  std::int64_t lead = p.terms.begin()->second;
  std::int64_t divisor = lead < 0 ? -g : g;
  Poly out;
  for (const auto& [m, c] : p.terms) out.terms[m] = c / divisor;
  return out;
}

std::string to_string(const Poly& p) { return render(*from_poly(p)); }

}  // namespace seplog::detail
