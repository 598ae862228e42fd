#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "seplog/ast.hpp"

namespace seplog::detail {

// Multivariate polynomials over program and logical variables give terms a
// canonical form: two expressions denote the same function of the store iff
// their polynomials are equal.

/// A monomial is a sorted multiset of variable names; empty means constant.
using Mono = std::vector<std::string>;

struct Poly {
  std::map<Mono, std::int64_t> terms;  // zero coefficients are never stored

  static Poly constant(std::int64_t c);
  static Poly variable(const std::string& name);

  bool is_zero() const { return terms.empty(); }
  bool is_constant() const;
  std::int64_t constant_value() const;  // requires is_constant()

  bool operator==(const Poly&) const = default;
  bool operator<(const Poly& o) const { return terms < o.terms; }
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly neg(const Poly& a);

Poly to_poly(const AExpr& e);
AExprPtr from_poly(const Poly& p);

bool poly_mentions(const Poly& p, const std::string& name);
std::set<std::string> poly_vars(const Poly& p);
Poly subst_poly(const Poly& p, const std::string& name, const Poly& replacement);

/// Divide by the gcd of the coefficients and make the leading coefficient
/// positive; maps a relation and its negation/multiples to one witness.
Poly normalize_sign(const Poly& p);

std::string to_string(const Poly& p);

}  // namespace seplog::detail
