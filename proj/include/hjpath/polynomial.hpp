#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hjpath/expr.hpp"
#include "hjpath/rational.hpp"
#include "hjpath/symbol.hpp"

namespace hjpath {

/// Indeterminate of a polynomial: a symbol or an opaque transcendental
/// subterm sin/cos/exp(arg). Ordered lexicographically on
/// (tag, level, index, key); `key` is the symbol name for Aux symbols and
/// the canonical printed argument for functions.
struct Atom {
  enum Tag : std::uint8_t { kSin = 6, kCos = 7, kExp = 8 };

  std::uint8_t tag = 0;
  int level = 0;
  int index = 0;
  std::string key;
  std::optional<Expr> arg;  // functions only, already in canonical form

  static Atom from_symbol(const SymbolId& s);
  static Atom from_function(FuncKind f, const Expr& canonical_arg);

  bool is_symbol() const { return tag < kSin; }
  bool is_function() const { return tag >= kSin; }
  SymbolId symbol() const;
  Expr to_expr() const;

  friend bool operator==(const Atom& a, const Atom& b) {
    return a.tag == b.tag && a.level == b.level && a.index == b.index && a.key == b.key;
  }
  friend bool operator<(const Atom& a, const Atom& b) {
    if (a.tag != b.tag) return a.tag < b.tag;
    if (a.level != b.level) return a.level < b.level;
    if (a.index != b.index) return a.index < b.index;
    return a.key < b.key;
  }
};

/// Power product, atoms ascending, exponents positive.
using Monomial = std::vector<std::pair<Atom, int>>;

/// Lex order with the largest atom as the most significant variable.
bool monomial_less(const Monomial& a, const Monomial& b);

/// Sparse multivariate polynomial over Q, terms sorted by descending
/// monomial, no zero coefficients. Equal polynomials have identical
/// representations.
class Poly {
 public:
  struct Term {
    Monomial monomial;
    Rational coeff;
    friend bool operator==(const Term&, const Term&) = default;
  };

  Poly() = default;
  explicit Poly(const Rational& c);
  static Poly atom(const Atom& a, int exponent = 1);
  static Poly from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.front().monomial.empty()); }
  Rational constant_value() const;  // valid when is_constant()
  const Term& leading() const { return terms_.front(); }

  friend bool operator==(const Poly&, const Poly&) = default;
  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly scaled(const Rational& c) const;

  std::set<Atom> atoms() const;
  bool has(const Atom& x) const;
  int degree(const Atom& x) const;
  /// Total degree counting only atoms in `subset`.
  int degree_in(const std::set<Atom>& subset) const;

  /// Coefficients of x^d, d = 0..degree(x).
  std::vector<Poly> coefficients(const Atom& x) const;
  static Poly from_coefficients(const Atom& x, const std::vector<Poly>& coeffs);

  /// Quotient when b divides *this exactly.
  std::optional<Poly> divide_exact(const Poly& b) const;

  /// Scaled so the leading coefficient is 1 (zero stays zero).
  Poly monic() const;

  /// Rewrites cos(a)^m, m >= 2, through cos^2 = 1 - sin^2.
  Poly reduce_trig() const;

  Expr to_expr() const;

 private:
  std::vector<Term> terms_;
};

/// Monic greatest common divisor over Q (1 for coprime inputs).
Poly gcd(const Poly& a, const Poly& b);

}  // namespace hjpath
