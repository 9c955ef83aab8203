#pragma once

#include "hjpath/expr.hpp"
#include "hjpath/polynomial.hpp"

namespace hjpath {

/// Canonical rational function numerator/denominator over atoms.
///
/// Invariants: gcd(numerator, denominator) = 1, the denominator is monic
/// under the atom order, no cos(a)^m with m >= 2 survives, and zero is
/// represented as 0/1. Two expressions that are equal as rational
/// functions of their atoms produce identical NormalForms.
class NormalForm {
 public:
  NormalForm() : den_(Rational(1)) {}
  explicit NormalForm(const Rational& c) : num_(c), den_(Rational(1)) {}
  NormalForm(Poly numerator, Poly denominator);

  static NormalForm atom(const Atom& a) { return NormalForm(Poly::atom(a), Poly(Rational(1))); }

  const Poly& numerator() const { return num_; }
  const Poly& denominator() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  bool is_polynomial() const { return den_.is_constant(); }
  Rational constant_value() const { return num_.constant_value(); }

  friend bool operator==(const NormalForm&, const NormalForm&) = default;
  friend NormalForm operator+(const NormalForm& a, const NormalForm& b);
  friend NormalForm operator-(const NormalForm& a, const NormalForm& b);
  friend NormalForm operator-(const NormalForm& a);
  friend NormalForm operator*(const NormalForm& a, const NormalForm& b);
  friend NormalForm operator/(const NormalForm& a, const NormalForm& b);
  NormalForm pow(int exponent) const;
  NormalForm reciprocal() const;

  Expr to_expr() const;

 private:
  Poly num_;
  Poly den_;
};

NormalForm normalize(const Expr& e);

/// to_expr(normalize(e)).
Expr simplify(const Expr& e);

/// normalize(a - b) is zero.
bool equivalent(const Expr& a, const Expr& b);

/// Formal total derivative on the jet space: q_i^(s) -> q_i^(s+1), t -> 1.
/// Throws Error when a nonvanishing term would need a level above
/// `levels_allowed`, or when `e` holds symbols other than jets and time.
Expr total_time_derivative(const Expr& e, int levels_allowed);

}  // namespace hjpath
