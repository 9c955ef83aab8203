#include "hjpath/normal_form.hpp"

#include "hjpath/errors.hpp"

namespace hjpath {

NormalForm::NormalForm(Poly numerator, Poly denominator) {
  numerator = numerator.reduce_trig();
  denominator = denominator.reduce_trig();
  if (denominator.is_zero()) throw InconsistentError("division by an identically zero denominator");
  if (numerator.is_zero()) {
    den_ = Poly(Rational(1));
    return;
  }
  if (denominator.is_constant()) {
    num_ = numerator.scaled(Rational(1) / denominator.constant_value());
    den_ = Poly(Rational(1));
    return;
  }
  Poly g = gcd(numerator, denominator);
  if (!g.is_constant()) {
    numerator = *numerator.divide_exact(g);
    denominator = *denominator.divide_exact(g);
  }
  Rational lc = denominator.leading().coeff;
  num_ = numerator.scaled(Rational(1) / lc);
  den_ = denominator.scaled(Rational(1) / lc);
}

NormalForm operator+(const NormalForm& a, const NormalForm& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_ == b.den_) {
    if (a.den_.is_constant()) {
      NormalForm out;
      out.num_ = a.num_ + b.num_;
      return out;
    }
    return NormalForm(a.num_ + b.num_, a.den_);
  }
  return NormalForm(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

NormalForm operator-(const NormalForm& a) {
  NormalForm out = a;
  out.num_ = -out.num_;
  return out;
}

NormalForm operator-(const NormalForm& a, const NormalForm& b) { return a + (-b); }

NormalForm operator*(const NormalForm& a, const NormalForm& b) {
  if (a.is_zero() || b.is_zero()) return NormalForm();
  if (a.den_.is_constant() && b.den_.is_constant()) {
    Poly n = a.num_ * b.num_;
    NormalForm out;
    out.num_ = n.reduce_trig();
    return out;
  }
  return NormalForm(a.num_ * b.num_, a.den_ * b.den_);
}

NormalForm NormalForm::reciprocal() const {
  if (is_zero()) throw InconsistentError("division by an identically zero expression");
  return NormalForm(den_, num_);
}

NormalForm operator/(const NormalForm& a, const NormalForm& b) { return a * b.reciprocal(); }

NormalForm NormalForm::pow(int exponent) const {
  if (exponent < 0) return reciprocal().pow(-exponent);
  NormalForm result(Rational(1));
  NormalForm base = *this;
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    exponent >>= 1;
    if (exponent) base = base * base;
  }
  return result;
}

Expr NormalForm::to_expr() const {
  Expr n = num_.to_expr();
  if (den_.is_constant()) return n;
  return Expr::product({n, Expr::power(den_.to_expr(), -1)});
}

NormalForm normalize(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Const:
      return NormalForm(e.value());
    case ExprKind::Symbol:
      return NormalForm::atom(Atom::from_symbol(e.symbol()));
    case ExprKind::Add: {
      NormalForm s;
      for (const auto& a : e.args()) s = s + normalize(a);
      return s;
    }
    case ExprKind::Mul: {
      NormalForm p(Rational(1));
      for (const auto& a : e.args()) {
        p = p * normalize(a);
        if (p.is_zero()) return p;
      }
      return p;
    }
    case ExprKind::Pow:
      return normalize(e.base()).pow(e.exponent());
    case ExprKind::Func: {
      NormalForm arg = normalize(e.args().front());
      if (arg.is_zero()) return NormalForm(Rational(e.func() == FuncKind::Sin ? 0 : 1));
      return NormalForm::atom(Atom::from_function(e.func(), arg.to_expr()));
    }
  }
  return NormalForm();
}

Expr simplify(const Expr& e) { return normalize(e).to_expr(); }

bool equivalent(const Expr& a, const Expr& b) { return normalize(a - b).is_zero(); }

Expr total_time_derivative(const Expr& e, int levels_allowed) {
  std::vector<Expr> terms;
  for (const auto& s : free_symbols(e)) {
    if (s.kind == SymbolKind::Time) {
      terms.push_back(differentiate(e, s));
      continue;
    }
    if (s.kind != SymbolKind::Jet)
      throw Error("total time derivative: symbol " + s.canonical_name() + " is not a jet coordinate");
    Expr d = simplify(differentiate(e, s));
    if (d.is_zero()) continue;
    if (s.level + 1 > levels_allowed)
      throw Error("total time derivative needs derivative level " + std::to_string(s.level + 1) +
                  " beyond the allowed " + std::to_string(levels_allowed));
    terms.push_back(d * Expr(SymbolId::jet(s.index, s.level + 1)));
  }
  return simplify(Expr::sum(std::move(terms)));
}

}  // namespace hjpath
