#include "hjpath/expr.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hjpath/errors.hpp"

namespace hjpath {

struct Expr::Node {
  ExprKind kind = ExprKind::Const;
  Rational value;
  SymbolId symbol;
  std::vector<Expr> args;
  int exponent = 0;
  FuncKind func = FuncKind::Sin;
};

const char* func_name(FuncKind f) {
  switch (f) {
    case FuncKind::Sin:
      return "sin";
    case FuncKind::Cos:
      return "cos";
    case FuncKind::Exp:
      return "exp";
  }
  return "?";
}

Expr::Expr() : Expr(Rational(0)) {}
Expr::Expr(int value) : Expr(Rational(value)) {}

Expr::Expr(const Rational& value) {
  auto node = std::make_shared<Node>();
  node->kind = ExprKind::Const;
  node->value = value;
  node->value.canonicalize();
  node_ = std::move(node);
}

Expr::Expr(const SymbolId& symbol) {
  auto node = std::make_shared<Node>();
  node->kind = ExprKind::Symbol;
  node->symbol = symbol;
  node_ = std::move(node);
}

ExprKind Expr::kind() const { return node_->kind; }
const Rational& Expr::value() const { return node_->value; }
const SymbolId& Expr::symbol() const { return node_->symbol; }
const std::vector<Expr>& Expr::args() const { return node_->args; }
int Expr::exponent() const { return node_->exponent; }
FuncKind Expr::func() const { return node_->func; }

bool Expr::is_zero() const { return kind() == ExprKind::Const && value() == 0; }
bool Expr::is_one() const { return kind() == ExprKind::Const && value() == 1; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case ExprKind::Const:
      return a.value() == b.value();
    case ExprKind::Symbol:
      return a.symbol() == b.symbol();
    case ExprKind::Pow:
      return a.exponent() == b.exponent() && a.base() == b.base();
    case ExprKind::Func:
      return a.func() == b.func() && a.args() == b.args();
    case ExprKind::Add:
    case ExprKind::Mul:
      return a.args() == b.args();
  }
  return false;
}

Expr Expr::sum(std::vector<Expr> terms) {
  std::vector<Expr> flat;
  Rational constant = 0;
  for (auto& t : terms) {
    if (t.kind() == ExprKind::Add) {
      for (const auto& c : t.args()) {
        if (c.is_constant())
          constant += c.value();
        else
          flat.push_back(c);
      }
    } else if (t.is_constant()) {
      constant += t.value();
    } else {
      flat.push_back(std::move(t));
    }
  }
  if (constant != 0) flat.emplace_back(constant);
  if (flat.empty()) return Expr();
  if (flat.size() == 1) return flat.front();
  auto node = std::make_shared<Node>();
  node->kind = ExprKind::Add;
  node->args = std::move(flat);
  return Expr(std::shared_ptr<const Node>(std::move(node)));
}

Expr Expr::product(std::vector<Expr> factors) {
  std::vector<Expr> flat;
  Rational constant = 1;
  for (auto& f : factors) {
    if (f.kind() == ExprKind::Mul) {
      for (const auto& c : f.args()) {
        if (c.is_constant())
          constant *= c.value();
        else
          flat.push_back(c);
      }
    } else if (f.is_constant()) {
      constant *= f.value();
    } else {
      flat.push_back(std::move(f));
    }
  }
  if (constant == 0) return Expr();
  if (flat.empty()) return Expr(constant);
  if (constant == 1 && flat.size() == 1) return flat.front();
  if (constant != 1) flat.insert(flat.begin(), Expr(constant));
  auto node = std::make_shared<Node>();
  node->kind = ExprKind::Mul;
  node->args = std::move(flat);
  return Expr(std::shared_ptr<const Node>(std::move(node)));
}

Expr Expr::power(const Expr& base, int exponent) {
  if (exponent == 0) return Expr(1);
  if (exponent == 1) return base;
  if (base.is_constant()) {
    if (base.value() == 0) {
      if (exponent < 0) throw InconsistentError("division by an identically zero expression");
      return Expr();
    }
    Rational r = 1;
    Rational b = exponent > 0 ? base.value() : Rational(1) / base.value();
    for (int i = 0; i < std::abs(exponent); ++i) r *= b;
    return Expr(r);
  }
  if (base.kind() == ExprKind::Pow) return power(base.base(), base.exponent() * exponent);
  auto node = std::make_shared<Node>();
  node->kind = ExprKind::Pow;
  node->args = {base};
  node->exponent = exponent;
  return Expr(std::shared_ptr<const Node>(std::move(node)));
}

Expr Expr::function(FuncKind f, const Expr& arg) {
  if (arg.is_zero()) return f == FuncKind::Sin ? Expr(0) : Expr(1);
  auto node = std::make_shared<Node>();
  node->kind = ExprKind::Func;
  node->func = f;
  node->args = {arg};
  return Expr(std::shared_ptr<const Node>(std::move(node)));
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, -b}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::product({a, Expr::power(b, -1)}); }
Expr operator-(const Expr& a) { return Expr::product({Expr(-1), a}); }

namespace {

void collect_symbols(const Expr& e, std::set<SymbolId>& out) {
  switch (e.kind()) {
    case ExprKind::Const:
      return;
    case ExprKind::Symbol:
      out.insert(e.symbol());
      return;
    default:
      for (const auto& a : e.args()) collect_symbols(a, out);
  }
}

}  // namespace

std::set<SymbolId> free_symbols(const Expr& e) {
  std::set<SymbolId> out;
  collect_symbols(e, out);
  return out;
}

bool contains(const Expr& e, const SymbolId& s) {
  switch (e.kind()) {
    case ExprKind::Const:
      return false;
    case ExprKind::Symbol:
      return e.symbol() == s;
    default:
      return std::any_of(e.args().begin(), e.args().end(), [&](const Expr& a) { return contains(a, s); });
  }
}

Expr differentiate(const Expr& e, const SymbolId& x) {
  switch (e.kind()) {
    case ExprKind::Const:
      return Expr();
    case ExprKind::Symbol:
      return e.symbol() == x ? Expr(1) : Expr();
    case ExprKind::Add: {
      std::vector<Expr> terms;
      for (const auto& a : e.args()) terms.push_back(differentiate(a, x));
      return Expr::sum(std::move(terms));
    }
    case ExprKind::Mul: {
      const auto& fs = e.args();
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        Expr d = differentiate(fs[i], x);
        if (d.is_zero()) continue;
        std::vector<Expr> prod;
        for (std::size_t j = 0; j < fs.size(); ++j) prod.push_back(j == i ? d : fs[j]);
        terms.push_back(Expr::product(std::move(prod)));
      }
      return Expr::sum(std::move(terms));
    }
    case ExprKind::Pow: {
      Expr d = differentiate(e.base(), x);
      if (d.is_zero()) return Expr();
      return Expr::product({Expr(e.exponent()), Expr::power(e.base(), e.exponent() - 1), d});
    }
    case ExprKind::Func: {
      const Expr& a = e.args().front();
      Expr d = differentiate(a, x);
      if (d.is_zero()) return Expr();
      switch (e.func()) {
        case FuncKind::Sin:
          return cos(a) * d;
        case FuncKind::Cos:
          return -(sin(a) * d);
        case FuncKind::Exp:
          return e * d;
      }
    }
  }
  return Expr();
}

namespace {

Expr rebuild(const Expr& e, std::vector<Expr> args) {
  switch (e.kind()) {
    case ExprKind::Add:
      return Expr::sum(std::move(args));
    case ExprKind::Mul:
      return Expr::product(std::move(args));
    case ExprKind::Pow:
      return Expr::power(args.front(), e.exponent());
    case ExprKind::Func:
      return Expr::function(e.func(), args.front());
    default:
      return e;
  }
}

}  // namespace

Expr substitute(const Expr& e, const Bindings& bindings) {
  if (bindings.empty()) return e;
  switch (e.kind()) {
    case ExprKind::Const:
      return e;
    case ExprKind::Symbol: {
      auto it = bindings.find(e.symbol());
      return it == bindings.end() ? e : it->second;
    }
    default: {
      std::vector<Expr> args;
      args.reserve(e.args().size());
      bool changed = false;
      for (const auto& a : e.args()) {
        args.push_back(substitute(a, bindings));
        changed = changed || !(args.back() == a);
      }
      return changed ? rebuild(e, std::move(args)) : e;
    }
  }
}

Expr substitute_fixpoint(const Expr& e, const Bindings& bindings) {
  Expr cur = e;
  // An acyclic chain over m bound symbols resolves in at most m + 1 passes.
  for (std::size_t pass = 0; pass <= bindings.size() + 1; ++pass) {
    bool any = false;
    for (const auto& s : free_symbols(cur))
      if (bindings.count(s)) {
        any = true;
        break;
      }
    if (!any) return cur;
    cur = substitute(cur, bindings);
  }
  throw InconsistentError("cyclic bindings in substitution");
}

double evaluate(const Expr& e, const Point& point, const EvalOptions& options) {
  switch (e.kind()) {
    case ExprKind::Const:
      return e.value().get_d();
    case ExprKind::Symbol: {
      auto it = point.find(e.symbol());
      if (it == point.end()) throw Error("unbound symbol " + e.symbol().canonical_name());
      return it->second;
    }
    case ExprKind::Add: {
      double s = 0;
      for (const auto& a : e.args()) s += evaluate(a, point, options);
      return s;
    }
    case ExprKind::Mul: {
      double p = 1;
      for (const auto& a : e.args()) p *= evaluate(a, point, options);
      return p;
    }
    case ExprKind::Pow: {
      double b = evaluate(e.base(), point, options);
      if (e.exponent() < 0 && std::abs(b) < options.pole_epsilon)
        throw PoleError("pole: denominator " + to_string(e.base()) + " evaluates to " + std::to_string(b));
      return std::pow(b, e.exponent());
    }
    case ExprKind::Func: {
      double a = evaluate(e.args().front(), point, options);
      switch (e.func()) {
        case FuncKind::Sin:
          return std::sin(a);
        case FuncKind::Cos:
          return std::cos(a);
        case FuncKind::Exp:
          return std::exp(a);
      }
    }
  }
  return 0;
}

std::optional<Rational> evaluate_exact(const Expr& e, const std::map<SymbolId, Rational>& point) {
  switch (e.kind()) {
    case ExprKind::Const:
      return e.value();
    case ExprKind::Symbol: {
      auto it = point.find(e.symbol());
      if (it == point.end()) throw Error("unbound symbol " + e.symbol().canonical_name());
      return it->second;
    }
    case ExprKind::Add: {
      Rational s = 0;
      for (const auto& a : e.args()) {
        auto v = evaluate_exact(a, point);
        if (!v) return std::nullopt;
        s += *v;
      }
      return s;
    }
    case ExprKind::Mul: {
      Rational p = 1;
      for (const auto& a : e.args()) {
        auto v = evaluate_exact(a, point);
        if (!v) return std::nullopt;
        p *= *v;
      }
      return p;
    }
    case ExprKind::Pow: {
      auto b = evaluate_exact(e.base(), point);
      if (!b) return std::nullopt;
      if (*b == 0 && e.exponent() < 0) return std::nullopt;
      Rational base = e.exponent() > 0 ? *b : Rational(1) / *b;
      Rational r = 1;
      for (int i = 0; i < std::abs(e.exponent()); ++i) r *= base;
      return r;
    }
    case ExprKind::Func: {
      auto a = evaluate_exact(e.args().front(), point);
      if (!a || *a != 0) return std::nullopt;
      return e.func() == FuncKind::Sin ? Rational(0) : Rational(1);
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

enum Prec { kSum = 0, kProduct = 1, kUnary = 2, kPower = 3, kAtom = 4 };

struct Printer {
  const SymbolTable* table;
  bool latex;

  std::string symbol(const SymbolId& s) const {
    if (latex) return table->latex(s);
    return table ? table->print(s) : s.canonical_name();
  }

  static bool negative_term(const Expr& e) {
    if (e.is_constant()) return e.value() < 0;
    if (e.kind() == ExprKind::Mul && e.args().front().is_constant()) return e.args().front().value() < 0;
    return false;
  }

  std::string wrap(const std::string& s, bool paren) const {
    if (!paren) return s;
    return latex ? "\\left(" + s + "\\right)" : "(" + s + ")";
  }

  // Returns text and its precedence.
  std::pair<std::string, int> print(const Expr& e) const {
    switch (e.kind()) {
      case ExprKind::Const: {
        const Rational& v = e.value();
        if (v < 0) {
          auto inner = print(Expr(Rational(-v)));
          return {"-" + inner.first, kUnary};
        }
        if (is_integer(v)) return {v.get_num().get_str(), kAtom};
        if (latex) return {"\\frac{" + v.get_num().get_str() + "}{" + v.get_den().get_str() + "}", kAtom};
        return {v.get_num().get_str() + "/" + v.get_den().get_str(), kProduct};
      }
      case ExprKind::Symbol:
        return {symbol(e.symbol()), kAtom};
      case ExprKind::Add: {
        std::string out;
        bool first = true;
        for (const auto& t : e.args()) {
          if (first) {
            out = print(t).first;
            first = false;
            continue;
          }
          if (negative_term(t)) {
            auto pt = print(-t);
            out += " - " + wrap(pt.first, pt.second <= kSum);
          } else {
            out += " + " + print(t).first;
          }
        }
        return {out, kSum};
      }
      case ExprKind::Mul:
        return print_product(e);
      case ExprKind::Pow: {
        if (e.exponent() < 0) return print_product(Expr::product({Expr(1), e}));
        auto b = print(e.base());
        std::string base = wrap(b.first, b.second < kAtom);
        if (latex) return {"{" + base + "}^{" + std::to_string(e.exponent()) + "}", kPower};
        return {base + "^" + std::to_string(e.exponent()), kPower};
      }
      case ExprKind::Func: {
        auto a = print(e.args().front());
        if (latex) return {"\\" + std::string(func_name(e.func())) + "\\left(" + a.first + "\\right)", kAtom};
        return {std::string(func_name(e.func())) + "(" + a.first + ")", kAtom};
      }
    }
    return {"?", kAtom};
  }

  std::pair<std::string, int> print_product(const Expr& e) const {
    Rational coeff = 1;
    std::vector<Expr> num, den;
    auto split = [&](const Expr& f) {
      if (f.is_constant())
        coeff *= f.value();
      else if (f.kind() == ExprKind::Pow && f.exponent() < 0)
        den.push_back(Expr::power(f.base(), -f.exponent()));
      else
        num.push_back(f);
    };
    if (e.kind() == ExprKind::Mul)
      for (const auto& f : e.args()) split(f);
    else
      split(e);
    bool neg = coeff < 0;
    if (neg) coeff = -coeff;
    Integer cn = coeff.get_num(), cd = coeff.get_den();

    auto factor_text = [&](const Expr& f) {
      auto p = print(f);
      return wrap(p.first, p.second < kPower);
    };

    std::string top;
    if (cn != 1 || num.empty()) top = cn.get_str();
    for (const auto& f : num) {
      if (!top.empty()) top += latex ? " " : "*";
      top += factor_text(f);
    }
    std::string out;
    if (latex) {
      std::string bottom;
      if (cd != 1) bottom = cd.get_str();
      for (const auto& f : den) {
        if (!bottom.empty()) bottom += " ";
        bottom += factor_text(f);
      }
      out = bottom.empty() ? top : "\\frac{" + top + "}{" + bottom + "}";
    } else {
      out = top;
      if (cd != 1) out += "/" + cd.get_str();
      for (const auto& f : den) out += "/" + factor_text(f);
    }
    if (neg) return {"-" + out, kUnary};
    return {out, (den.empty() && cd == 1 && num.size() + (cn != 1 ? 1 : 0) <= 1) ? kPower : kProduct};
  }
};

}  // namespace

std::string to_string(const Expr& e, const SymbolTable* table) { return Printer{table, false}.print(e).first; }

std::string to_latex(const Expr& e, const SymbolTable& table) { return Printer{&table, true}.print(e).first; }

}  // namespace hjpath
