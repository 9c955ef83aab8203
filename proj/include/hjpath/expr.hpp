#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hjpath/rational.hpp"
#include "hjpath/symbol.hpp"

namespace hjpath {

enum class ExprKind : std::uint8_t { Const, Symbol, Add, Mul, Pow, Func };
enum class FuncKind : std::uint8_t { Sin, Cos, Exp };

const char* func_name(FuncKind f);

/// Immutable symbolic expression tree.
///
/// Nodes are shared, so copying an Expr is cheap and values may be handed
/// across threads freely. Constructors perform only local tidying
/// (constant folding, flattening, dropping neutral elements); use
/// `normalize`/`simplify` from normal_form.hpp for canonical forms.
class Expr {
 public:
  Expr();  // the constant 0
  Expr(int value);  // NOLINT(google-explicit-constructor)
  Expr(const Rational& value);  // NOLINT(google-explicit-constructor)
  Expr(const SymbolId& symbol);  // NOLINT(google-explicit-constructor)

  ExprKind kind() const;
  const Rational& value() const;
  const SymbolId& symbol() const;
  const std::vector<Expr>& args() const;
  const Expr& base() const { return args().front(); }
  int exponent() const;
  FuncKind func() const;

  bool is_constant() const { return kind() == ExprKind::Const; }
  bool is_zero() const;
  bool is_one() const;

  /// Structural equality; use `equivalent` for mathematical equality.
  friend bool operator==(const Expr& a, const Expr& b);

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }

  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr power(const Expr& base, int exponent);
  static Expr function(FuncKind f, const Expr& arg);

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

inline Expr pow(const Expr& base, int exponent) { return Expr::power(base, exponent); }
inline Expr sin(const Expr& e) { return Expr::function(FuncKind::Sin, e); }
inline Expr cos(const Expr& e) { return Expr::function(FuncKind::Cos, e); }
inline Expr exp(const Expr& e) { return Expr::function(FuncKind::Exp, e); }

std::set<SymbolId> free_symbols(const Expr& e);
bool contains(const Expr& e, const SymbolId& s);

/// Exact partial derivative; every symbol other than `x` is independent.
Expr differentiate(const Expr& e, const SymbolId& x);

using Bindings = std::map<SymbolId, Expr>;

/// Simultaneous substitution: replacements are not themselves rewritten,
/// so {a -> b, b -> a} swaps a and b.
Expr substitute(const Expr& e, const Bindings& bindings);

/// Repeats substitution until no bound symbol remains. Throws
/// InconsistentError when the bindings are cyclic.
Expr substitute_fixpoint(const Expr& e, const Bindings& bindings);

struct EvalOptions {
  /// |denominator| below this raises PoleError.
  double pole_epsilon = 1e-12;
};

using Point = std::map<SymbolId, double>;

double evaluate(const Expr& e, const Point& point, const EvalOptions& options = {});

/// Exact evaluation at a rational point. nullopt when the expression needs
/// a transcendental value or hits an exact zero denominator.
std::optional<Rational> evaluate_exact(const Expr& e, const std::map<SymbolId, Rational>& point);

/// Infix text accepted back by `parse` under the same table. Without a
/// table, canonical symbol spellings are used.
std::string to_string(const Expr& e, const SymbolTable* table = nullptr);
std::string to_latex(const Expr& e, const SymbolTable& table);

}  // namespace hjpath
