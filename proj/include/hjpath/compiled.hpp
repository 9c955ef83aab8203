#pragma once

#include <map>
#include <vector>

#include "hjpath/expr.hpp"

namespace hjpath {

/// Expression flattened into a postfix program over numbered slots, for
/// evaluation in integrator inner loops.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  /// Every free symbol of `e` must have a slot; throws Error otherwise.
  CompiledExpr(const Expr& e, const std::map<SymbolId, int>& slots, EvalOptions options = {});

  /// Evaluates with slot values `x`. Throws PoleError like `evaluate`.
  double operator()(const double* x) const;
  double operator()(const std::vector<double>& x) const { return (*this)(x.data()); }

  bool is_zero() const { return ops_.size() == 1 && ops_[0].code == Code::Const && ops_[0].value == 0.0; }

 private:
  enum class Code : std::uint8_t { Const, Load, Add, Mul, Pow, Sin, Cos, Exp };
  struct Op {
    Code code;
    double value = 0;
    int arg = 0;  // slot, operand count or exponent
  };
  std::vector<Op> ops_;
  double pole_epsilon_ = 1e-12;
  std::size_t depth_ = 0;

  void emit(const Expr& e, const std::map<SymbolId, int>& slots, std::size_t& depth, std::size_t& max_depth);
};

}  // namespace hjpath
