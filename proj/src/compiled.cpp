#include "hjpath/compiled.hpp"

#include <cmath>

#include "hjpath/errors.hpp"

namespace hjpath {

CompiledExpr::CompiledExpr(const Expr& e, const std::map<SymbolId, int>& slots, EvalOptions options)
    : pole_epsilon_(options.pole_epsilon) {
  std::size_t depth = 0, max_depth = 0;
  emit(e, slots, depth, max_depth);
  depth_ = max_depth;
}

void CompiledExpr::emit(const Expr& e, const std::map<SymbolId, int>& slots, std::size_t& depth,
                        std::size_t& max_depth) {
  auto push = [&](Op op) {
    ops_.push_back(op);
    if (op.code == Code::Const || op.code == Code::Load) max_depth = std::max(max_depth, ++depth);
  };
  switch (e.kind()) {
    case ExprKind::Const:
      push({Code::Const, e.value().get_d(), 0});
      return;
    case ExprKind::Symbol: {
      auto it = slots.find(e.symbol());
      if (it == slots.end()) throw Error("no value slot for symbol " + e.symbol().canonical_name());
      push({Code::Load, 0, it->second});
      return;
    }
    case ExprKind::Add:
    case ExprKind::Mul: {
      for (const auto& a : e.args()) emit(a, slots, depth, max_depth);
      int n = static_cast<int>(e.args().size());
      ops_.push_back({e.kind() == ExprKind::Add ? Code::Add : Code::Mul, 0, n});
      depth -= static_cast<std::size_t>(n - 1);
      return;
    }
    case ExprKind::Pow:
      emit(e.base(), slots, depth, max_depth);
      ops_.push_back({Code::Pow, 0, e.exponent()});
      return;
    case ExprKind::Func:
      emit(e.args().front(), slots, depth, max_depth);
      ops_.push_back({e.func() == FuncKind::Sin ? Code::Sin : e.func() == FuncKind::Cos ? Code::Cos : Code::Exp, 0, 0});
      return;
  }
}

double CompiledExpr::operator()(const double* x) const {
  if (ops_.empty()) return 0.0;
  double stack_small[32];
  std::vector<double> stack_big;
  double* st = stack_small;
  if (depth_ > 32) {
    stack_big.resize(depth_);
    st = stack_big.data();
  }
  std::size_t sp = 0;
  for (const auto& op : ops_) {
    switch (op.code) {
      case Code::Const:
        st[sp++] = op.value;
        break;
      case Code::Load:
        st[sp++] = x[op.arg];
        break;
      case Code::Add: {
        double s = 0;
        for (int i = 0; i < op.arg; ++i) s += st[--sp];
        st[sp++] = s;
        break;
      }
      case Code::Mul: {
        double s = 1;
        for (int i = 0; i < op.arg; ++i) s *= st[--sp];
        st[sp++] = s;
        break;
      }
      case Code::Pow: {
        double b = st[sp - 1];
        if (op.arg < 0 && std::abs(b) < pole_epsilon_) throw PoleError("pole: division by a value near zero");
        st[sp - 1] = op.arg == 2 ? b * b : op.arg == -1 ? 1.0 / b : std::pow(b, op.arg);
        break;
      }
      case Code::Sin:
        st[sp - 1] = std::sin(st[sp - 1]);
        break;
      case Code::Cos:
        st[sp - 1] = std::cos(st[sp - 1]);
        break;
      case Code::Exp:
        st[sp - 1] = std::exp(st[sp - 1]);
        break;
    }
  }
  return st[0];
}

}  // namespace hjpath
