// Shared helpers for the unit tests: seeded random expression generators
// and small numeric oracles that stay independent of the library paths
// they check.
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "hjpath/expr.hpp"
#include "hjpath/parser.hpp"
#include "hjpath/symbol.hpp"

namespace hjtest {

using namespace hjpath;

/// Random small expressions over a fixed symbol pool.
class ExprGen {
 public:
  ExprGen(std::vector<SymbolId> pool, std::uint64_t seed, bool transcendental = true)
      : pool_(std::move(pool)), rng_(seed), transcendental_(transcendental) {}

  Expr operator()(int depth = 3) { return gen(depth); }

  std::mt19937_64& rng() { return rng_; }
  const std::vector<SymbolId>& pool() const { return pool_; }

  Point random_point(double lo = -2.0, double hi = 2.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Point p;
    for (const auto& s : pool_) p[s] = u(rng_);
    return p;
  }

 private:
  std::vector<SymbolId> pool_;
  std::mt19937_64 rng_;
  bool transcendental_;

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  Expr leaf() {
    if (pick(3) == 0) return Expr(Rational(pick(7) - 3, pick(3) + 1));
    return Expr(pool_[static_cast<std::size_t>(pick(static_cast<int>(pool_.size())))]);
  }

  Expr gen(int depth) {
    if (depth <= 0) return leaf();
    switch (pick(transcendental_ ? 7 : 6)) {
      case 0:
      case 1:
        return gen(depth - 1) + gen(depth - 1);
      case 2:
      case 3:
        return gen(depth - 1) * gen(depth - 1);
      case 4:
        return gen(depth - 1) - gen(depth - 1);
      case 5:
        return pow(gen(depth - 1), pick(3) + 1);
      default: {
        Expr a = gen(depth - 2);
        switch (pick(3)) {
          case 0:
            return sin(a);
          case 1:
            return cos(a);
          default:
            return exp(a);
        }
      }
    }
  }
};

inline bool close_rel(double a, double b, double rel, double abs_floor = 0.0) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)) + abs_floor;
}

/// Central finite difference of f along symbol x.
template <class F>
double central_difference(F&& f, Point p, const SymbolId& x, double h) {
  const double x0 = p.at(x);
  p[x] = x0 + h;
  const double fp = f(p);
  p[x] = x0 - h;
  const double fm = f(p);
  return (fp - fm) / (2 * h);
}

}  // namespace hjtest
