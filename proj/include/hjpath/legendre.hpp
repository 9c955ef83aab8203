#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "hjpath/expr.hpp"
#include "hjpath/model.hpp"

namespace hjpath {

/// A_ij = d^2 L / dq_i^(k) dq_j^(k), entries normalized. Indices are 0-based
/// in storage; coordinate i+1 owns row i.
struct HessianMatrix {
  std::vector<std::vector<Expr>> a;
  int n() const { return static_cast<int>(a.size()); }
};

HessianMatrix hessian(const SystemSpec& spec);

struct RankPartition {
  int rank = 0;                  // n - r
  std::vector<int> regular;      // 1-based coordinate indices a
  std::vector<int> degenerate;   // 1-based coordinate indices mu
  std::vector<int> permutation;  // degenerate indices followed by regular ones
  std::vector<int> pivot_order;  // column scan order used by the elimination
  bool exact = false;            // constant Hessian, eliminated symbolically
  std::vector<std::map<SymbolId, Rational>> samples;

  int r() const { return static_cast<int>(degenerate.size()); }
  bool is_regular(int index) const;
};

/// Generic rank from `samples` random rational points drawn with `seed`.
/// Columns are scanned in ascending symbolic degree (stable), non-pivot
/// columns are the degenerate directions. Throws RankError when sample
/// ranks disagree (rank varies on a positive-measure set).
RankPartition generic_rank(const HessianMatrix& h, int samples = 5, std::uint64_t seed = 0);

/// p_(k-1)i = dL/dq_i^(k), normalized.
std::vector<Expr> top_momenta(const SystemSpec& spec);

/// q_a^(k) = W_a for every regular a, in terms of lower jets, top momenta
/// p_(k-1)b of regular b, degenerate accelerations and t.
struct AccelerationSolution {
  std::map<int, Expr> w;
  Bindings bindings() const;  // Jet(a, k) -> W_a
  int k = 1;
};

AccelerationSolution solve_top(const SystemSpec& spec, const RankPartition& partition);

struct PrimaryConstraint {
  int index = 0;  // degenerate coordinate mu
  Expr h;         // H_(k-1)mu so that the constraint reads p_(k-1)mu + h
  Expr expr;      // p_(k-1)mu + h
};

std::vector<PrimaryConstraint> primary_constraints(const SystemSpec& spec, const RankPartition& partition,
                                                   const AccelerationSolution& w);

Expr canonical_hamiltonian(const SystemSpec& spec, const RankPartition& partition, const AccelerationSolution& w,
                           const std::vector<PrimaryConstraint>& constraints);

struct LegendreAnalysis {
  HessianMatrix hessian;
  RankPartition partition;
  std::vector<Expr> momenta;  // top momenta p_(k-1)i as functions of jets
  AccelerationSolution w;
  std::vector<PrimaryConstraint> primaries;
  Expr h0;
};

/// Runs the whole transform on a validated spec.
LegendreAnalysis legendre_transform(const SystemSpec& spec, int samples = 5, std::uint64_t seed = 0);

}  // namespace hjpath
