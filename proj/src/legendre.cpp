#include "hjpath/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "hjpath/errors.hpp"
#include "hjpath/linalg.hpp"
#include "hjpath/normal_form.hpp"

namespace hjpath {

namespace {

int total_degree(const NormalForm& nf) {
  auto deg = [](const Poly& p) {
    auto atoms = p.atoms();
    return p.degree_in(atoms);
  };
  return deg(nf.numerator()) + deg(nf.denominator());
}

// Pivot columns of one numeric sample, scanning columns in `order`.
template <class T, class IsZero>
std::set<int> pivot_columns(std::vector<std::vector<T>> m, const std::vector<int>& order, IsZero is_zero) {
  std::set<int> pivots;
  const std::size_t n = m.size();
  std::vector<bool> used(n, false);
  for (int c : order) {
    auto cc = static_cast<std::size_t>(c);
    std::size_t p = n;
    for (std::size_t i = 0; i < n; ++i)
      if (!used[i] && !is_zero(m[i][cc])) {
        p = i;
        break;
      }
    if (p == n) continue;
    used[p] = true;
    pivots.insert(c);
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i] || is_zero(m[i][cc])) continue;
      T f = m[i][cc] / m[p][cc];
      for (std::size_t j = 0; j < n; ++j) m[i][j] -= f * m[p][j];
    }
  }
  return pivots;
}

bool has_top_jet(const Expr& e, int k) {
  for (const auto& s : free_symbols(e))
    if (s.kind == SymbolKind::Jet && s.level >= k) return true;
  return false;
}

}  // namespace

bool RankPartition::is_regular(int index) const {
  return std::find(regular.begin(), regular.end(), index) != regular.end();
}

HessianMatrix hessian(const SystemSpec& spec) {
  const int n = spec.n(), k = spec.k();
  HessianMatrix h;
  h.a.assign(static_cast<std::size_t>(n), std::vector<Expr>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) {
    Expr di = differentiate(spec.lagrangian, SymbolId::jet(i + 1, k));
    for (int j = i; j < n; ++j) {
      Expr e = simplify(differentiate(di, SymbolId::jet(j + 1, k)));
      h.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = e;
      h.a[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = e;
    }
  }
  return h;
}

RankPartition generic_rank(const HessianMatrix& h, int samples, std::uint64_t seed) {
  const int n = h.n();
  RankPartition part;

  // Stable ascending-degree column order: heavier columns are pivoted last.
  std::vector<int> degree(static_cast<std::size_t>(n), 0);
  std::set<SymbolId> symbols;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Expr& e = h.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      degree[static_cast<std::size_t>(j)] = std::max(degree[static_cast<std::size_t>(j)], total_degree(normalize(e)));
      for (const auto& s : free_symbols(e)) symbols.insert(s);
    }
  part.pivot_order.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) part.pivot_order[static_cast<std::size_t>(j)] = j;
  std::stable_sort(part.pivot_order.begin(), part.pivot_order.end(),
                   [&](int a, int b) { return degree[static_cast<std::size_t>(a)] < degree[static_cast<std::size_t>(b)]; });

  auto rational_zero = [](const Rational& x) { return x == 0; };
  std::set<int> pivots;
  if (symbols.empty()) {
    part.exact = true;
    std::vector<std::vector<Rational>> m(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        auto v = evaluate_exact(h.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], {});
        if (!v) throw RankError("constant Hessian entry could not be evaluated exactly");
        m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = *v;
      }
    pivots = pivot_columns(m, part.pivot_order, rational_zero);
  } else {
    if (samples < 1) throw Error("rank samples must be at least 1");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> num(-99, 99), den(1, 99);
    std::vector<std::set<int>> found;
    for (int s = 0; s < samples; ++s) {
      std::optional<std::set<int>> piv;
      for (int attempt = 0; attempt < 50 && !piv; ++attempt) {
        std::map<SymbolId, Rational> pt;
        Point fpt;
        for (const auto& sym : symbols) {
          int a = 0;
          while (a == 0) a = num(rng);
          Rational v(a, den(rng));
          v.canonicalize();
          pt[sym] = v;
          fpt[sym] = v.get_d();
        }
        std::vector<std::vector<Rational>> m(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
        bool exact = true;
        for (int i = 0; i < n && exact; ++i)
          for (int j = 0; j < n && exact; ++j) {
            auto v = evaluate_exact(h.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], pt);
            if (v)
              m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = *v;
            else
              exact = false;
          }
        if (exact) {
          piv = pivot_columns(m, part.pivot_order, rational_zero);
        } else {
          std::vector<std::vector<double>> d(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
          double scale = 0;
          try {
            for (int i = 0; i < n; ++i)
              for (int j = 0; j < n; ++j) {
                double v = evaluate(h.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], fpt);
                d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
                scale = std::max(scale, std::abs(v));
              }
          } catch (const PoleError&) {
            continue;
          }
          const double tol = 1e-10 * std::max(scale, 1.0);
          piv = pivot_columns(d, part.pivot_order, [tol](double x) { return std::abs(x) <= tol; });
        }
        part.samples.push_back(pt);
      }
      if (!piv) throw RankError("could not find a regular sample point for the Hessian");
      found.push_back(*piv);
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < found.size(); ++i)
      if (found[i].size() > found[best].size()) best = i;
    for (const auto& f : found)
      if (f.size() != found[best].size())
        throw RankError("Hessian rank differs between sample points (" + std::to_string(f.size()) + " vs " +
                        std::to_string(found[best].size()) +
                        "); the degeneracy is not generic, stratify the system by hand");
    pivots = found[best];
  }

  part.rank = static_cast<int>(pivots.size());
  for (int j = 0; j < n; ++j) (pivots.count(j) ? part.regular : part.degenerate).push_back(j + 1);
  part.permutation = part.degenerate;
  part.permutation.insert(part.permutation.end(), part.regular.begin(), part.regular.end());
  return part;
}

std::vector<Expr> top_momenta(const SystemSpec& spec) {
  std::vector<Expr> out;
  for (int i = 1; i <= spec.n(); ++i)
    out.push_back(simplify(differentiate(spec.lagrangian, SymbolId::jet(i, spec.k()))));
  return out;
}

Bindings AccelerationSolution::bindings() const {
  Bindings b;
  for (const auto& [a, e] : w) b[SymbolId::jet(a, k)] = e;
  return b;
}

AccelerationSolution solve_top(const SystemSpec& spec, const RankPartition& partition) {
  const int k = spec.k();
  AccelerationSolution sol;
  sol.k = k;
  const auto& R = partition.regular;
  if (R.empty()) return sol;

  Bindings zero_top;
  for (int i = 1; i <= spec.n(); ++i) zero_top[SymbolId::jet(i, k)] = Expr(0);

  // Rows: sum_b A_ab x_b = p_(k-1)a - c_a - sum_mu A_amu q_mu^(k).
  SymMatrix m;
  for (int a : R) {
    Expr da = differentiate(spec.lagrangian, SymbolId::jet(a, k));
    std::vector<NormalForm> row;
    for (int b : R) row.push_back(normalize(differentiate(da, SymbolId::jet(b, k))));
    Expr rhs = Expr(SymbolId::momentum(k - 1, a)) - substitute(da, zero_top);
    for (int mu : partition.degenerate)
      rhs -= differentiate(da, SymbolId::jet(mu, k)) * Expr(SymbolId::jet(mu, k));
    row.push_back(normalize(rhs));
    m.push_back(std::move(row));
  }
  const int width = static_cast<int>(R.size());
  RrefResult rr = rref(std::move(m), width);
  if (rr.rank() < width)
    throw RankError("rank misdetection: the regular Hessian block is singular symbolically; "
                    "retry with more rank samples");
  for (int r = 0; r < width; ++r) {
    int col = rr.pivot_cols[static_cast<std::size_t>(r)];
    sol.w[R[static_cast<std::size_t>(col)]] = rr.rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(width)].to_expr();
  }

  Bindings b = sol.bindings();
  for (int a : R) {
    Expr check = Expr(SymbolId::momentum(k - 1, a)) - differentiate(spec.lagrangian, SymbolId::jet(a, k));
    if (!normalize(substitute(check, b)).is_zero())
      throw RankError("acceleration solution does not satisfy the momentum relation; retry with more rank samples");
  }
  return sol;
}

std::vector<PrimaryConstraint> primary_constraints(const SystemSpec& spec, const RankPartition& partition,
                                                   const AccelerationSolution& w) {
  const int k = spec.k();
  Bindings b = w.bindings();
  std::vector<PrimaryConstraint> out;
  for (int mu : partition.degenerate) {
    Expr phi = simplify(substitute(differentiate(spec.lagrangian, SymbolId::jet(mu, k)), b));
    if (has_top_jet(phi, k))
      throw RankError("primary constraint for coordinate " + std::to_string(mu) +
                      " still depends on accelerations: rank misdetection, retry with more rank samples");
    PrimaryConstraint c;
    c.index = mu;
    c.h = simplify(-phi);
    c.expr = simplify(Expr(SymbolId::momentum(k - 1, mu)) + c.h);
    out.push_back(c);
  }
  return out;
}

Expr canonical_hamiltonian(const SystemSpec& spec, const RankPartition& partition, const AccelerationSolution& w,
                           const std::vector<PrimaryConstraint>& constraints) {
  const int n = spec.n(), k = spec.k();
  std::vector<Expr> terms;
  for (int u = 0; u <= k - 2; ++u)
    for (int i = 1; i <= n; ++i) terms.push_back(Expr(SymbolId::momentum(u, i)) * Expr(SymbolId::jet(i, u + 1)));
  for (const auto& [a, wa] : w.w) terms.push_back(Expr(SymbolId::momentum(k - 1, a)) * wa);
  for (const auto& c : constraints) terms.push_back(-c.h * Expr(SymbolId::jet(c.index, k)));
  terms.push_back(-substitute(spec.lagrangian, w.bindings()));
  Expr h0 = simplify(Expr::sum(std::move(terms)));
  (void)partition;
  if (has_top_jet(h0, k))
    throw InconsistentError("canonical Hamiltonian still depends on degenerate accelerations: " + to_string(h0));
  return h0;
}

LegendreAnalysis legendre_transform(const SystemSpec& spec, int samples, std::uint64_t seed) {
  require_valid(spec);
  LegendreAnalysis out;
  out.hessian = hessian(spec);
  out.partition = generic_rank(out.hessian, samples, seed);
  out.momenta = top_momenta(spec);
  out.w = solve_top(spec, out.partition);
  out.primaries = primary_constraints(spec, out.partition, out.w);
  out.h0 = canonical_hamiltonian(spec, out.partition, out.w, out.primaries);
  return out;
}

}  // namespace hjpath
