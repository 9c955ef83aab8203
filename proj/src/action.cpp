#include "hjpath/action.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hjpath/errors.hpp"
#include "hjpath/numeric.hpp"

namespace hjpath {

ReducedPhaseSpace reduced_space(const ClosureResult& closure) {
  ReducedPhaseSpace out;
  auto promoted = closure.set.promoted();
  for (const auto& pr : closure.set.layout.pairs)
    if (std::find(promoted.begin(), promoted.end(), pr.coordinate) == promoted.end())
      out.coordinates.push_back(pr.coordinate);
  for (const auto& pr : closure.set.layout.pairs)
    if (!closure.solved.count(pr.momentum)) out.momenta.push_back(pr.momentum);
  return out;
}

ActionForm action_differential(const ClosureResult& closure, const ReducedPhaseSpace& reduced, bool force) {
  auto status = closure.report.status;
  if (status != ClosureStatus::ClosedFirstClass && !(force && status == ClosureStatus::NonInvolutive))
    throw InconsistentError(std::string("action differential needs a closed constraint set, status is ") +
                            status_name(status));
  Bindings to_params;
  for (const auto& q : closure.set.promoted()) to_params[q] = Expr(SymbolId::param(q.level, q.index));
  ActionForm form;
  for (const auto* g : closure.set.parametric()) {
    Expr h = g->reduced - Expr(*g->momentum);
    std::vector<Expr> terms{-h};
    for (const auto& p : reduced.momenta) terms.push_back(Expr(p) * differentiate(g->reduced, p));
    Expr coeff = simplify(substitute(Expr::sum(std::move(terms)), to_params));
    form.terms.push_back({*g->parameter, g->label, coeff});
  }
  return form;
}

PathIntegralExponent path_integral_exponent(const ActionForm& form, const ReducedPhaseSpace& reduced,
                                            const SymbolTable& table) {
  PathIntegralExponent out;
  out.terms = form.terms;
  out.measure = reduced.coordinates;
  out.measure.insert(out.measure.end(), reduced.momenta.begin(), reduced.momenta.end());

  std::string text, latex;
  for (const auto& t : form.terms) {
    if (t.coefficient.is_zero()) continue;
    std::string dname = "d" + table.print(t.parameter);
    text += (text.empty() ? "" : " + ") + std::string("(") + to_string(t.coefficient, &table) + ") " + dname;
    latex += (latex.empty() ? "" : " + ") + std::string("\\left(") + to_latex(t.coefficient, table) + "\\right)\\,d" +
             table.latex(t.parameter);
  }
  if (text.empty()) {
    text = "0";
    latex = "0";
  }
  std::string measure, measure_tex;
  for (const auto& s : out.measure) {
    measure += (measure.empty() ? "d" : " d") + table.print(s);
    measure_tex += (measure_tex.empty() ? "d" : "\\,d") + table.latex(s);
  }
  if (measure.empty()) {
    measure = "1";
    measure_tex = "1";
  }
  out.text = "exp(i Z), Z = int[" + text + "], measure: " + measure;
  out.latex = "\\int " + measure_tex + "\\;\\exp\\left(i\\int\\left[" + latex + "\\right]\\right)";
  return out;
}

QuadraticHamiltonian quadratic_hamiltonian(const SystemSpec& spec, const LegendreAnalysis& analysis) {
  if (spec.n() != 1 || spec.k() != 1)
    throw UnsupportedError("numeric propagators need one coordinate and first order");
  if (analysis.partition.r() != 0) throw UnsupportedError("numeric propagators need a regular Lagrangian");
  const SymbolId q = SymbolId::jet(1, 0), p = SymbolId::momentum(0, 1);
  const Expr& h = analysis.h0;
  for (const auto& s : free_symbols(h))
    if (s != q && s != p) throw UnsupportedError("Hamiltonian depends on " + s.canonical_name());
  auto constant = [&](const Expr& e) -> double {
    Expr v = simplify(e);
    if (!v.is_constant()) throw UnsupportedError("Hamiltonian is not quadratic with constant coefficients");
    return v.value().get_d();
  };
  Bindings zero{{q, Expr(0)}, {p, Expr(0)}};
  Expr hp = differentiate(h, p), hq = differentiate(h, q);
  QuadraticHamiltonian out;
  Expr a = simplify(differentiate(hp, p) / Expr(2));
  Expr b = simplify(differentiate(hp, q));
  Expr c = simplify(differentiate(hq, q) / Expr(2));
  out.a = constant(a);
  out.b = constant(b);
  out.c = constant(c);
  out.d = constant(substitute(hp, zero));
  out.e = constant(substitute(hq, zero));
  out.f = constant(substitute(h, zero));
  Expr rebuilt = a * Expr(p) * Expr(p) + b * Expr(q) * Expr(p) + c * Expr(q) * Expr(q) +
                 simplify(substitute(hp, zero)) * Expr(p) + simplify(substitute(hq, zero)) * Expr(q) +
                 simplify(substitute(h, zero));
  if (!equivalent(rebuilt, h)) throw UnsupportedError("Hamiltonian is not quadratic in (q, p)");
  if (!(out.a > 0)) throw UnsupportedError("kinetic coefficient must be positive");
  return out;
}

PropagatorResult propagator_quadratic(const QuadraticHamiltonian& hq, double x0, double x1, double T, int slices,
                                      double caustic_tol) {
  using std::numbers::pi;
  if (slices < 2) throw Error("propagator needs at least 2 slices");
  if (!(T > 0)) throw Error("propagation time must be positive");
  const int N = slices;
  const double eps = T / N;
  const double A = hq.a;

  // One slice between x (left) and y (right), midpoint q = (x+y)/2, after
  // the exact momentum integral: (alpha y + beta x + gamma)^2/(4 eps A)
  // - eps (C q^2 + E q + F).
  const double alpha = 1 - eps * hq.b / 2, beta = -(1 + eps * hq.b / 2), gamma = -eps * hq.d;
  const double k4 = 1.0 / (4 * eps * A);
  const double cxx = beta * beta * k4 - eps * hq.c / 4;
  const double cyy = alpha * alpha * k4 - eps * hq.c / 4;
  const double cxy = 2 * alpha * beta * k4 - eps * hq.c / 2;
  const double cx = 2 * beta * gamma * k4 - eps * hq.e / 2;
  const double cy = 2 * alpha * gamma * k4 - eps * hq.e / 2;
  const double c0 = gamma * gamma * k4 - eps * hq.f;

  // S(q) = 1/2 q^T H q + g^T q + c over the N-1 interior nodes.
  const int m = N - 1;
  std::vector<double> diag(static_cast<std::size_t>(m), 2 * (cxx + cyy));
  std::vector<double> off(static_cast<std::size_t>(std::max(m - 1, 0)), cxy);
  std::vector<double> g(static_cast<std::size_t>(m), cx + cy);
  g.front() += cxy * x0;
  g.back() += cxy * x1;
  double c = N * c0 + cxx * x0 * x0 + cx * x0 + cyy * x1 * x1 + cy * x1;

  // LDL^T; pivots give the determinant and the inertia. Each pivot is
  // compared with its free-particle counterpart (i+2)/((i+1) 2 A eps) so
  // that the free case accumulates no rounding.
  std::vector<double> d(static_cast<std::size_t>(m)), l(static_cast<std::size_t>(std::max(m - 1, 0)));
  double log_ratio = 0;
  int negative = 0;
  for (int i = 0; i < m; ++i) {
    auto ii = static_cast<std::size_t>(i);
    d[ii] = diag[ii] - (i > 0 ? l[ii - 1] * off[ii - 1] : 0.0);
    if (d[ii] == 0.0 || !std::isfinite(d[ii])) throw NumericError("caustic: the slice determinant vanishes");
    if (i + 1 < m) l[ii] = off[ii] / d[ii];
    const double free_pivot = (i + 2.0) / ((i + 1.0) * 2 * A * eps);
    log_ratio += std::log(std::abs(d[ii] / free_pivot));
    if (d[ii] < 0) ++negative;
  }
  const double ratio = (negative % 2 ? -1.0 : 1.0) * std::exp(log_ratio);
  const double omega2 = std::abs(4 * hq.a * hq.c - hq.b * hq.b);
  if (std::abs(ratio) < caustic_tol * eps * eps * std::max(1.0, omega2))
    throw NumericError("caustic: slice determinant ratio " + std::to_string(ratio) +
                       " vanishes at this propagation time");

  // Stationary point: H q = -g, through the same factorization.
  std::vector<double> y(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    auto ii = static_cast<std::size_t>(i);
    y[ii] = -g[ii] - (i > 0 ? l[ii - 1] * y[ii - 1] : 0.0);
  }
  std::vector<double> qs(static_cast<std::size_t>(m));
  for (int i = m - 1; i >= 0; --i) {
    auto ii = static_cast<std::size_t>(i);
    qs[ii] = y[ii] / d[ii] - (i + 1 < m ? l[ii] * qs[ii + 1] : 0.0);
  }
  double s_cl = c;
  for (int i = 0; i < m; ++i) s_cl += 0.5 * g[static_cast<std::size_t>(i)] * qs[static_cast<std::size_t>(i)];

  PropagatorResult out;
  out.slices = N;
  out.classical_action = s_cl;
  out.determinant_ratio = ratio;
  // The free-particle modulus is exactly 1/sqrt(4 pi A T).
  out.modulus = std::exp(-0.5 * std::log(4 * pi * A * T) - 0.5 * log_ratio);
  double phase = s_cl - N * pi / 4 + (pi / 4) * ((m - negative) - negative);
  phase = std::remainder(phase, 2 * pi);
  if (phase <= -pi) phase += 2 * pi;
  out.phase = phase;
  return out;
}

PropagatorResult propagator_quadratic(const SystemSpec& spec, double x0, double x1, double T, int slices) {
  auto an = legendre_transform(spec);
  auto hq = quadratic_hamiltonian(spec, an);
  PropagatorResult full = propagator_quadratic(hq, x0, x1, T, slices);
  if (slices >= 4) {
    try {
      full.convergence = std::abs(full.modulus - propagator_quadratic(hq, x0, x1, T, slices / 2).modulus);
    } catch (const NumericError&) {
      full.convergence = std::nan("");
    }
  }
  return full;
}

double classical_action(const Trajectory& traj, const ActionForm& form) {
  if (traj.size() < 2) return 0.0;
  std::vector<std::size_t> cols;
  for (const auto& t : form.terms) {
    auto it = std::find(traj.parameters.begin(), traj.parameters.end(), t.parameter);
    if (it == traj.parameters.end())
      throw Error("trajectory has no parameter " + t.parameter.canonical_name() + " required by the action form");
    cols.push_back(static_cast<std::size_t>(it - traj.parameters.begin()));
  }
  double z = 0;
  std::vector<double> prev(form.terms.size());
  Point p0 = traj.point(0);
  for (std::size_t b = 0; b < form.terms.size(); ++b) prev[b] = evaluate(form.terms[b].coefficient, p0);
  for (std::size_t j = 1; j < traj.size(); ++j) {
    Point pj = traj.point(j);
    for (std::size_t b = 0; b < form.terms.size(); ++b) {
      double cur = evaluate(form.terms[b].coefficient, pj);
      double dt = traj.params[j][cols[b]] - traj.params[j - 1][cols[b]];
      z += 0.5 * (prev[b] + cur) * dt;
      prev[b] = cur;
    }
  }
  return z;
}

}  // namespace hjpath
