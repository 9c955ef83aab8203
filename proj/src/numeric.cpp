#include "hjpath/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "hjpath/compiled.hpp"
#include "hjpath/errors.hpp"
#include "hjpath/normal_form.hpp"
#include "hjpath/parser.hpp"

namespace hjpath {

// ---------------------------------------------------------------- curves

ParamCurve ParamCurve::constant(double value) {
  ParamCurve c;
  c.kind_ = Kind::Constant;
  c.coeffs_ = {value};
  return c;
}

ParamCurve ParamCurve::polynomial(std::vector<double> coefficients) {
  ParamCurve c;
  c.kind_ = Kind::Polynomial;
  if (coefficients.empty()) coefficients.push_back(0.0);
  c.coeffs_ = std::move(coefficients);
  return c;
}

ParamCurve ParamCurve::parse(const std::string& text) {
  SymbolTable table;
  table.set_phase_names(false);
  table.add_aux("tau");
  Expr e = hjpath::parse(text, table);
  NormalForm nf = normalize(e);
  if (!nf.is_polynomial()) throw ParseError("curve '" + text + "' is not a polynomial in tau");
  Atom tau = Atom::from_symbol(SymbolId::aux("tau"));
  for (const auto& a : nf.numerator().atoms())
    if (!(a == tau)) throw ParseError("curve '" + text + "' may only use tau");
  Rational scale = Rational(1) / nf.denominator().constant_value();
  std::vector<double> coeffs;
  for (const auto& c : nf.numerator().coefficients(tau)) {
    Rational v = c.is_zero() ? Rational(0) : c.constant_value() * scale;
    coeffs.push_back(v.get_d());
  }
  if (coeffs.size() <= 1) return constant(coeffs.empty() ? 0.0 : coeffs[0]);
  return polynomial(std::move(coeffs));
}

ParamCurve ParamCurve::samples(double tau0, double step, std::vector<double> values) {
  if (values.size() < 2 || !(step > 0)) throw Error("sampled curve needs at least two values and a positive step");
  ParamCurve c;
  c.kind_ = Kind::Samples;
  c.tau0_ = tau0;
  c.step_ = step;
  c.values_ = std::move(values);
  return c;
}

double ParamCurve::value(double tau) const {
  if (kind_ == Kind::Samples) {
    double u = (tau - tau0_) / step_;
    auto j = static_cast<std::size_t>(std::clamp(std::floor(u), 0.0, static_cast<double>(values_.size() - 2)));
    double f = u - static_cast<double>(j);
    return values_[j] + f * (values_[j + 1] - values_[j]);
  }
  double v = 0;
  for (std::size_t j = coeffs_.size(); j-- > 0;) v = v * tau + coeffs_[j];
  return v;
}

double ParamCurve::rate(double tau) const {
  if (kind_ == Kind::Samples) {
    double u = (tau - tau0_) / step_;
    auto j = static_cast<std::size_t>(std::clamp(std::floor(u), 0.0, static_cast<double>(values_.size() - 2)));
    return (values_[j + 1] - values_[j]) / step_;
  }
  double v = 0;
  for (std::size_t j = coeffs_.size(); j-- > 1;) v = v * tau + static_cast<double>(j) * coeffs_[j];
  return v;
}

std::string ParamCurve::describe() const {
  char buf[64];
  switch (kind_) {
    case Kind::Constant:
      std::snprintf(buf, sizeof buf, "%.17g", coeffs_[0]);
      return buf;
    case Kind::Polynomial: {
      std::string s;
      for (std::size_t j = 0; j < coeffs_.size(); ++j) {
        if (coeffs_[j] == 0) continue;
        std::snprintf(buf, sizeof buf, "%.17g", coeffs_[j]);
        if (!s.empty()) s += " + ";
        s += buf;
        if (j >= 1) s += "*tau";
        if (j >= 2) s += "^" + std::to_string(j);
      }
      return s.empty() ? "0" : s;
    }
    case Kind::Samples:
      return "samples(" + std::to_string(values_.size()) + ")";
  }
  return {};
}

ParamCurve ParamCurve::anchored(double v) const {
  ParamCurve c = *this;
  double shift = v - value(0.0);
  if (kind_ == Kind::Samples)
    for (auto& x : c.values_) x += shift;
  else
    c.coeffs_[0] += shift;
  return c;
}

// ------------------------------------------------------------ trajectory

std::vector<double> Trajectory::column(const SymbolId& s) const {
  std::vector<double> out;
  out.reserve(size());
  if (auto it = std::find(phase.begin(), phase.end(), s); it != phase.end()) {
    auto c = static_cast<std::size_t>(it - phase.begin());
    for (const auto& row : x) out.push_back(row[c]);
    return out;
  }
  if (auto it = std::find(parameters.begin(), parameters.end(), s); it != parameters.end()) {
    auto c = static_cast<std::size_t>(it - parameters.begin());
    for (const auto& row : params) out.push_back(row[c]);
    return out;
  }
  throw Error("trajectory has no column for " + s.canonical_name());
}

Point Trajectory::point(std::size_t j) const {
  Point p;
  for (std::size_t i = 0; i < phase.size(); ++i) p[phase[i]] = x[j][i];
  for (std::size_t i = 0; i < parameters.size(); ++i) p[parameters[i]] = params[j][i];
  return p;
}

// ------------------------------------------------------------ projection

Point project_initial(const ClosureResult& closure, const Point& guess, double tol) {
  Point pt = guess;
  for (const auto& s : closure.set.layout.symbols()) pt.try_emplace(s, 0.0);
  pt.try_emplace(SymbolId::time(), 0.0);
  for (const auto& [p, rhs] : closure.solved) pt[p] = evaluate(rhs, pt);
  for (const auto* g : closure.set.constraints()) {
    if (g->parametric()) continue;
    double v = evaluate(g->expr, pt);
    if (std::abs(v) > tol)
      throw InconsistentError("initial data violate condition " + g->label + " = " + to_string(g->expr) +
                              " (value " + std::to_string(v) + ")");
  }
  return pt;
}

// ----------------------------------------------------------- integration

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Trajectory integrate(const ClosureResult& closure, const TotalDifferentialSystem& system, const ActionForm& form,
                     const CurveSet& curves, const Point& init, double dtau, double t_end) {
  if (!(dtau > 0) || !(t_end > 0)) throw Error("step and end time must be positive");
  const auto steps = static_cast<long long>(std::llround(t_end / dtau));
  if (steps < 1) throw Error("end time shorter than one step");
  const double h = t_end / static_cast<double>(steps);

  const std::size_t D = system.phase.size();
  const std::size_t P = system.parameters.size();
  std::map<SymbolId, int> slots;
  for (std::size_t i = 0; i < D; ++i) slots[system.phase[i]] = static_cast<int>(i);
  const int time_slot = static_cast<int>(D);
  slots[SymbolId::time()] = time_slot;
  for (const auto& prm : system.parameters)
    if (prm.kind == SymbolKind::Param) slots[prm] = slots.at(SymbolId::jet(prm.index, prm.level));

  for (const auto& [sym, curve] : curves) {
    (void)curve;
    if (std::find(system.parameters.begin(), system.parameters.end(), sym) == system.parameters.end())
      throw Error("no parameter named " + sym.canonical_name() + " in this system");
  }

  // Which parameters are free and which follow consistency rates.
  std::vector<int> determined(P, -1);
  for (std::size_t r = 0; r < system.rates.size(); ++r)
    for (std::size_t j = 0; j < P; ++j)
      if (system.parameters[j] == system.rates[r].parameter) determined[j] = static_cast<int>(r);
  std::vector<std::vector<std::pair<std::size_t, CompiledExpr>>> rate_terms(P);
  for (std::size_t j = 0; j < P; ++j) {
    if (determined[j] < 0) continue;
    if (curves.count(system.parameters[j]))
      throw Error("parameter " + system.parameters[j].canonical_name() + " is fixed by the constraints");
    for (const auto& [nu, e] : system.rates[static_cast<std::size_t>(determined[j])].coeff) {
      auto it = std::find(system.parameters.begin(), system.parameters.end(), nu);
      rate_terms[j].emplace_back(static_cast<std::size_t>(it - system.parameters.begin()), CompiledExpr(e, slots));
    }
  }

  // Initial state; free promoted coordinates start on their curves.
  std::vector<double> y(D + 1, 0.0);
  for (std::size_t i = 0; i < D; ++i) {
    auto it = init.find(system.phase[i]);
    y[i] = it == init.end() ? 0.0 : it->second;
  }
  std::vector<ParamCurve> curve(P, ParamCurve::constant(0.0));
  for (std::size_t j = 0; j < P; ++j) {
    const SymbolId& prm = system.parameters[j];
    auto it = curves.find(prm);
    if (prm.kind == SymbolKind::Time) {
      double t0 = init.count(prm) ? init.at(prm) : 0.0;
      curve[j] = it != curves.end() ? it->second : ParamCurve::polynomial({t0, 1.0});
    } else if (determined[j] < 0) {
      auto slot = static_cast<std::size_t>(slots.at(prm));
      if (it != curves.end()) {
        curve[j] = it->second;
        y[slot] = curve[j].value(0.0);
      } else {
        curve[j] = ParamCurve::constant(y[slot]);
      }
    }
  }

  std::vector<std::vector<CompiledExpr>> coeff(D);
  std::vector<std::vector<std::size_t>> nonzero(D);
  for (std::size_t i = 0; i < D; ++i)
    for (std::size_t j = 0; j < P; ++j) {
      coeff[i].emplace_back(system.coeff[i][j], slots);
      if (!system.coeff[i][j].is_zero()) nonzero[i].push_back(j);
    }
  std::vector<std::pair<std::size_t, CompiledExpr>> zterms;
  for (const auto& t : form.terms) {
    auto it = std::find(system.parameters.begin(), system.parameters.end(), t.parameter);
    if (it == system.parameters.end()) throw Error("action form does not match the equations of motion");
    if (!t.coefficient.is_zero())
      zterms.emplace_back(static_cast<std::size_t>(it - system.parameters.begin()), CompiledExpr(t.coefficient, slots));
  }

  std::vector<double> buf(D + 1), rates(P);
  auto deriv = [&](double tau, const std::vector<double>& s, std::vector<double>& ds) {
    for (std::size_t i = 0; i < D; ++i) buf[i] = s[i];
    std::size_t tj = 0;
    for (std::size_t j = 0; j < P; ++j)
      if (system.parameters[j].kind == SymbolKind::Time) tj = j;
    buf[D] = curve[tj].value(tau);
    for (std::size_t j = 0; j < P; ++j)
      if (determined[j] < 0) rates[j] = curve[j].rate(tau);
    for (std::size_t j = 0; j < P; ++j) {
      if (determined[j] < 0) continue;
      double r = 0;
      for (const auto& [nu, e] : rate_terms[j]) r += e(buf) * rates[nu];
      rates[j] = r;
    }
    for (std::size_t i = 0; i < D; ++i) {
      double v = 0;
      for (std::size_t j : nonzero[i]) v += coeff[i][j](buf) * rates[j];
      ds[i] = v;
    }
    double dz = 0;
    for (const auto& [j, e] : zterms) dz += e(buf) * rates[j];
    ds[D] = dz;
  };

  Trajectory traj;
  traj.phase = system.phase;
  traj.parameters = system.parameters;
  auto record = [&](double tau) {
    traj.tau.push_back(tau);
    traj.x.emplace_back(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(D));
    std::vector<double> pv(P);
    for (std::size_t j = 0; j < P; ++j) {
      const SymbolId& prm = system.parameters[j];
      pv[j] = (prm.kind == SymbolKind::Param && determined[j] >= 0) ? y[static_cast<std::size_t>(slots.at(prm))]
                                                                     : curve[j].value(tau);
    }
    traj.params.push_back(std::move(pv));
    traj.z.push_back(y[D]);
  };

  const std::size_t S = y.size();
  std::vector<double> k1(S), k2(S), k3(S), k4(S), tmp(S);
  record(0.0);
  for (long long n = 0; n < steps; ++n) {
    const double tau = static_cast<double>(n) * h;
    try {
      deriv(tau, y, k1);
      for (std::size_t i = 0; i < S; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
      deriv(tau + 0.5 * h, tmp, k2);
      for (std::size_t i = 0; i < S; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
      deriv(tau + 0.5 * h, tmp, k3);
      for (std::size_t i = 0; i < S; ++i) tmp[i] = y[i] + h * k3[i];
      deriv(tau + h, tmp, k4);
    } catch (const PoleError& e) {
      throw NumericError(std::string(e.what()) + "; last good tau = " + fmt(tau));
    }
    for (std::size_t i = 0; i < S; ++i) y[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    for (double v : y)
      if (!std::isfinite(v)) throw NumericError("integration blew up; last good tau = " + fmt(tau));
    record(static_cast<double>(n + 1) * h);
  }
  (void)closure;
  return traj;
}

// --------------------------------------------------------------- oracles

std::vector<double> el_residual(const SystemSpec& spec, const Trajectory& traj) {
  const int n = spec.n(), k = spec.k();
  const int levels = 2 * k + 1;
  std::map<SymbolId, int> slots;
  for (int i = 1; i <= n; ++i)
    for (int m = 0; m < levels; ++m) slots[SymbolId::jet(i, m)] = (i - 1) * levels + m;
  const int time_slot = n * levels;
  slots[SymbolId::time()] = time_slot;

  std::vector<CompiledExpr> el;
  for (int i = 1; i <= n; ++i) {
    std::vector<Expr> terms;
    for (int s = 0; s <= k; ++s) {
      Expr d = differentiate(spec.lagrangian, SymbolId::jet(i, s));
      for (int r = 0; r < s; ++r) d = total_time_derivative(d, 2 * k);
      terms.push_back(s % 2 ? -d : d);
    }
    el.emplace_back(simplify(Expr::sum(std::move(terms))), slots);
  }

  const std::size_t S = traj.size();
  const int W = (k + 2) / 2;  // ceil((k + 1) / 2)
  if (S < static_cast<std::size_t>(2 * W + 1))
    throw NumericError("grid too coarse: the finite-difference stencil exceeds the trajectory window");
  std::vector<double> t = traj.column(SymbolId::time());
  const double h = t[1] - t[0];
  if (!(h > 0)) throw NumericError("time must increase along the trajectory for the Euler-Lagrange oracle");
  for (std::size_t j = 1; j < S; ++j)
    if (std::abs((t[j] - t[j - 1]) - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw NumericError("the Euler-Lagrange oracle needs a uniform time grid");

  // derivs[i][d] = d-th derivative of q_i^(k-1).
  std::vector<std::vector<std::vector<double>>> derivs(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    std::vector<double> base = traj.column(SymbolId::jet(i, k - 1));
    auto& di = derivs[static_cast<std::size_t>(i - 1)];
    di.resize(static_cast<std::size_t>(k + 2));
    for (int d = 1; d <= k + 1; ++d) {
      std::vector<double> f = base;
      if (d % 2) {
        std::vector<double> g(S, 0.0);
        for (std::size_t j = 1; j + 1 < S; ++j) g[j] = (f[j + 1] - f[j - 1]) / (2 * h);
        f = std::move(g);
      }
      for (int r = 0; r < d / 2; ++r) {
        std::vector<double> g(S, 0.0);
        for (std::size_t j = 1; j + 1 < S; ++j) g[j] = (f[j + 1] - 2 * f[j] + f[j - 1]) / (h * h);
        f = std::move(g);
      }
      di[static_cast<std::size_t>(d)] = std::move(f);
    }
  }

  std::vector<std::vector<double>> low(static_cast<std::size_t>(n * k));
  for (int i = 1; i <= n; ++i)
    for (int s = 0; s < k; ++s) low[static_cast<std::size_t>((i - 1) * k + s)] = traj.column(SymbolId::jet(i, s));

  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  std::vector<double> buf(static_cast<std::size_t>(time_slot + 1));
  for (std::size_t j = static_cast<std::size_t>(W); j + static_cast<std::size_t>(W) < S; ++j) {
    for (int i = 1; i <= n; ++i)
      for (int m = 0; m < levels; ++m) {
        double v = m < k ? low[static_cast<std::size_t>((i - 1) * k + m)][j]
                         : derivs[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(m - k + 1)][j];
        buf[static_cast<std::size_t>((i - 1) * levels + m)] = v;
      }
    buf[static_cast<std::size_t>(time_slot)] = t[j];
    for (int i = 0; i < n; ++i)
      out[static_cast<std::size_t>(i)] = std::max(out[static_cast<std::size_t>(i)], std::abs(el[static_cast<std::size_t>(i)](buf)));
  }
  return out;
}

double constraint_drift(const ClosureResult& closure, const Trajectory& traj) {
  std::map<SymbolId, int> slots;
  for (std::size_t i = 0; i < traj.phase.size(); ++i) slots[traj.phase[i]] = static_cast<int>(i);
  const int time_slot = static_cast<int>(traj.phase.size());
  slots[SymbolId::time()] = time_slot;
  std::vector<CompiledExpr> cons;
  for (const auto* g : closure.set.constraints()) cons.emplace_back(g->expr, slots);
  if (cons.empty()) return 0.0;
  std::vector<double> t = traj.column(SymbolId::time());
  std::vector<double> buf(traj.phase.size() + 1);
  double drift = 0;
  for (std::size_t j = 0; j < traj.size(); ++j) {
    std::copy(traj.x[j].begin(), traj.x[j].end(), buf.begin());
    buf[static_cast<std::size_t>(time_slot)] = t[j];
    for (const auto& c : cons) drift = std::max(drift, std::abs(c(buf)));
  }
  return drift;
}

double lagrangian_integral(const SystemSpec& spec, const TotalDifferentialSystem& system, const Trajectory& traj) {
  const std::size_t S = traj.size();
  if (S < 2) return 0.0;
  const int n = spec.n(), k = spec.k();
  const std::size_t D = traj.phase.size(), P = traj.parameters.size();
  if (system.phase != traj.phase || system.parameters != traj.parameters)
    throw Error("trajectory does not belong to these equations of motion");

  std::map<SymbolId, int> slots;
  for (std::size_t i = 0; i < D; ++i) slots[traj.phase[i]] = static_cast<int>(i);
  slots[SymbolId::time()] = static_cast<int>(D);
  for (const auto& prm : traj.parameters)
    if (prm.kind == SymbolKind::Param) slots[prm] = slots.at(SymbolId::jet(prm.index, prm.level));
  // Top jets get their own slots after t.
  for (int i = 1; i <= n; ++i) slots[SymbolId::jet(i, k)] = static_cast<int>(D) + i;
  CompiledExpr lag(spec.lagrangian, slots);

  std::vector<std::vector<CompiledExpr>> vel(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    auto row = static_cast<std::size_t>(std::find(traj.phase.begin(), traj.phase.end(), SymbolId::jet(i, k - 1)) -
                                        traj.phase.begin());
    for (std::size_t j = 0; j < P; ++j) vel[static_cast<std::size_t>(i - 1)].emplace_back(system.coeff[row][j], slots);
  }
  std::size_t tcol = 0;
  for (std::size_t j = 0; j < P; ++j)
    if (traj.parameters[j].kind == SymbolKind::Time) tcol = j;

  // Parameter rates per unit tau: central inside, second-order one-sided at the ends.
  auto rate = [&](std::size_t r, std::size_t j) {
    const double h = traj.tau[1] - traj.tau[0];
    const auto& pr = traj.params;
    if (S == 2) return (pr[1][j] - pr[0][j]) / h;
    if (r == 0) return (-3 * pr[0][j] + 4 * pr[1][j] - pr[2][j]) / (2 * h);
    if (r == S - 1) return (3 * pr[S - 1][j] - 4 * pr[S - 2][j] + pr[S - 3][j]) / (2 * h);
    return (pr[r + 1][j] - pr[r - 1][j]) / (2 * h);
  };

  std::vector<double> values(S), t(S), buf(D + 1 + static_cast<std::size_t>(n));
  for (std::size_t r = 0; r < S; ++r) {
    std::copy(traj.x[r].begin(), traj.x[r].end(), buf.begin());
    t[r] = traj.params[r][tcol];
    buf[D] = t[r];
    double dt = rate(r, tcol);
    if (dt == 0.0) throw NumericError("t is frozen along the trajectory; L dt is undefined");
    for (int i = 0; i < n; ++i) {
      double v = 0;
      for (std::size_t j = 0; j < P; ++j) v += vel[static_cast<std::size_t>(i)][j](buf) * rate(r, j);
      buf[D + 1 + static_cast<std::size_t>(i)] = v / dt;
    }
    values[r] = lag(buf);
  }
  double total = 0;
  std::size_t r = 0;
  for (; r + 2 < S; r += 2) {
    const double h0 = t[r + 1] - t[r], h1 = t[r + 2] - t[r + 1];
    if (std::abs(h0 - h1) > 1e-12 * std::max(1.0, std::abs(h0))) break;
    total += (h0 + h1) / 6 * (values[r] + 4 * values[r + 1] + values[r + 2]);
  }
  for (; r + 1 < S; ++r) total += 0.5 * (t[r + 1] - t[r]) * (values[r] + values[r + 1]);
  return total;
}

// ------------------------------------------------------- order reduction

SystemSpec order_reduce(const SystemSpec& spec) {
  const int n = spec.n(), k = spec.k();
  if (k < 2) throw UnsupportedError("order reduction needs order >= 2");
  std::vector<std::string> names;
  auto y_index = [&](int i, int s) { return (i - 1) * k + s + 1; };
  for (int i = 1; i <= n; ++i)
    for (int s = 0; s < k; ++s) names.push_back(spec.coordinates[static_cast<std::size_t>(i - 1)] + "_" + std::to_string(s));
  auto lam_index = [&](int i, int s) { return n * k + (i - 1) * (k - 1) + s + 1; };
  for (int i = 1; i <= n; ++i)
    for (int s = 0; s < k - 1; ++s)
      names.push_back("lam" + std::to_string(s) + "_" + spec.coordinates[static_cast<std::size_t>(i - 1)]);

  Bindings map;
  for (int i = 1; i <= n; ++i) {
    for (int s = 0; s < k; ++s) map[SymbolId::jet(i, s)] = Expr(SymbolId::jet(y_index(i, s), 0));
    map[SymbolId::jet(i, k)] = Expr(SymbolId::jet(y_index(i, k - 1), 1));
  }
  std::vector<Expr> terms{substitute(spec.lagrangian, map)};
  for (int i = 1; i <= n; ++i)
    for (int s = 0; s < k - 1; ++s)
      terms.push_back(Expr(SymbolId::jet(lam_index(i, s), 0)) *
                      (Expr(SymbolId::jet(y_index(i, s), 1)) - Expr(SymbolId::jet(y_index(i, s + 1), 0))));

  SystemSpec out;
  out.coordinates = names;
  out.order = 1;
  out.lagrangian = Expr::sum(std::move(terms));
  SymbolTable table = out.table();
  out.lagrangian_text = to_string(out.lagrangian, &table);
  // Round trip through the text form to validate the generated names.
  return make_spec(out.coordinates, 1, out.lagrangian_text);
}

std::string trajectory_csv(const Trajectory& traj, const ClosureResult& closure, const SymbolTable& table) {
  std::ostringstream out;
  std::vector<std::size_t> pcols;
  std::size_t tcol = 0;
  for (std::size_t j = 0; j < traj.parameters.size(); ++j) {
    if (traj.parameters[j].kind == SymbolKind::Time)
      tcol = j;
    else
      pcols.push_back(j);
  }
  auto cons = closure.set.constraints();
  out << "tau,t";
  for (std::size_t j : pcols) out << ',' << table.print(traj.parameters[j]);
  for (const auto& s : traj.phase) out << ',' << table.print(s);
  out << ",Z";
  for (const auto* g : cons) out << ',' << g->label;
  out << '\n';

  std::map<SymbolId, int> slots;
  for (std::size_t i = 0; i < traj.phase.size(); ++i) slots[traj.phase[i]] = static_cast<int>(i);
  slots[SymbolId::time()] = static_cast<int>(traj.phase.size());
  std::vector<CompiledExpr> cexpr;
  for (const auto* g : cons) cexpr.emplace_back(g->expr, slots);
  std::vector<double> buf(traj.phase.size() + 1);
  for (std::size_t r = 0; r < traj.size(); ++r) {
    out << fmt(traj.tau[r]) << ',' << fmt(traj.params[r][tcol]);
    for (std::size_t j : pcols) out << ',' << fmt(traj.params[r][j]);
    for (double v : traj.x[r]) out << ',' << fmt(v);
    out << ',' << fmt(traj.z[r]);
    std::copy(traj.x[r].begin(), traj.x[r].end(), buf.begin());
    buf.back() = traj.params[r][tcol];
    for (const auto& c : cexpr) out << ',' << fmt(c(buf));
    out << '\n';
  }
  return out.str();
}

}  // namespace hjpath
