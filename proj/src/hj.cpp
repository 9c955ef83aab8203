#include "hjpath/hj.hpp"

#include <algorithm>

#include "hjpath/errors.hpp"
#include "hjpath/linalg.hpp"

namespace hjpath {

const char* origin_name(Origin o) {
  switch (o) {
    case Origin::Hamiltonian:
      return "hamiltonian";
    case Origin::Primary:
      return "primary";
    case Origin::Chain:
      return "chain";
  }
  return "?";
}

const char* status_name(ClosureStatus s) {
  switch (s) {
    case ClosureStatus::ClosedFirstClass:
      return "closed_first_class";
    case ClosureStatus::Inconsistent:
      return "inconsistent";
    case ClosureStatus::NonInvolutive:
      return "non_involutive";
    case ClosureStatus::MaxIterExceeded:
      return "max_iter_exceeded";
  }
  return "?";
}

std::vector<const Generator*> GeneratorSet::parametric() const {
  std::vector<const Generator*> out;
  for (const auto& g : generators)
    if (g.parametric()) out.push_back(&g);
  return out;
}

std::vector<const Generator*> GeneratorSet::constraints() const {
  std::vector<const Generator*> out;
  for (std::size_t i = 1; i < generators.size(); ++i) out.push_back(&generators[i]);
  return out;
}

std::vector<SymbolId> GeneratorSet::promoted() const {
  std::vector<SymbolId> out;
  for (const auto& g : generators)
    if (g.parameter && g.parameter->kind == SymbolKind::Param)
      out.push_back(SymbolId::jet(g.parameter->index, g.parameter->level));
  return out;
}

namespace {

std::string param_label(int level, int index) {
  return "H(" + std::to_string(level) + ")" + std::to_string(index);
}

Generator parametric_generator(const SymbolId& p, const Expr& h, Origin origin, std::string provenance) {
  Generator g;
  g.label = param_label(p.level, p.index);
  g.level = p.level;
  g.index = p.index;
  g.parameter = SymbolId::param(p.level, p.index);
  g.momentum = p;
  g.h = simplify(h);
  g.expr = simplify(Expr(p) + g.h);
  g.origin = origin;
  g.provenance = std::move(provenance);
  return g;
}

}  // namespace

GeneratorSet build_generators(const SystemSpec& spec, const LegendreAnalysis& analysis) {
  GeneratorSet set;
  set.layout = phase_layout(spec);
  Generator h0;
  h0.label = "H0";
  h0.parameter = SymbolId::time();
  h0.momentum = SymbolId::time_momentum();
  h0.h = analysis.h0;
  h0.expr = Expr(SymbolId::time_momentum()) + analysis.h0;
  h0.origin = Origin::Hamiltonian;
  set.generators.push_back(h0);
  for (const auto& c : analysis.primaries) {
    SymbolId p = SymbolId::momentum(spec.k() - 1, c.index);
    Expr coeff = simplify(differentiate(c.expr, p));
    if (!coeff.is_one() || contains(c.h, p))
      throw InconsistentError("primary constraint is not of the form p + H with unit coefficient");
    set.generators.push_back(parametric_generator(p, c.h, Origin::Primary, "primary"));
  }
  for (int mu : analysis.partition.degenerate) set.degenerate.push_back(mu);
  return set;
}

Expr poisson_bracket(const Expr& f, const Expr& g, const PhaseLayout& layout) {
  auto fs = free_symbols(f);
  auto gs = free_symbols(g);
  std::vector<Expr> terms;
  for (const auto& pr : layout.pairs) {
    const SymbolId &q = pr.coordinate, &p = pr.momentum;
    if (fs.count(q) && gs.count(p)) terms.push_back(differentiate(f, q) * differentiate(g, p));
    if (fs.count(p) && gs.count(q)) terms.push_back(-(differentiate(f, p) * differentiate(g, q)));
  }
  return simplify(Expr::sum(std::move(terms)));
}

NormalForm ClosureResult::weak(const Expr& e) const { return normalize(substitute_fixpoint(e, surface)); }

namespace {

bool is_phase_jet(const Atom& a, const PhaseLayout& layout) {
  return a.is_symbol() && a.symbol().kind == SymbolKind::Jet && layout.contains(a.symbol());
}

bool is_phase_momentum(const Atom& a, const PhaseLayout& layout) {
  return a.is_symbol() && a.symbol().kind == SymbolKind::Momentum && layout.contains(a.symbol());
}

// Coefficient of x in p when p is linear in x with a constant coefficient.
std::optional<Rational> constant_linear_coeff(const Poly& p, const Atom& x) {
  if (p.degree(x) != 1) return std::nullopt;
  Poly c = p.coefficients(x)[1];
  if (!c.is_constant()) return std::nullopt;
  return c.constant_value();
}

class Closure {
 public:
  Closure(const GeneratorSet& gens, int max_iter) : max_iter_(max_iter) {
    res_.set = gens;
    for (std::size_t i = 1; i < gens.generators.size(); ++i) {
      const auto& g = gens.generators[i];
      if (g.parametric()) bind_momentum(*g.momentum, g.h);
    }
  }

  ClosureResult run() {
    auto& report = res_.report;
    for (int iter = 1;; ++iter) {
      if (iter > max_iter_) {
        report.status = ClosureStatus::MaxIterExceeded;
        report.iterations = max_iter_;
        break;
      }
      report.iterations = iter;
      Pass pass = build_pass(iter, true);
      bool added = false;
      for (const auto& [row, residual] : pass.residuals) {
        const std::string& label = gens()[row].label;
        if (!absorb(iter, label, residual)) {
          report.status = ClosureStatus::Inconsistent;
          finish(pass);
          return std::move(res_);
        }
        added = added || added_last_;
      }
      if (!added) {
        report.status = pass.matrix_zero ? ClosureStatus::ClosedFirstClass : ClosureStatus::NonInvolutive;
        finish(pass);
        break;
      }
    }
    if (report.status == ClosureStatus::MaxIterExceeded) finish(build_pass(report.iterations, false));
    return std::move(res_);
  }

 private:
  struct Pass {
    std::vector<std::size_t> rows;  // generator indices of constraints
    std::vector<std::size_t> cols;  // generator indices of parametric constraints
    RrefResult rr;
    bool matrix_zero = true;
    std::vector<std::pair<std::size_t, NormalForm>> residuals;  // (generator index, residual)
  };

  ClosureResult res_;
  int max_iter_;
  int conditions_ = 0;
  bool added_last_ = false;

  std::vector<Generator>& gens() { return res_.set.generators; }
  const PhaseLayout& layout() const { return res_.set.layout; }

  void bind_momentum(const SymbolId& p, const Expr& h) {
    Expr rhs = simplify(-h);
    res_.solved[p] = rhs;
    res_.surface[p] = rhs;
  }

  Pass build_pass(int iter, bool record) {
    Pass pass;
    for (std::size_t i = 1; i < gens().size(); ++i) {
      pass.rows.push_back(i);
      if (gens()[i].parametric()) pass.cols.push_back(i);
    }
    const Generator& h0 = gens().front();
    SymMatrix m;
    for (std::size_t r : pass.rows) {
      const Generator& x = gens()[r];
      std::vector<NormalForm> row;
      for (std::size_t c : pass.cols) {
        const Generator& g = gens()[c];
        NormalForm v = r == c ? NormalForm() : res_.weak(poisson_bracket(x.expr, g.expr, layout()));
        if (!v.is_zero()) pass.matrix_zero = false;
        if (record && r != c)
          res_.report.trace.push_back({iter, x.label, g.label, v.to_expr(), v.is_zero() ? "vanishes" : "rate_matrix"});
        row.push_back(v);
      }
      Expr evo = poisson_bracket(x.expr, h0.h, layout()) + differentiate(x.expr, SymbolId::time());
      NormalForm b = res_.weak(evo);
      if (record)
        res_.report.trace.push_back({iter, x.label, h0.label, b.to_expr(), b.is_zero() ? "vanishes" : "pending"});
      row.push_back(b);
      m.push_back(std::move(row));
    }
    const int width = static_cast<int>(pass.cols.size());
    pass.rr = rref(std::move(m), width);
    for (std::size_t r = static_cast<std::size_t>(pass.rr.rank()); r < pass.rr.rows.size(); ++r) {
      const NormalForm& b = pass.rr.rows[r][static_cast<std::size_t>(width)];
      if (!b.is_zero())
        pass.residuals.emplace_back(pass.rows[static_cast<std::size_t>(pass.rr.origin[r])], b);
    }
    std::sort(pass.residuals.begin(), pass.residuals.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    // Residuals that are eliminated by the rate matrix do not need new
    // constraints; mark their trace entries.
    if (record)
      for (auto& e : res_.report.trace)
        if (e.iteration == iter && e.action == "pending") e.action = "fixes_rate";
    if (record)
      for (const auto& [gi, b] : pass.residuals)
        for (auto& e : res_.report.trace)
          if (e.iteration == iter && e.a == gens()[gi].label && e.b == "H0") e.action = "residual";
    return pass;
  }

  // Turns a residual into a new generator or condition. Returns false when
  // the residual is a nonzero constant.
  bool absorb(int iter, const std::string& origin_label, const NormalForm& raw) {
    added_last_ = false;
    const std::string prov = "{" + origin_label + ", H0}";
    NormalForm nf = res_.weak(raw.to_expr());
    TraceEntry* entry = nullptr;
    for (auto& e : res_.report.trace)
      if (e.iteration == iter && e.a == origin_label && e.b == "H0") entry = &e;
    TraceEntry scratch;
    if (!entry) entry = &scratch;
    if (nf.is_zero()) {
      entry->action = "known_on_surface";
      return true;
    }
    if (nf.is_constant()) {
      entry->residual = nf.to_expr();
      entry->action = "inconsistent";
      return false;
    }
    Poly num = nf.numerator();

    // Known condition up to a constant factor.
    for (std::size_t i = 1; i < gens().size(); ++i) {
      const Generator& g = gens()[i];
      if (!g.parametric() && normalize(g.expr).numerator().monic() == num.monic()) {
        entry->action = "known_condition " + g.label;
        return true;
      }
    }

    std::optional<Atom> pick;
    Rational coeff;
    auto better = [&](const Atom& a) {
      if (!pick) return true;
      bool da = std::find(res_.set.degenerate.begin(), res_.set.degenerate.end(), a.index) != res_.set.degenerate.end();
      bool db = std::find(res_.set.degenerate.begin(), res_.set.degenerate.end(), pick->index) !=
                res_.set.degenerate.end();
      if (da != db) return da;
      return pick->level < a.level || (pick->level == a.level && pick->index < a.index);
    };
    auto promoted = res_.set.promoted();
    for (const auto& a : num.atoms()) {
      if (!is_phase_momentum(a, layout())) continue;
      SymbolId p = a.symbol();
      if (res_.solved.count(p)) continue;
      if (std::find(promoted.begin(), promoted.end(), p.conjugate()) != promoted.end()) continue;
      auto c = constant_linear_coeff(num, a);
      if (!c) continue;
      if (better(a)) {
        pick = a;
        coeff = *c;
      }
    }

    if (pick) {
      SymbolId p = pick->symbol();
      Expr scaled = simplify(num.scaled(Rational(1) / coeff).to_expr());
      Expr h = simplify(scaled - Expr(p));
      Generator g = parametric_generator(p, h, Origin::Chain, prov);
      entry->action = "new_generator " + g.label;
      res_.report.added.push_back(g.label);
      gens().push_back(g);
      bind_momentum(p, h);
    } else {
      Generator g;
      g.label = "C" + std::to_string(++conditions_);
      Poly monic = num.monic();
      g.expr = simplify(monic.to_expr());
      g.h = g.expr;
      g.origin = Origin::Chain;
      g.provenance = prov;
      entry->action = "new_condition " + g.label;
      res_.report.added.push_back(g.label);
      gens().push_back(g);
      // Linear coordinate conditions sharpen the surface used for zero tests.
      std::optional<Atom> x;
      Rational cx;
      for (const auto& a : monic.atoms()) {
        if (!is_phase_jet(a, layout()) || res_.surface.count(a.symbol())) continue;
        if (auto c = constant_linear_coeff(monic, a)) {
          x = a;
          cx = *c;
        }
      }
      if (x) {
        Poly rest = monic - Poly::atom(*x).scaled(cx);
        res_.surface[x->symbol()] = simplify(rest.scaled(Rational(-1) / cx).to_expr());
      }
    }
    added_last_ = true;
    return true;
  }

  void finish(const Pass& pass) {
    // Fully reduce solved momenta and build reduced generator forms.
    for (auto& [p, rhs] : res_.solved) rhs = simplify(substitute_fixpoint(rhs, res_.solved));
    for (auto& g : gens()) {
      Bindings others = res_.solved;
      if (g.momentum) others.erase(*g.momentum);
      g.reduced = simplify(substitute(g.expr, others));
    }

    // Final bracket table on the surface.
    auto& table = res_.report.table;
    table.clear();
    for (std::size_t r = 1; r < gens().size(); ++r)
      for (std::size_t c = 0; c < gens().size(); ++c) {
        if (!gens()[c].parametric() || r == c) continue;
        const Generator& x = gens()[r];
        const Generator& g = gens()[c];
        Expr br = c == 0 ? poisson_bracket(x.expr, g.h, layout()) + differentiate(x.expr, SymbolId::time())
                         : poisson_bracket(x.expr, g.expr, layout());
        NormalForm v = res_.weak(br);
        table.push_back({res_.report.iterations, x.label, g.label, v.to_expr(), v.is_zero() ? "vanishes" : "nonzero"});
      }

    if (res_.report.status != ClosureStatus::NonInvolutive) return;
    // Determined rates: pivot rows of the reduced matrix.
    const int width = static_cast<int>(pass.cols.size());
    std::vector<bool> pivot(pass.cols.size(), false);
    for (int c : pass.rr.pivot_cols) pivot[static_cast<std::size_t>(c)] = true;
    for (int r = 0; r < pass.rr.rank(); ++r) {
      const auto& row = pass.rr.rows[static_cast<std::size_t>(r)];
      const Generator& g = gens()[pass.cols[static_cast<std::size_t>(pass.rr.pivot_cols[static_cast<std::size_t>(r)])]];
      DeterminedRate rate;
      rate.parameter = *g.parameter;
      rate.coeff.emplace_back(SymbolId::time(), simplify((-row[static_cast<std::size_t>(width)]).to_expr()));
      for (int c = 0; c < width; ++c) {
        if (pivot[static_cast<std::size_t>(c)]) continue;
        const NormalForm& v = row[static_cast<std::size_t>(c)];
        if (v.is_zero()) continue;
        rate.coeff.emplace_back(*gens()[pass.cols[static_cast<std::size_t>(c)]].parameter, simplify((-v).to_expr()));
      }
      res_.rates.push_back(rate);
    }
  }
};

}  // namespace

ClosureResult integrability_closure(const GeneratorSet& gens, int max_iter) { return Closure(gens, max_iter).run(); }

TotalDifferentialSystem eom_forms(const ClosureResult& closure, bool force) {
  switch (closure.report.status) {
    case ClosureStatus::ClosedFirstClass:
      break;
    case ClosureStatus::NonInvolutive:
      if (!force) throw InconsistentError("constraint set is non-involutive; equations of motion need --force");
      break;
    default:
      throw InconsistentError(std::string("no equations of motion for a closure with status ") +
                              status_name(closure.report.status));
  }
  TotalDifferentialSystem sys;
  const auto& set = closure.set;
  sys.phase = set.layout.symbols();
  auto params = set.parametric();
  for (const auto* g : params) sys.parameters.push_back(*g->parameter);
  for (const auto& x : sys.phase) {
    std::vector<Expr> row;
    SymbolId partner = x.conjugate();
    for (const auto* g : params) {
      Expr d = differentiate(g->reduced, partner);
      row.push_back(simplify(x.kind == SymbolKind::Jet ? d : -d));
    }
    sys.coeff.push_back(std::move(row));
  }
  sys.rates = closure.rates;
  return sys;
}

}  // namespace hjpath
