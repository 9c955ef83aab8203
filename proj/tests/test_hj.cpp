#include <doctest.h>

#include "hjpath/errors.hpp"
#include "hjpath/hj.hpp"
#include "hjpath/linalg.hpp"
#include "hjpath/parser.hpp"
#include "support.hpp"

using namespace hjpath;

namespace {

struct Pipeline {
  SystemSpec spec;
  LegendreAnalysis an;
  GeneratorSet gens;
  ClosureResult closure;
};

Pipeline run(std::vector<std::string> coords, int k, const std::string& text) {
  Pipeline p;
  p.spec = make_spec(std::move(coords), k, text);
  p.an = legendre_transform(p.spec);
  p.gens = build_generators(p.spec, p.an);
  p.closure = integrability_closure(p.gens);
  return p;
}

Expr P(const SystemSpec& s, const std::string& text) { return parse(text, s.table()); }

}  // namespace

TEST_CASE("build_generators examples") {
  auto osc = run({"q"}, 1, "q'^2/2 - q^2/2");
  REQUIRE(osc.gens.generators.size() == 1);
  CHECK(equivalent(osc.gens.generators[0].expr, P(osc.spec, "p_t + p^2/2 + q^2/2")));
  CHECK(*osc.gens.generators[0].parameter == SymbolId::time());

  auto s2 = run({"q1", "q2"}, 2, "(q1''-q2')^2/2");
  REQUIRE(s2.gens.generators.size() == 2);
  const auto& g = s2.gens.generators[1];
  CHECK(equivalent(g.expr, P(s2.spec, "p1_2")));
  CHECK(*g.parameter == SymbolId::param(1, 2));
  CHECK(g.origin == Origin::Primary);

  auto rot = run({"q1", "q2"}, 1, "q1'*q2 - q2'*q1");
  CHECK(rot.gens.generators.size() == 3);
}

TEST_CASE("poisson_bracket examples") {
  auto s2 = run({"q1", "q2"}, 2, "(q1''-q2')^2/2");
  const auto& L = s2.gens.layout;
  auto one = phase_layout(1, 1);
  CHECK(equivalent(poisson_bracket(Expr(SymbolId::jet(1, 0)), Expr(SymbolId::momentum(0, 1)), one), Expr(1)));
  CHECK(poisson_bracket(s2.an.h0, s2.an.h0, L).is_zero());
  CHECK(equivalent(poisson_bracket(P(s2.spec, "p1_2"), s2.an.h0, L), P(s2.spec, "-(p0_2 + p1_1)")));
}

TEST_CASE("closure: oscillator closes with no additions") {
  auto osc = run({"q"}, 1, "q'^2/2 - q^2/2");
  CHECK(osc.closure.report.status == ClosureStatus::ClosedFirstClass);
  CHECK(osc.closure.report.added.empty());
}

TEST_CASE("closure: singular second-order chain") {
  auto s2 = run({"q1", "q2"}, 2, "(q1''-q2')^2/2");
  const auto& rep = s2.closure.report;
  CHECK(rep.status == ClosureStatus::ClosedFirstClass);
  CHECK(rep.iterations <= 3);
  const auto& gens = s2.closure.set.generators;
  REQUIRE(gens.size() == 4);
  CHECK(equivalent(gens[1].expr, P(s2.spec, "p1_2")));
  CHECK(equivalent(gens[2].expr, P(s2.spec, "p0_2 + p1_1")));
  CHECK(equivalent(gens[3].expr, P(s2.spec, "p0_1")));
  CHECK(*gens[2].parameter == SymbolId::param(0, 2));
  CHECK(*gens[3].parameter == SymbolId::param(0, 1));
  CHECK(gens[2].provenance == "{H(1)2, H0}");
  CHECK(gens[3].provenance == "{H(0)2, H0}");
  CHECK(equivalent(s2.closure.set.hamiltonian().reduced, P(s2.spec, "p_t + p1_1^2/2")));
  for (const auto& e : rep.table) CHECK(e.residual.is_zero());
}

TEST_CASE("closure: non-involutive detection") {
  auto ni = run({"q1", "q2"}, 1, "q1'^2/2 + q1*q2");
  const auto& rep = ni.closure.report;
  CHECK(rep.status == ClosureStatus::NonInvolutive);
  bool unit = false;
  for (const auto& e : rep.trace)
    if (e.residual.is_constant() && (e.residual.value() == 1 || e.residual.value() == -1)) unit = true;
  CHECK(unit);
  CHECK(rep.iterations <= 2 * 2 * 1 + 1);
}

TEST_CASE("closure: inconsistent system") {
  // p2 = 0 is primary and {p2, H0} = 1.
  auto inc = run({"q1", "q2"}, 1, "q1'^2/2 + q2");
  CHECK(inc.closure.report.status == ClosureStatus::Inconsistent);
  CHECK_THROWS_AS(eom_forms(inc.closure, true), InconsistentError);
}

TEST_CASE("closure: fully degenerate total derivative") {
  auto td = run({"q"}, 1, "q'");
  CHECK(td.closure.report.status == ClosureStatus::ClosedFirstClass);
  REQUIRE(td.closure.set.generators.size() == 2);
  CHECK(equivalent(td.closure.set.generators[1].expr, P(td.spec, "p - 1")));
}

TEST_CASE("eom_forms examples") {
  auto osc = run({"q"}, 1, "q'^2/2 - q^2/2");
  auto e = eom_forms(osc.closure);
  REQUIRE(e.phase.size() == 2);
  CHECK(equivalent(e.coeff[0][0], P(osc.spec, "p")));
  CHECK(equivalent(e.coeff[1][0], P(osc.spec, "-q")));

  auto bi = run({"q"}, 2, "q''^2/2");
  auto eb = eom_forms(bi.closure);
  // phase order: q, q', p0, p1
  CHECK(equivalent(eb.coeff[0][0], P(bi.spec, "q'")));
  CHECK(equivalent(eb.coeff[1][0], P(bi.spec, "p1")));
  CHECK(equivalent(eb.coeff[2][0], Expr(0)));
  CHECK(equivalent(eb.coeff[3][0], P(bi.spec, "-p0")));

  auto s2 = run({"q1", "q2"}, 2, "(q1''-q2')^2/2");
  auto es = eom_forms(s2.closure);
  std::size_t col = 0;
  for (std::size_t j = 0; j < es.parameters.size(); ++j)
    if (es.parameters[j] == SymbolId::param(0, 2)) col = j;
  REQUIRE(col != 0);
  std::size_t row = 0;
  for (std::size_t i = 0; i < es.phase.size(); ++i)
    if (es.phase[i] == SymbolId::jet(1, 1)) row = i;
  CHECK(equivalent(es.coeff[row][col], Expr(1)));

  auto ni = run({"q1", "q2"}, 1, "q1'^2/2 + q1*q2");
  CHECK_THROWS_AS(eom_forms(ni.closure), InconsistentError);
  CHECK_NOTHROW(eom_forms(ni.closure, true));
}

TEST_CASE("eom coefficients are the partials of the reduced generators") {
  auto s2 = run({"q1", "q2"}, 2, "(q1''-q2')^2/2");
  auto es = eom_forms(s2.closure);
  auto params = s2.closure.set.parametric();
  for (std::size_t i = 0; i < es.phase.size(); ++i)
    for (std::size_t j = 0; j < params.size(); ++j) {
      const auto& x = es.phase[i];
      Expr d = differentiate(params[j]->reduced, x.conjugate());
      CHECK(equivalent(es.coeff[i][j], x.is_jet() ? d : -d));
    }
}

TEST_CASE("k=1 generator count is 1 + r") {
  for (const auto& [coords, text] : std::vector<std::pair<std::vector<std::string>, std::string>>{
           {{"q"}, "q'^2/2 - q^2/2"},
           {{"q1", "q2"}, "q1'*q2 - q2'*q1"},
           {{"q1", "q2"}, "q1'^2/2 + q1*q2"},
           {{"q"}, "q'"}}) {
    auto p = run(coords, 1, text);
    CHECK(p.gens.generators.size() == static_cast<std::size_t>(1 + p.an.partition.r()));
  }
}

TEST_CASE("closed systems: every bracket vanishes on the surface and constraints are independent") {
  for (const auto& [coords, k, text] : std::vector<std::tuple<std::vector<std::string>, int, std::string>>{
           {{"q1", "q2"}, 2, "(q1''-q2')^2/2"},
           {{"q"}, 1, "q'"},
           {{"q1", "q2", "q3"}, 1, "q1'^2/2 + (q2' - q3)^2/2"}}) {
    INFO(text);
    auto p = run(coords, k, text);
    REQUIRE(p.closure.report.status == ClosureStatus::ClosedFirstClass);
    CHECK(p.closure.report.iterations <= 2 * p.spec.n() * k + 1);
    for (const auto& e : p.closure.report.table) CHECK(e.residual.is_zero());
    // Jacobian of the constraints at random points has full row rank.
    auto syms = p.gens.layout.symbols();
    auto cons = p.closure.set.constraints();
    hjtest::ExprGen gen(syms, 5);
    for (int trial = 0; trial < 5; ++trial) {
      Point pt = gen.random_point();
      std::vector<std::vector<double>> jac;
      for (const auto* c : cons) {
        std::vector<double> row;
        for (const auto& s : syms) row.push_back(evaluate(differentiate(c->expr, s), pt));
        jac.push_back(row);
      }
      CHECK(rank_numeric(jac) == static_cast<int>(cons.size()));
    }
  }
}

TEST_CASE("bracket algebra: antisymmetry, bilinearity and Leibniz on a generated corpus") {
  auto layout = phase_layout(2, 2);
  auto syms = layout.symbols();
  syms.push_back(SymbolId::time());
  hjtest::ExprGen gen(syms, 2024, false);
  std::vector<Expr> corpus;
  for (int i = 0; i < 50; ++i) corpus.push_back(gen(2));
  for (int i = 0; i < 50; ++i) {
    const Expr& f = corpus[i];
    const Expr& g = corpus[(i + 1) % 50];
    const Expr& h = corpus[(i + 7) % 50];
    CHECK(normalize(poisson_bracket(f, g, layout) + poisson_bracket(g, f, layout)).is_zero());
    CHECK(normalize(poisson_bracket(f, Expr(2) * g + h, layout) - Expr(2) * poisson_bracket(f, g, layout) -
                    poisson_bracket(f, h, layout))
              .is_zero());
    CHECK(normalize(poisson_bracket(f, g * h, layout) - g * poisson_bracket(f, h, layout) -
                    poisson_bracket(f, g, layout) * h)
              .is_zero());
  }
}

TEST_CASE("bracket algebra: Jacobi identity numerically") {
  auto layout = phase_layout(2, 2);
  auto syms = layout.symbols();
  hjtest::ExprGen gen(syms, 77);
  std::vector<Expr> corpus;
  for (int i = 0; i < 30; ++i) corpus.push_back(gen(2));
  int checked = 0;
  for (int i = 0; i < 100; ++i) {
    const Expr& f = corpus[i % 30];
    const Expr& g = corpus[(i + 11) % 30];
    const Expr& h = corpus[(i + 19) % 30];
    Expr jac = poisson_bracket(f, poisson_bracket(g, h, layout), layout) +
               poisson_bracket(g, poisson_bracket(h, f, layout), layout) +
               poisson_bracket(h, poisson_bracket(f, g, layout), layout);
    Point pt = gen.random_point(-1.0, 1.0);
    double scale = 1.0;
    try {
      CHECK(std::abs(evaluate(jac, pt)) <= 1e-8 * scale);
      ++checked;
    } catch (const PoleError&) {
    }
  }
  CHECK(checked == 100);
}
