#include <doctest.h>

#include "hjpath/errors.hpp"
#include "hjpath/legendre.hpp"
#include "hjpath/normal_form.hpp"
#include "hjpath/parser.hpp"

using namespace hjpath;

namespace {

Expr P(const SystemSpec& s, const std::string& text) { return parse(text, s.table()); }

bool same(const Expr& a, const Expr& b) { return equivalent(a, b); }

}  // namespace

TEST_CASE("hessian examples") {
  auto h1 = hessian(make_spec({"q"}, 2, "q''^2/2"));
  CHECK(same(h1.a[0][0], Expr(1)));

  auto h2 = hessian(make_spec({"q1", "q2"}, 2, "(q1''-q2')^2/2"));
  CHECK(same(h2.a[0][0], Expr(1)));
  CHECK(same(h2.a[0][1], Expr(0)));
  CHECK(same(h2.a[1][0], Expr(0)));
  CHECK(same(h2.a[1][1], Expr(0)));

  auto h3 = hessian(make_spec({"q1", "q2"}, 2, "q1''*q2''"));
  CHECK(same(h3.a[0][1], Expr(1)));
  CHECK(same(h3.a[1][0], Expr(1)));
  CHECK(same(h3.a[0][0], Expr(0)));
}

TEST_CASE("generic_rank examples") {
  HessianMatrix a{{{Expr(1), Expr(0)}, {Expr(0), Expr(0)}}};
  auto ra = generic_rank(a);
  CHECK(ra.rank == 1);
  CHECK(ra.degenerate == std::vector<int>{2});
  CHECK(ra.exact);

  HessianMatrix b{{{Expr(0), Expr(1)}, {Expr(1), Expr(0)}}};
  auto rb = generic_rank(b);
  CHECK(rb.rank == 2);
  CHECK(rb.degenerate.empty());

  HessianMatrix c{{{Expr(SymbolId::jet(1, 0)), Expr(0)}, {Expr(0), Expr(0)}}};
  auto rc = generic_rank(c, 5, 1);
  CHECK(rc.rank == 1);
  CHECK(rc.degenerate == std::vector<int>{2});
  CHECK(rc.samples.size() == 5);
  CHECK(rc.permutation == std::vector<int>{2, 1});

  HessianMatrix zero{{{Expr(0)}}};
  CHECK(generic_rank(zero).rank == 0);
}

TEST_CASE("generic_rank is deterministic for a seed and bounds pointwise ranks") {
  SystemSpec s = make_spec({"q1", "q2"}, 1, "q1*q1'^2/2 + q2'*q1' + q2*q2'^2");
  auto h = hessian(s);
  auto r1 = generic_rank(h, 5, 42);
  auto r2 = generic_rank(h, 5, 42);
  CHECK(r1.rank == r2.rank);
  CHECK(r1.samples == r2.samples);
  CHECK(r1.rank == 2);
  // The rank at q1 = q2 = 0 is lower but never higher than the generic one.
  std::vector<std::vector<Rational>> at0(2, std::vector<Rational>(2));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      at0[i][j] = *evaluate_exact(h.a[i][j], {{SymbolId::jet(1, 0), 0}, {SymbolId::jet(2, 0), 0}});
  CHECK(at0[0][1] == 1);
}

TEST_CASE("top_momenta examples") {
  auto s1 = make_spec({"q"}, 2, "q''^2/2");
  CHECK(same(top_momenta(s1)[0], P(s1, "q''")));
  auto s2 = make_spec({"q1", "q2"}, 2, "(q1''-q2')^2/2");
  auto m2 = top_momenta(s2);
  CHECK(same(m2[0], P(s2, "q1''-q2'")));
  CHECK(same(m2[1], Expr(0)));
  auto s3 = make_spec({"q"}, 1, "q'^2/2");
  CHECK(same(top_momenta(s3)[0], P(s3, "q'")));
}

TEST_CASE("solve_top examples") {
  auto s1 = make_spec({"q"}, 2, "q''^2/2");
  auto w1 = solve_top(s1, generic_rank(hessian(s1)));
  CHECK(same(w1.w.at(1), P(s1, "p1")));

  auto s2 = make_spec({"q1", "q2"}, 2, "(q1''-q2')^2/2");
  auto w2 = solve_top(s2, generic_rank(hessian(s2)));
  CHECK(w2.w.size() == 1);
  CHECK(same(w2.w.at(1), P(s2, "p1_1 + q2'")));

  auto s3 = make_spec({"q1", "q2"}, 2, "q1''*q2''");
  auto w3 = solve_top(s3, generic_rank(hessian(s3)));
  CHECK(same(w3.w.at(1), P(s3, "p1_2")));
  CHECK(same(w3.w.at(2), P(s3, "p1_1")));
}

TEST_CASE("solve_top reports a singular regular block") {
  auto s = make_spec({"q1", "q2"}, 1, "q1'^2/2");
  RankPartition wrong;
  wrong.rank = 2;
  wrong.regular = {1, 2};
  CHECK_THROWS_AS(solve_top(s, wrong), RankError);
}

TEST_CASE("primary_constraints examples") {
  auto s2 = make_spec({"q1", "q2"}, 2, "(q1''-q2')^2/2");
  auto part = generic_rank(hessian(s2));
  auto pc = primary_constraints(s2, part, solve_top(s2, part));
  REQUIRE(pc.size() == 1);
  CHECK(pc[0].index == 2);
  CHECK(same(pc[0].h, Expr(0)));
  CHECK(same(pc[0].expr, P(s2, "p1_2")));

  auto osc = make_spec({"q"}, 1, "q'^2/2 - q^2/2");
  auto po = generic_rank(hessian(osc));
  CHECK(primary_constraints(osc, po, solve_top(osc, po)).empty());

  auto rot = make_spec({"q1", "q2"}, 1, "q1'*q2 - q2'*q1");
  auto pr = generic_rank(hessian(rot));
  CHECK(pr.r() == 2);
  auto cr = primary_constraints(rot, pr, solve_top(rot, pr));
  REQUIRE(cr.size() == 2);
  CHECK(same(cr[0].expr, P(rot, "p0_1 - q2")));
  CHECK(same(cr[1].expr, P(rot, "p0_2 + q1")));
}

TEST_CASE("canonical_hamiltonian examples") {
  auto osc = make_spec({"q"}, 1, "q'^2/2 - q^2/2");
  CHECK(same(legendre_transform(osc).h0, P(osc, "p^2/2 + q^2/2")));
  auto bih = make_spec({"q"}, 2, "q''^2/2");
  CHECK(same(legendre_transform(bih).h0, P(bih, "p0*q' + p1^2/2")));
  auto s2 = make_spec({"q1", "q2"}, 2, "(q1''-q2')^2/2");
  CHECK(same(legendre_transform(s2).h0, P(s2, "p0_1*q1' + p0_2*q2' + p1_1*q2' + p1_1^2/2")));
}

TEST_CASE("legendre invariants on a varied corpus") {
  const std::vector<std::tuple<std::vector<std::string>, int, std::string>> corpus = {
      {{"q"}, 1, "q'^2/2 - q^2/2"},
      {{"q"}, 2, "(q''^2 - 5*q'^2 + 4*q^2)/2"},
      {{"q1", "q2"}, 2, "(q1''-q2')^2/2"},
      {{"q1", "q2"}, 1, "q1'^2/2 + q1*q2"},
      {{"q"}, 1, "(1 + q^2)*q'^2/2 - cos(q)"},
      {{"x", "y"}, 1, "x'^2/2 + x'*y' + y'^2 - t*x*y"},
      {{"q"}, 3, "q'''^2/2 + q'*q''"},
  };
  for (const auto& [coords, k, text] : corpus) {
    INFO(text);
    auto spec = make_spec(coords, k, text);
    auto an = legendre_transform(spec);
    // Symmetric Hessian.
    for (int i = 0; i < spec.n(); ++i)
      for (int j = 0; j < spec.n(); ++j) CHECK(same(an.hessian.a[i][j], an.hessian.a[j][i]));
    // H0 independent of the top jets.
    for (int i = 1; i <= spec.n(); ++i) CHECK(normalize(differentiate(an.h0, SymbolId::jet(i, k))).is_zero());
    // Legendre round trip.
    for (const auto& [a, wa] : an.w.w)
      CHECK(normalize(differentiate(an.h0, SymbolId::momentum(k - 1, a)) - wa).is_zero());
    CHECK(an.partition.regular.size() + an.partition.degenerate.size() == static_cast<std::size_t>(spec.n()));
  }
}

TEST_CASE("k=1 regular Hamiltonians match a direct Legendre transform") {
  // Direct transform for one coordinate: H = p v - L with v solved from p = dL/dv.
  for (const char* text : {"q'^2/2 - q^2/2", "q'^2/2", "3*q'^2 + q*q' - q^4", "(1 + q^2)*q'^2/2 + t*q"}) {
    INFO(text);
    auto spec = make_spec({"q"}, 1, text);
    auto an = legendre_transform(spec);
    SymbolId v = SymbolId::jet(1, 1), p = SymbolId::momentum(0, 1);
    Expr dl = differentiate(spec.lagrangian, v);
    Expr a = differentiate(dl, v);
    Expr b = substitute(dl, {{v, Expr(0)}});
    Expr vsol = (Expr(p) - b) / a;
    Expr direct = Expr(p) * vsol - substitute(spec.lagrangian, {{v, vsol}});
    CHECK(same(an.h0, direct));
  }
}
