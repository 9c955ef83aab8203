#include <doctest.h>

#include "hjpath/errors.hpp"
#include "hjpath/model.hpp"
#include "hjpath/normal_form.hpp"

using namespace hjpath;

namespace {

bool has_code(const ValidationReport& r, const std::string& code) {
  for (const auto& v : r.violations)
    if (v.code == code) return true;
  return false;
}

}  // namespace

TEST_CASE("validate_spec examples") {
  CHECK(validate_spec(make_spec({"q"}, 2, "q''^2/2")).ok());

  auto cubic = validate_spec(make_spec({"q"}, 2, "q''^3"));
  REQUIRE(!cubic.ok());
  CHECK(has_code(cubic, "top_degree"));
  CHECK(cubic.violations.front().message == "degree > 2 in top derivative");

  auto trans = validate_spec(make_spec({"q"}, 2, "sin(q'')"));
  CHECK(has_code(trans, "top_transcendental"));
  CHECK(trans.violations.front().message == "transcendental of top derivative");

  CHECK(has_code(validate_spec(make_spec({"q"}, 1, "1/q'")), "top_denominator"));
  CHECK(has_code(validate_spec(make_spec({"q1", "q2"}, 1, "q1'^2*q2'")), "top_degree"));
  CHECK(validate_spec(make_spec({"q"}, 1, "sin(q)*q'^2 + t*q")).ok());
}

TEST_CASE("validate_spec rejects level overflow built programmatically") {
  SystemSpec spec = make_spec({"q"}, 1, "q'^2/2");
  spec.lagrangian = Expr(SymbolId::jet(1, 2));
  CHECK(has_code(validate_spec(spec), "level_overflow"));
  spec.lagrangian = Expr(SymbolId::momentum(0, 1));
  CHECK(has_code(validate_spec(spec), "unknown_symbol"));
  CHECK_THROWS_AS(require_valid(spec), UnsupportedError);
}

TEST_CASE("lagrangian text may not mention phase symbols or overflow levels") {
  CHECK_THROWS_AS(make_spec({"q"}, 1, "p^2"), ParseError);
  CHECK_THROWS_AS(make_spec({"q"}, 1, "q''"), ParseError);
  CHECK_THROWS_AS(make_spec({"p"}, 1, "p'"), ParseError);
  CHECK_THROWS_AS(make_spec({"q", "q"}, 1, "q'"), ParseError);
  CHECK_THROWS_AS(make_spec({"tau"}, 1, "tau'"), ParseError);
}

TEST_CASE("phase_layout examples") {
  auto l12 = phase_layout(1, 2);
  CHECK(l12.dimension() == 4);
  REQUIRE(l12.pairs.size() == 2);
  CHECK(l12.pairs[0].coordinate == SymbolId::jet(1, 0));
  CHECK(l12.pairs[0].momentum == SymbolId::momentum(0, 1));
  CHECK(l12.pairs[1].coordinate == SymbolId::jet(1, 1));
  CHECK(l12.pairs[1].momentum == SymbolId::momentum(1, 1));
  CHECK(phase_layout(2, 1).dimension() == 4);
  CHECK(phase_layout(2, 2).dimension() == 8);
  for (int n = 1; n <= 3; ++n)
    for (int k = 1; k <= 3; ++k) CHECK(phase_layout(n, k).dimension() == 2 * n * k);
}

TEST_CASE(".hjl reader accepts any key order and comments") {
  const char* text = R"(# leading comment
system {
  lagrangian: (1/2)*(q1'' - q2')^2;   # trailing comment
  order: 2;
  coordinates: q1, q2;
}
)";
  SystemSpec s = parse_hjl(text);
  CHECK(s.n() == 2);
  CHECK(s.k() == 2);
  CHECK(equivalent(s.lagrangian, make_spec({"q1", "q2"}, 2, "(q1''-q2')^2/2").lagrangian));

  SystemSpec back = parse_hjl(write_hjl(s));
  CHECK(back.coordinates == s.coordinates);
  CHECK(back.order == s.order);
  CHECK(equivalent(back.lagrangian, s.lagrangian));
}

TEST_CASE(".hjl reader errors name the line") {
  CHECK_THROWS_WITH_AS(parse_hjl("system {\n coordinates: q;\n order: 1;\n}\n"), doctest::Contains("lagrangian"),
                       ParseError);
  CHECK_THROWS_WITH_AS(parse_hjl("system {\n coordinates: q;\n order: 1;\n lagrangian: q'^2 +;\n}\n"),
                       doctest::Contains("line 4"), ParseError);
  CHECK_THROWS_AS(parse_hjl("system {\n coordinates: q;\n order: x;\n lagrangian: q;\n}"), ParseError);
  CHECK_THROWS_AS(parse_hjl("system {\n coordinates: q;\n order: 1;\n lagrangian: q;\n mass: 2;\n}"), ParseError);
  CHECK_THROWS_AS(parse_hjl("sys {\n}"), ParseError);
  CHECK_THROWS_AS(parse_hjl("system {\n coordinates: q;\n order: 1;\n lagrangian: q'''"), ParseError);
}

TEST_CASE("bundled corpus validates and mutants are rejected") {
  for (const char* name : {"oscillator", "free", "biharmonic", "pu", "s2", "noninvolutive", "rotation",
                           "total_derivative"}) {
    INFO(name);
    SystemSpec s = load_hjl(std::string(HJPATH_DATA_DIR) + "/systems/" + name + ".hjl");
    CHECK(validate_spec(s).ok());
    // Degree bump: multiply by one more top jet.
    SystemSpec bumped = s;
    bumped.lagrangian = s.lagrangian * Expr(SymbolId::jet(1, s.k())) * Expr(SymbolId::jet(1, s.k()));
    CHECK(!validate_spec(bumped).ok());
    // Level overflow.
    SystemSpec over = s;
    over.lagrangian = s.lagrangian + Expr(SymbolId::jet(1, s.k() + 1));
    CHECK(!validate_spec(over).ok());
  }
  CHECK(!validate_spec(load_hjl(std::string(HJPATH_DATA_DIR) + "/systems/cubic.hjl")).ok());
}
