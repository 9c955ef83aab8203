// Full analysis chain for a small Lagrangian, shared by the action and
// numeric tests.
#pragma once

#include <string>
#include <vector>

#include "hjpath/action.hpp"
#include "hjpath/hj.hpp"
#include "hjpath/numeric.hpp"
#include "hjpath/parser.hpp"

namespace hjtest {

struct Pipeline {
  hjpath::SystemSpec spec;
  hjpath::LegendreAnalysis an;
  hjpath::ClosureResult closure;
  hjpath::ReducedPhaseSpace reduced;

  hjpath::Expr P(const std::string& text) const { return hjpath::parse(text, spec.table()); }

  hjpath::Trajectory run(const hjpath::Point& guess, double dtau, double T, const hjpath::CurveSet& curves = {},
                         bool force = false) const {
    auto sys = hjpath::eom_forms(closure, force);
    auto form = hjpath::action_differential(closure, reduced, force);
    return hjpath::integrate(closure, sys, form, curves, hjpath::project_initial(closure, guess), dtau, T);
  }
};

inline Pipeline analyze(const hjpath::SystemSpec& spec) {
  Pipeline p;
  p.spec = spec;
  p.an = hjpath::legendre_transform(spec);
  p.closure = hjpath::integrability_closure(hjpath::build_generators(spec, p.an));
  p.reduced = hjpath::reduced_space(p.closure);
  return p;
}

inline Pipeline analyze(std::vector<std::string> coords, int k, const std::string& text) {
  return analyze(hjpath::make_spec(std::move(coords), k, text));
}

inline hjpath::SymbolId q(int i, int s = 0) { return hjpath::SymbolId::jet(i, s); }
inline hjpath::SymbolId p(int s, int i) { return hjpath::SymbolId::momentum(s, i); }

}  // namespace hjtest
