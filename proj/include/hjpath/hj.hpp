#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hjpath/expr.hpp"
#include "hjpath/legendre.hpp"
#include "hjpath/model.hpp"
#include "hjpath/normal_form.hpp"

namespace hjpath {

enum class Origin { Hamiltonian, Primary, Chain };
const char* origin_name(Origin o);

/// One Hamilton-Jacobi generator H' = p_c + H_c, or a momentum-free
/// condition when `parameter` is empty.
struct Generator {
  std::string label;                  // "H0", "H(1)2", "C1"
  int level = 0;                      // s of the solved momentum
  int index = 0;                      // alpha; 0 for the Hamiltonian
  std::optional<SymbolId> parameter;  // Time, Param(s, i) or none
  std::optional<SymbolId> momentum;   // solved momentum p_c (p_t for H0)
  Expr expr;                          // full generator H'
  Expr h;                             // H_c = H' - p_c (whole expression for conditions)
  Expr reduced;                       // H' with other solved momenta eliminated
  Origin origin = Origin::Hamiltonian;
  std::string provenance;             // bracket that produced it

  bool parametric() const { return parameter.has_value(); }
};

struct GeneratorSet {
  PhaseLayout layout;
  std::vector<Generator> generators;  // generators[0] is H0
  std::vector<int> degenerate;        // degenerate coordinate indices, preferred when solving residuals

  const Generator& hamiltonian() const { return generators.front(); }
  /// Parametric generators, H0 first.
  std::vector<const Generator*> parametric() const;
  /// Every generator other than H0.
  std::vector<const Generator*> constraints() const;
  /// Coordinates promoted to parameters, Jet(i, s) for each Param(s, i).
  std::vector<SymbolId> promoted() const;
};

/// {H'_0 = p_t + H0} plus one parametric generator per primary constraint.
GeneratorSet build_generators(const SystemSpec& spec, const LegendreAnalysis& analysis);

/// Sum over the conjugate pairs of the layout of
/// df/dq dg/dp - df/dp dg/dq, simplified. Other symbols are passive.
Expr poisson_bracket(const Expr& f, const Expr& g, const PhaseLayout& layout);

enum class ClosureStatus { ClosedFirstClass, Inconsistent, NonInvolutive, MaxIterExceeded };
const char* status_name(ClosureStatus s);

struct TraceEntry {
  int iteration = 0;
  std::string a, b;  // generator labels; b is "H0" for the time evolution
  Expr residual;     // bracket reduced on the constraint surface
  std::string action;
};

struct ClosureReport {
  ClosureStatus status = ClosureStatus::ClosedFirstClass;
  int iterations = 0;
  std::vector<std::string> added;  // labels of generators added by the loop
  std::vector<TraceEntry> trace;
  /// Final table: residual of {X, G} on the surface for every constraint X
  /// and parametric generator G (H0 included).
  std::vector<TraceEntry> table;
};

/// Parameter rates fixed by the consistency conditions: for a determined
/// parameter mu, dt_mu = sum over free parameters nu of coeff[nu] dt_nu.
struct DeterminedRate {
  SymbolId parameter;
  std::vector<std::pair<SymbolId, Expr>> coeff;
};

struct ClosureResult {
  GeneratorSet set;
  ClosureReport report;
  std::vector<DeterminedRate> rates;  // empty unless second-class
  Bindings solved;                    // p_c -> -H_c for every solved momentum, fully reduced
  Bindings surface;                   // solved momenta plus linear coordinate conditions

  /// Weak reduction: substitute `surface` and normalize.
  NormalForm weak(const Expr& e) const;
};

/// Dirac-style consistency loop. Each pass forms the matrix of brackets
/// between constraints and parametric generators together with their
/// brackets against H0, row-reduces it on the constraint surface and turns
/// every leftover residual into a new generator (when it has a momentum
/// with constant coefficient) or a new condition. Stops at a fixpoint.
ClosureResult integrability_closure(const GeneratorSet& gens, int max_iter = 32);

/// Coefficients of dx on dt_alpha for every phase symbol x: dq = dG/dp,
/// dp = -dG/dq, taken from the reduced generator forms.
struct TotalDifferentialSystem {
  std::vector<SymbolId> phase;       // layout symbols
  std::vector<SymbolId> parameters;  // t first, then Param symbols
  std::vector<std::vector<Expr>> coeff;  // [phase][parameter]
  std::vector<DeterminedRate> rates;
};

/// Throws InconsistentError for inconsistent closures and for non-involutive
/// ones unless `force` is set.
TotalDifferentialSystem eom_forms(const ClosureResult& closure, bool force = false);

}  // namespace hjpath
