#pragma once

#include <string>
#include <vector>

#include "hjpath/hj.hpp"

namespace hjpath {

struct Trajectory;

/// Phase coordinates left after promoted coordinates and solved momenta
/// are removed.
struct ReducedPhaseSpace {
  std::vector<SymbolId> coordinates;
  std::vector<SymbolId> momenta;
  bool empty() const { return coordinates.empty() && momenta.empty(); }
};

ReducedPhaseSpace reduced_space(const ClosureResult& closure);

struct ActionTerm {
  SymbolId parameter;  // t or Param(s, i)
  std::string label;   // generator label
  Expr coefficient;    // -H + sum_a p_a dH'/dp_a over reduced momenta
};

/// dZ = sum over parametric generators of coefficient * dt_beta.
/// Promoted coordinates appear as their parameter symbols.
struct ActionForm {
  std::vector<ActionTerm> terms;
};

/// Throws InconsistentError unless the closure is first class (or
/// non-involutive with `force`).
ActionForm action_differential(const ClosureResult& closure, const ReducedPhaseSpace& reduced, bool force = false);

/// The path-integral exponent i Z with its parameter list and measure.
struct PathIntegralExponent {
  std::vector<ActionTerm> terms;
  std::vector<SymbolId> measure;  // reduced coordinates then momenta
  std::string text;
  std::string latex;
};

PathIntegralExponent path_integral_exponent(const ActionForm& form, const ReducedPhaseSpace& reduced,
                                            const SymbolTable& table);

struct PropagatorResult {
  double modulus = 0;
  double phase = 0;  // radians in (-pi, pi]
  int slices = 0;
  double convergence = 0;  // |modulus(slices) - modulus(slices / 2)|
  double classical_action = 0;
  double determinant_ratio = 0;  // slice determinant over its free-particle value
};

/// Quadratic Hamiltonian A p^2 + B q p + C q^2 + D p + E q + F with
/// constant coefficients and A > 0.
struct QuadraticHamiltonian {
  double a = 0, b = 0, c = 0, d = 0, e = 0, f = 0;
};

/// Extracts the coefficients; throws UnsupportedError outside the class
/// (n = 1, k = 1, regular, quadratic with constant coefficients, A > 0).
QuadraticHamiltonian quadratic_hamiltonian(const SystemSpec& spec, const LegendreAnalysis& analysis);

/// Midpoint time-sliced propagator <x1, T | x0, 0>. Momentum integrals are
/// done exactly; the remaining Gaussian uses an LDL^T factorization of the
/// tridiagonal slice Hessian. Throws NumericError ("caustic") when the
/// determinant ratio falls below `caustic_tol` times (T/slices)^2 times
/// max(1, |4AC - B^2|).
PropagatorResult propagator_quadratic(const QuadraticHamiltonian& h, double x0, double x1, double T, int slices,
                                      double caustic_tol = 1.0);
PropagatorResult propagator_quadratic(const SystemSpec& spec, double x0, double x1, double T, int slices);

/// Trapezoidal accumulation of sum_beta coefficient * delta t_beta along a
/// trajectory.
double classical_action(const Trajectory& traj, const ActionForm& form);

}  // namespace hjpath
