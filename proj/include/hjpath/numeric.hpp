#pragma once

#include <map>
#include <string>
#include <vector>

#include "hjpath/action.hpp"
#include "hjpath/hj.hpp"
#include "hjpath/model.hpp"

namespace hjpath {

/// Prescribed profile of one evolution parameter as a function of tau.
class ParamCurve {
 public:
  enum class Kind { Constant, Polynomial, Samples };

  static ParamCurve constant(double value);
  /// coefficients[j] multiplies tau^j.
  static ParamCurve polynomial(std::vector<double> coefficients);
  /// Parses a polynomial in `tau` with constant coefficients, or a number.
  static ParamCurve parse(const std::string& text);
  /// Piecewise linear through values at tau0 + j * step.
  static ParamCurve samples(double tau0, double step, std::vector<double> values);

  Kind kind() const { return kind_; }
  double value(double tau) const;
  double rate(double tau) const;
  std::string describe() const;
  /// Same curve shifted so that value(0) == v.
  ParamCurve anchored(double v) const;

 private:
  Kind kind_ = Kind::Constant;
  std::vector<double> coeffs_{0.0};
  double tau0_ = 0, step_ = 1;
  std::vector<double> values_;
};

using CurveSet = std::map<SymbolId, ParamCurve>;

/// Uniform tau grid with phase values, parameter values and accumulated Z.
struct Trajectory {
  std::vector<SymbolId> phase;       // layout symbols
  std::vector<SymbolId> parameters;  // t first
  std::vector<double> tau;
  std::vector<std::vector<double>> x;       // [sample][phase]
  std::vector<std::vector<double>> params;  // [sample][parameter]
  std::vector<double> z;

  std::size_t size() const { return tau.size(); }
  /// Column of a phase or parameter symbol; throws Error if absent.
  std::vector<double> column(const SymbolId& s) const;
  /// Values of every phase symbol and parameter (plus Param -> coordinate
  /// aliases) at sample j.
  Point point(std::size_t j) const;
};

/// Overwrites solved momenta with -H_c at the guess and checks momentum-free
/// conditions to `tol`. Missing phase symbols default to 0; t defaults to 0.
/// Throws InconsistentError for violated conditions.
Point project_initial(const ClosureResult& closure, const Point& guess, double tol = 1e-10);

/// Classic fixed-step RK4 on dx/dtau = sum_alpha coeff_alpha(x) dt_alpha/dtau
/// with Z accumulated alongside. Free parameters follow `curves` (t = tau and
/// constant gauge parameters by default); determined parameters follow
/// their consistency rates. Throws NumericError on blow-up, naming the last
/// good tau.
Trajectory integrate(const ClosureResult& closure, const TotalDifferentialSystem& system, const ActionForm& form,
                     const CurveSet& curves, const Point& init, double dtau, double t_end);

struct OracleReport {
  std::vector<double> el_residual;  // per coordinate, max over the interior
  double constraint_drift = 0;
  std::map<std::string, double> comparisons;
};

/// Max over interior samples of the Euler-Lagrange expression
/// sum_s (-1)^s d^s/dt^s dL/dq_i^(s), with jets above level k-1 obtained by
/// central finite differences of the level k-1 series. Throws NumericError
/// when the grid is too short for the stencil.
std::vector<double> el_residual(const SystemSpec& spec, const Trajectory& traj);

/// Max |H'| over samples and every constraint (H0 excluded).
double constraint_drift(const ClosureResult& closure, const Trajectory& traj);

/// Integral of L dt along a trajectory (composite Simpson, trapezoid on a
/// leftover interval). Jets below level k come from the phase columns; the
/// top jet q^(k) is the velocity of q^(k-1) given by the equations of
/// motion, with parameter rates taken from finite differences of the
/// parameter columns.
double lagrangian_integral(const SystemSpec& spec, const TotalDifferentialSystem& system, const Trajectory& traj);

/// First-order system with coordinates name_s (s < k) and multipliers
/// lam{s}_name (s < k-1), Lagrangian L(y, y'_(k-1)) + sum lam (y_s' - y_(s+1)).
SystemSpec order_reduce(const SystemSpec& spec);

/// Trajectory as CSV: tau,t,<params>,<coords>,<momenta>,Z,<constraints>,
/// 17 significant digits.
std::string trajectory_csv(const Trajectory& traj, const ClosureResult& closure, const SymbolTable& table);

}  // namespace hjpath
