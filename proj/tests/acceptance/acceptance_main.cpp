// Acceptance run: one PASS/FAIL line per criterion, non-zero exit when any
// criterion fails.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../golden.hpp"
#include "../pipeline.hpp"
#include "../support.hpp"
#include "hjpath/errors.hpp"
#include "hjpath/normal_form.hpp"
#include "hjpath/report.hpp"

using namespace hjpath;
using hjtest::analyze;
using hjtest::p;
using hjtest::q;

namespace {

/// Failed expectations and informational notes of one criterion.
struct Verdict {
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void note(const std::string& s) { notes.push_back(s); }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string systems(const std::string& name) { return std::string(HJPATH_DATA_DIR) + "/systems/" + name; }

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = a.size() == b.size() ? 0.0 : INFINITY;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

// Direct fixed-step RK4 for q'''' = -5 q'' - 4 q, sampled on the same grid.
std::vector<double> pu_direct(std::array<double, 4> y, double h, long steps) {
  auto f = [](const std::array<double, 4>& s) {
    return std::array<double, 4>{s[1], s[2], s[3], -5 * s[2] - 4 * s[0]};
  };
  std::vector<double> out{y[0]};
  for (long n = 0; n < steps; ++n) {
    auto k1 = f(y);
    std::array<double, 4> t{};
    for (int i = 0; i < 4; ++i) t[i] = y[i] + 0.5 * h * k1[i];
    auto k2 = f(t);
    for (int i = 0; i < 4; ++i) t[i] = y[i] + 0.5 * h * k2[i];
    auto k3 = f(t);
    for (int i = 0; i < 4; ++i) t[i] = y[i] + h * k3[i];
    auto k4 = f(t);
    for (int i = 0; i < 4; ++i) y[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    out.push_back(y[0]);
  }
  return out;
}

// ---------------------------------------------------------------------------

void c1(Verdict& v) {
  auto osc = analyze(load_hjl(systems("oscillator.hjl")));
  v.expect(osc.an.partition.r() == 0, "r = 0");
  v.expect(equivalent(osc.an.h0, osc.P("p^2/2 + q^2/2")), "H0 = p^2/2 + q^2/2");
  auto tr = osc.run({{q(1), 1.0}, {p(0, 1), 0.0}}, 1e-3, 10.0);
  double err = std::abs(tr.column(q(1)).back() - std::cos(10.0));
  v.expect(err <= 1e-6, "q(10) vs cos 10");
  v.note("|q(10) - cos 10| = " + sci(err));
}

void c2(Verdict& v) {
  auto bh = analyze(load_hjl(systems("biharmonic.hjl")));
  v.expect(bh.closure.report.status == ClosureStatus::ClosedFirstClass, "closed");
  v.expect(bh.closure.report.added.empty(), "closure adds nothing");
  v.expect(bh.closure.set.generators.size() == 1, "only H0");
  const double a = 0.3, b = -0.7, c = 1.1, d = -2.4;
  auto tr = bh.run({{q(1), a}, {q(1, 1), b}, {p(1, 1), c}, {p(0, 1), d}}, 1e-3, 1.0);
  auto t = tr.column(SymbolId::time());
  std::vector<double> cubic;
  for (double s : t) cubic.push_back(a + b * s + c * s * s / 2 - d * s * s * s / 6);
  double err = max_abs_diff(tr.column(q(1)), cubic);
  v.expect(err <= 1e-6, "trajectory vs cubic");
  v.note("max |q - cubic| = " + sci(err));
}

void c3(Verdict& v) {
  auto pu = analyze(load_hjl(systems("pu.hjl")));
  const double q0 = 0.8, v0 = -0.3, p1 = 0.5, p0 = 0.2;
  auto tr = pu.run({{q(1), q0}, {q(1, 1), v0}, {p(1, 1), p1}, {p(0, 1), p0}}, 1e-3, 10.0);
  double el = el_residual(pu.spec, tr)[0];
  v.expect(el <= 1e-5, "Euler-Lagrange residual");
  // p1 = q'' and dp1/dt = -p0 - 5 q' for this Lagrangian.
  auto direct = pu_direct({q0, v0, p1, -p0 - 5 * v0}, 1e-3, 10000);
  double err = max_abs_diff(tr.column(q(1)), direct);
  v.expect(err <= 1e-5, "HJ trajectory vs direct fourth-order integration");
  v.note("EL residual " + sci(el) + ", max |q_HJ - q_direct| = " + sci(err));
}

void c4(Verdict& v) {
  auto s2 = analyze(load_hjl(systems("s2.hjl")));
  const auto& rep = s2.closure.report;
  v.expect(s2.an.partition.r() == 1, "r = 1");
  v.expect(rep.status == ClosureStatus::ClosedFirstClass, "closed_first_class");
  v.expect(rep.iterations <= 3, "at most 3 iterations");
  const char* chain[] = {"p1_2", "p0_2 + p1_1", "p0_1"};
  const auto cons = s2.closure.set.constraints();
  v.expect(cons.size() == 3, "exactly three constraints");
  for (std::size_t i = 0; i < std::min<std::size_t>(3, cons.size()); ++i)
    v.expect(equivalent(cons[i]->expr, s2.P(chain[i])), std::string("chain member ") + chain[i]);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double drift = 0, spread = 0;
  for (int trial = 0; trial < 3; ++trial) {
    CurveSet curves;
    for (const auto& prm : eom_forms(s2.closure).parameters)
      if (prm.kind == SymbolKind::Param) curves[prm] = ParamCurve::polynomial({u(rng), u(rng), u(rng), u(rng)});
    Point init{{q(1, 1), u(rng)}, {q(2, 1), u(rng)}, {p(1, 1), u(rng)}};
    auto tr = s2.run(init, 1e-3, 1.0, curves);
    drift = std::max(drift, constraint_drift(s2.closure, tr));
    auto col = tr.column(p(1, 1));
    for (double x : col) spread = std::max(spread, std::abs(x - col.front()));
  }
  v.expect(drift <= 1e-8, "constraint drift");
  v.expect(spread <= 1e-8, "u = p1_1 constant");
  v.note(std::to_string(rep.iterations) + " iterations, drift " + sci(drift) + ", u spread " + sci(spread));
}

void c5(Verdict& v) {
  auto ni = analyze(load_hjl(systems("noninvolutive.hjl")));
  v.expect(ni.closure.report.status == ClosureStatus::NonInvolutive, "status non_involutive");
  bool unit = false;
  for (const auto& e : ni.closure.report.trace) unit = unit || equivalent(e.residual, Expr(1));
  v.expect(unit, "bracket residual 1 in the trace");
}

void c6(Verdict& v) {
  auto direct = analyze(load_hjl(systems("biharmonic.hjl")));
  auto red = analyze(order_reduce(direct.spec));
  v.expect(red.spec.k() == 1, "reduced system is first order");
  const double a = 0.2, b = -0.4, c = 0.7, d = -1.1;
  auto ta = direct.run({{q(1), a}, {q(1, 1), b}, {p(1, 1), c}, {p(0, 1), d}}, 1e-3, 1.0);
  // y0 = q, y1 = q', lambda = p0, p_y1 = p1, p_y0 = lambda, p_lambda = 0.
  auto tb = red.run({{q(1), a}, {q(2), b}, {q(3), d}, {p(0, 2), c}, {p(0, 1), d}, {p(0, 3), 0.0}}, 1e-3, 1.0, {},
                    true);
  double err = std::max(max_abs_diff(ta.column(q(1)), tb.column(q(1))),
                        max_abs_diff(ta.column(q(1, 1)), tb.column(q(2))));
  v.expect(err <= 1e-6, "direct and reduced trajectories agree on q, q'");
  v.note("max deviation " + sci(err) + " (reduced status " + status_name(red.closure.report.status) + ")");

  for (const char* name : {"oscillator", "free", "rotation", "noninvolutive", "total_derivative"}) {
    auto an = analyze_system(load_hjl(systems(std::string(name) + ".hjl")), {});
    auto golden = hjtest::load_json(std::string(HJPATH_TEST_DIR) + "/golden/" + name + ".json");
    std::string diff = hjtest::golden_mismatch(an, golden);
    v.expect(diff.empty(), std::string("golden ") + name + ": " + diff);
    // First-order structure: 1 + r generators before closure and
    // dt-coefficient p dH/dp - H.
    auto gens = build_generators(an.spec, an.legendre);
    v.expect(gens.generators.size() == static_cast<std::size_t>(1 + an.legendre.partition.r()),
             std::string("1 + r generators for ") + name);
  }
  auto osc = analyze_system(load_hjl(systems("oscillator.hjl")), {});
  Expr h = osc.legendre.h0, pp = Expr(p(0, 1));
  v.expect(equivalent(osc.action->terms[0].coefficient, pp * differentiate(h, p(0, 1)) - h), "p dH/dp - H");
}

void c7(Verdict& v) {
  struct Case {
    const char* file;
    Point init;
    double T;
  };
  std::vector<Case> cases{{"oscillator.hjl", {{q(1), 1.0}}, 10.0},
                          {"biharmonic.hjl", {{q(1), 0.3}, {q(1, 1), -0.7}, {p(1, 1), 1.1}, {p(0, 1), -2.4}}, 1.0},
                          {"pu.hjl", {{q(1), 0.8}, {q(1, 1), -0.3}, {p(1, 1), 0.5}, {p(0, 1), 0.2}}, 10.0}};
  std::string summary;
  for (const auto& c : cases) {
    auto sys = analyze(load_hjl(systems(c.file)));
    auto tr = sys.run(c.init, 1e-3, c.T);
    double lint = lagrangian_integral(sys.spec, eom_forms(sys.closure), tr);
    double z = tr.z.back();
    double zt = classical_action(tr, action_differential(sys.closure, sys.reduced));
    double gap = std::abs(z - lint);
    v.expect(gap <= 1e-6 * (1 + std::abs(lint)), std::string("int dZ vs int L dt for ") + c.file);
    v.expect(std::abs(zt - z) <= 1e-5 * (1 + std::abs(z)), std::string("trapezoidal Z for ") + c.file);
    summary += std::string(summary.empty() ? "" : ", ") + c.file + " " + sci(gap);
  }
  v.note("|Z - int L dt|: " + summary);
}

void c8(Verdict& v) {
  using std::numbers::pi;
  auto fr = load_hjl(systems("free.hjl"));
  double worst = 0;
  for (double T : {0.5, 1.0, 2.0})
    for (int n : {2, 3, 10, 64, 1000})
      worst = std::max(worst, std::abs(propagator_quadratic(fr, 0.0, 1.0, T, n).modulus - 1 / std::sqrt(2 * pi * T)));
  v.expect(worst <= 1e-9, "free modulus 1/sqrt(2 pi T) at every slice count");
  auto osc = load_hjl(systems("oscillator.hjl"));
  double m = propagator_quadratic(osc, 0.0, 0.5, 1.0, 1000).modulus;
  double err = std::abs(m - 1 / std::sqrt(2 * pi * std::sin(1.0)));
  v.expect(err <= 1e-3, "oscillator modulus at T = 1");
  bool caustic = false;
  try {
    propagator_quadratic(osc, 0.0, 0.5, pi, 1000);
  } catch (const NumericError& e) {
    caustic = std::string(e.what()).find("caustic") != std::string::npos;
  }
  v.expect(caustic, "caustic error at T = pi");
  v.note("free error " + sci(worst) + ", oscillator error " + sci(err));
}

void c9(Verdict& v) {
  auto layout = phase_layout(2, 2);
  auto syms = layout.symbols();
  hjtest::ExprGen gen(syms, 909, false);
  std::vector<Expr> corpus;
  for (int i = 0; i < 50; ++i) corpus.push_back(gen(2));
  bool anti = true, leibniz = true;
  for (int i = 0; i < 50; ++i) {
    const Expr& f = corpus[static_cast<std::size_t>(i)];
    const Expr& g = corpus[static_cast<std::size_t>((i + 1) % 50)];
    const Expr& h = corpus[static_cast<std::size_t>((i + 7) % 50)];
    anti = anti && normalize(poisson_bracket(f, g, layout) + poisson_bracket(g, f, layout)).is_zero();
    leibniz = leibniz && normalize(poisson_bracket(f, g * h, layout) - g * poisson_bracket(f, h, layout) -
                                   poisson_bracket(f, g, layout) * h)
                             .is_zero();
  }
  v.expect(anti, "antisymmetry");
  v.expect(leibniz, "Leibniz rule");
  hjtest::ExprGen tgen(syms, 910, true);
  std::vector<Expr> jc;
  for (int i = 0; i < 30; ++i) jc.push_back(tgen(2));
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const Expr& f = jc[static_cast<std::size_t>(i % 30)];
    const Expr& g = jc[static_cast<std::size_t>((i + 11) % 30)];
    const Expr& h = jc[static_cast<std::size_t>((i + 19) % 30)];
    Expr jac = poisson_bracket(f, poisson_bracket(g, h, layout), layout) +
               poisson_bracket(g, poisson_bracket(h, f, layout), layout) +
               poisson_bracket(h, poisson_bracket(f, g, layout), layout);
    worst = std::max(worst, std::abs(evaluate(jac, tgen.random_point(-1.0, 1.0))));
  }
  v.expect(worst <= 1e-8, "Jacobi residual");
  v.note("Jacobi max residual " + sci(worst));
}

void c10(Verdict& v) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(std::string(HJPATH_DATA_DIR) + "/systems"))
    files.push_back(e.path());
  std::sort(files.begin(), files.end());
  RunOptions opt;
  opt.seed = 1234;
  Json header = run_header("analyze", Json{{"seed", opt.seed}});
  auto render = [&](const std::filesystem::path& f) {
    try {
      auto a = analyze_system(load_hjl(f.string()), opt);
      return report_json(a, header).dump(2) + report_text(a, header) + report_latex(a);
    } catch (const Error& e) {
      return std::string("error: ") + e.what();
    }
  };
  for (const auto& f : files) v.expect(render(f) == render(f), "byte-identical report for " + f.filename().string());

  auto osc = analyze(load_hjl(systems("oscillator.hjl")));
  auto csv = [&] {
    return trajectory_csv(osc.run({{q(1), 1.0}}, 1e-2, 2.0), osc.closure, osc.spec.table());
  };
  v.expect(csv() == csv(), "byte-identical trajectory CSV");
  v.note(std::to_string(files.size()) + " corpus files");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    std::function<void(Verdict&)> run;
  };
  std::vector<Criterion> all{
      {1, "regular oscillator: r = 0, H0, q(10) = cos 10", c1},
      {2, "L = q''^2/2: no new constraints, cubic trajectory", c2},
      {3, "Pais-Uhlenbeck: EL residual and direct fourth-order integration", c3},
      {4, "S2: rank, constraint chain, drift and gauge invariance", c4},
      {5, "non-involutive detection", c5},
      {6, "order reduction and k = 1 golden structure", c6},
      {7, "action consistency int dZ = int L dt", c7},
      {8, "propagators: free, oscillator, caustic", c8},
      {9, "bracket algebra", c9},
      {10, "determinism across the corpus", c10},
  };
  int failed = 0;
  for (const auto& c : all) {
    Verdict v;
    auto start = std::chrono::steady_clock::now();
    try {
      c.run(v);
    } catch (const std::exception& e) {
      v.failures.push_back(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = v.failures.empty();
    failed += pass ? 0 : 1;
    std::printf("%s criterion %d: %s (%.2fs)\n", pass ? "PASS" : "FAIL", c.id, c.title, secs);
    for (const auto& n : v.notes) std::printf("     %s\n", n.c_str());
    for (const auto& f : v.failures) std::printf("     failed: %s\n", f.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
