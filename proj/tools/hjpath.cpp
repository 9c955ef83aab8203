// Command-line front end: analyze, integrate, action, propagate, reduce, check.
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "hjpath/errors.hpp"
#include "hjpath/normal_form.hpp"
#include "hjpath/numeric.hpp"
#include "hjpath/parser.hpp"
#include "hjpath/report.hpp"

using namespace hjpath;

namespace {

enum Exit { kOk = 0, kParse = 1, kUnsupported = 2, kInconsistent = 3, kNumeric = 4 };

struct Globals {
  std::string format = "text";
  std::uint64_t seed = 0;
  int rank_samples = 5;
  int max_iter = 32;
  double tol = 1e-10;

  RunOptions options() const { return {seed, rank_samples, max_iter, tol}; }
  Json flags() const {
    return {{"format", format}, {"seed", seed}, {"rank_samples", rank_samples}, {"max_iter", max_iter}, {"tol", tol}};
  }
};

int status_exit(ClosureStatus s) { return s == ClosureStatus::ClosedFirstClass ? kOk : kInconsistent; }

SymbolId symbol_named(const std::string& name, const SymbolTable& table) {
  Expr e = parse(name, table);
  if (e.kind() != ExprKind::Symbol) throw ParseError("'" + name + "' is not a symbol name");
  return e.symbol();
}

std::pair<std::string, std::string> split_assign(const std::string& item) {
  auto eq = item.find('=');
  if (eq == std::string::npos) throw ParseError("expected NAME=VALUE, got '" + item + "'");
  auto trim = [](std::string s) {
    s.erase(0, s.find_first_not_of(" \t"));
    s.erase(s.find_last_not_of(" \t") + 1);
    return s;
  };
  return {trim(item.substr(0, eq)), trim(item.substr(eq + 1))};
}

double number(const std::string& text) {
  Expr e = parse(text, SymbolTable{});
  auto v = simplify(e);
  if (!v.is_constant()) throw ParseError("'" + text + "' is not a number");
  return v.value().get_d();
}

Point parse_init(const std::vector<std::string>& items, const SymbolTable& table) {
  Point pt;
  for (const auto& group : items) {
    std::stringstream ss(group);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.find_first_not_of(" \t") == std::string::npos) continue;
      auto [name, value] = split_assign(item);
      pt[symbol_named(name, table)] = number(value);
    }
  }
  return pt;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void emit(const Json& doc, const std::string& text, const std::string& latex, const Globals& g) {
  if (g.format == "json")
    std::cout << doc.dump(2) << '\n';
  else if (g.format == "latex")
    std::cout << latex;
  else
    std::cout << text;
}

// ---------------------------------------------------------------- analyze

int cmd_analyze(const std::string& path, const Globals& g) {
  auto a = analyze_system(load_hjl(path), g.options());
  Json header = run_header("analyze", g.flags());
  header["flags"]["file"] = path;
  emit(report_json(a, header), report_text(a, header), report_latex(a), g);
  return status_exit(a.closure.report.status);
}

// -------------------------------------------------------------- integrate

struct IntegrateArgs {
  std::vector<std::string> init;
  std::vector<std::string> curves;
  double t_end = 1.0;
  double dt = 1e-3;
  std::string out;
  bool force = false;
};

int cmd_integrate(const std::string& path, const Globals& g, const IntegrateArgs& args) {
  SystemSpec spec = load_hjl(path);
  auto a = analyze_system(spec, g.options());
  const auto status = a.closure.report.status;
  if (status != ClosureStatus::ClosedFirstClass && !(args.force && status == ClosureStatus::NonInvolutive))
    throw InconsistentError(std::string("cannot integrate: closure status is ") + status_name(status) +
                            (status == ClosureStatus::NonInvolutive ? " (use --force)" : ""));
  const SymbolTable table = spec.table();
  CurveSet curves;
  for (const auto& c : args.curves) {
    auto [name, text] = split_assign(c);
    curves[symbol_named(name, table)] = ParamCurve::parse(text);
  }
  Point init = project_initial(a.closure, parse_init(args.init, table), g.tol);
  Trajectory traj = integrate(a.closure, *a.eom, *a.action, curves, init, args.dt, args.t_end);

  std::string csv = trajectory_csv(traj, a.closure, table);
  if (!args.out.empty()) {
    std::ofstream f(args.out, std::ios::binary);
    if (!f) throw Error("cannot write " + args.out);
    f << csv;
  }

  Json header = run_header("integrate", g.flags());
  Json& fl = header["flags"];
  fl["file"] = path;
  fl["init"] = args.init;
  fl["curves"] = args.curves;
  fl["t_end"] = args.t_end;
  fl["dt"] = args.dt;
  fl["out"] = args.out;
  fl["force"] = args.force;

  Json doc;
  doc["run"] = header;
  doc["status"] = status_name(status);
  doc["samples"] = traj.size();
  Json fin = Json::object();
  for (const auto& s : traj.parameters) fin[table.print(s)] = traj.column(s).back();
  for (const auto& s : traj.phase) fin[table.print(s)] = traj.column(s).back();
  doc["final"] = fin;
  doc["Z"] = traj.z.back();

  Json oracle = Json::object();
  try {
    auto el = el_residual(spec, traj);
    Json e = Json::object();
    for (std::size_t i = 0; i < el.size(); ++i) e[spec.coordinates[i]] = el[i];
    oracle["el_residual"] = e;
  } catch (const NumericError& err) {
    oracle["el_residual"] = nullptr;
    oracle["el_residual_note"] = err.what();
  }
  oracle["constraint_drift"] = constraint_drift(a.closure, traj);
  try {
    double lint = lagrangian_integral(spec, *a.eom, traj);
    oracle["integral_L_dt"] = lint;
    oracle["action_mismatch"] = std::abs(traj.z.back() - lint);
  } catch (const NumericError&) {
    oracle["integral_L_dt"] = nullptr;
  }
  for (const auto& prm : traj.parameters)
    if (prm.kind == SymbolKind::Param) {
      oracle["action_note"] = "gauge parameters evolve independently of t; Z and int L dt agree only on t-only flows";
      break;
    }
  doc["oracle"] = oracle;

  if (args.out.empty()) {
    std::cout << csv;
    std::cerr << doc.dump(2) << '\n';
    return kOk;
  }
  std::ostringstream text;
  text << "integrated " << traj.size() - 1 << " steps to tau = " << fmt(traj.tau.back()) << " ("
       << status_name(status) << ")\n";
  for (const auto& [k, v] : fin.items()) text << "  " << k << " = " << fmt(v.get<double>()) << '\n';
  text << "  Z = " << fmt(traj.z.back()) << '\n';
  if (oracle["el_residual"].is_object())
    for (const auto& [k, v] : oracle["el_residual"].items())
      text << "  EL residual " << k << " = " << fmt(v.get<double>()) << '\n';
  text << "  constraint drift = " << fmt(oracle["constraint_drift"].get<double>()) << '\n';
  if (oracle["integral_L_dt"].is_number())
    text << "  int L dt = " << fmt(oracle["integral_L_dt"].get<double>()) << ", |Z - int L dt| = "
         << fmt(oracle["action_mismatch"].get<double>()) << '\n';
  text << "  csv: " << args.out << '\n';
  emit(doc, text.str(), "% integration summary is available as text or json\n", g);
  return kOk;
}

// ----------------------------------------------------------------- action

int cmd_action(const std::string& path, const Globals& g) {
  auto a = analyze_system(load_hjl(path), g.options());
  Json header = run_header("action", g.flags());
  header["flags"]["file"] = path;
  emit(action_json(a, header), action_text(a), action_latex(a), g);
  if (!a.action) return kInconsistent;
  return status_exit(a.closure.report.status);
}

// -------------------------------------------------------------- propagate

struct PropagateArgs {
  double x0 = 0, x1 = 0, T = 1;
  int slices = 1000;
};

int cmd_propagate(const std::string& path, const Globals& g, const PropagateArgs& args) {
  SystemSpec spec = load_hjl(path);
  auto r = propagator_quadratic(spec, args.x0, args.x1, args.T, args.slices);
  Json header = run_header("propagate", g.flags());
  Json& fl = header["flags"];
  fl["file"] = path;
  fl["x0"] = args.x0;
  fl["x1"] = args.x1;
  fl["T"] = args.T;
  fl["slices"] = args.slices;
  Json doc{{"run", header},
           {"modulus", r.modulus},
           {"phase", r.phase},
           {"slices", r.slices},
           {"convergence", std::isnan(r.convergence) ? Json(nullptr) : Json(r.convergence)},
           {"classical_action", r.classical_action},
           {"determinant_ratio", r.determinant_ratio}};
  std::ostringstream text;
  text << "propagator <" << fmt(args.x1) << ", " << fmt(args.T) << " | " << fmt(args.x0) << ", 0> with "
       << r.slices << " slices\n"
       << "  modulus = " << fmt(r.modulus) << "\n  phase = " << fmt(r.phase) << "\n  convergence = "
       << fmt(r.convergence) << "\n  classical action = " << fmt(r.classical_action) << '\n';
  std::ostringstream tex;
  tex << "\\[ K = " << fmt(r.modulus) << "\\, e^{i\\,(" << fmt(r.phase) << ")} \\]\n";
  emit(doc, text.str(), tex.str(), g);
  return kOk;
}

// ----------------------------------------------------------------- reduce

int cmd_reduce(const std::string& path, const Globals& g) {
  SystemSpec spec = load_hjl(path);
  SystemSpec red = order_reduce(spec);
  Json header = run_header("reduce", g.flags());
  header["flags"]["file"] = path;
  Json doc{{"run", header},
           {"coordinates", red.coordinates},
           {"order", red.order},
           {"lagrangian", red.lagrangian_text},
           {"hjl", write_hjl(red)}};
  std::string tex = "\\[ L' = " + to_latex(red.lagrangian, red.table()) + " \\]\n";
  emit(doc, write_hjl(red), tex, g);
  return kOk;
}

// ------------------------------------------------------------------ check

struct Check {
  std::string name;
  bool pass;
  std::string detail;
};

int cmd_check(const std::string& path, const Globals& g) {
  SystemSpec spec = load_hjl(path);
  auto a = analyze_system(spec, g.options());
  const auto& L = a.legendre;
  const SymbolTable table = spec.table();
  const int k = spec.k();
  std::vector<Check> checks;

  bool ok = true;
  for (int i : L.partition.regular)
    ok = ok && normalize(differentiate(L.h0, SymbolId::momentum(k - 1, i)) - L.w.w.at(i)).is_zero();
  checks.push_back({"legendre_round_trip", ok, ""});
  ok = true;
  for (int i = 1; i <= spec.n(); ++i) ok = ok && normalize(differentiate(L.h0, SymbolId::jet(i, k))).is_zero();
  checks.push_back({"h0_free_of_top_jets", ok, ""});

  const auto& gens = a.closure.set.generators;
  const auto& layout = a.closure.set.layout;
  ok = true;
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      ok = ok && normalize(poisson_bracket(gens[i].expr, gens[j].expr, layout) +
                           poisson_bracket(gens[j].expr, gens[i].expr, layout))
                     .is_zero();
  checks.push_back({"bracket_antisymmetry", ok, ""});

  {
    std::mt19937_64 rng(g.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Expr> fs;
    for (const auto& gen : gens) fs.push_back(gen.expr);
    for (const auto& s : layout.symbols()) fs.push_back(Expr(s) * Expr(s));
    double worst = 0;
    for (std::size_t i = 0; i < fs.size(); ++i)
      for (std::size_t j = i + 1; j < fs.size(); ++j)
        for (std::size_t l = j + 1; l < fs.size() && l < j + 3; ++l) {
          Expr jac = poisson_bracket(fs[i], poisson_bracket(fs[j], fs[l], layout), layout) +
                     poisson_bracket(fs[j], poisson_bracket(fs[l], fs[i], layout), layout) +
                     poisson_bracket(fs[l], poisson_bracket(fs[i], fs[j], layout), layout);
          for (int s = 0; s < 5; ++s) {
            Point pt;
            for (const auto& x : free_symbols(jac)) pt[x] = u(rng);
            worst = std::max(worst, std::abs(evaluate(jac, pt)));
          }
        }
    checks.push_back({"jacobi_identity", worst <= 1e-8, "max residual " + fmt(worst)});
  }

  const auto status = a.closure.report.status;
  checks.push_back({"closure_terminated", status != ClosureStatus::MaxIterExceeded, status_name(status)});
  if (status == ClosureStatus::ClosedFirstClass) {
    ok = true;
    for (const auto& e : a.closure.report.table) ok = ok && a.closure.weak(e.residual).is_zero();
    checks.push_back({"closed_brackets_vanish_weakly", ok, ""});
  }

  if (a.eom) {
    std::mt19937_64 rng(g.seed + 1);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    Point guess;
    for (const auto& s : layout.symbols()) guess[s] = u(rng);
    // Coordinates pinned by linear conditions are moved onto the surface.
    for (const auto& [s, rhs] : a.closure.surface)
      if (s.kind == SymbolKind::Jet) guess[s] = evaluate(rhs, guess);
    bool gauge = false;
    for (const auto& prm : a.eom->parameters) gauge = gauge || prm.kind == SymbolKind::Param;
    try {
      Point init = project_initial(a.closure, guess, g.tol);
      Trajectory traj = integrate(a.closure, *a.eom, *a.action, {}, init, 1e-3, 1.0);
      double drift = constraint_drift(a.closure, traj);
      checks.push_back({"constraint_drift", drift <= 1e-8, fmt(drift)});
      double el = 0;
      for (double v : el_residual(spec, traj)) el = std::max(el, v);
      checks.push_back({"euler_lagrange_residual", el <= 1e-4, fmt(el)});
      if (gauge) {
        // Frozen gauge curves are not Lagrangian paths, so Z and int L dt differ.
        checks.push_back({"action_matches_lagrangian", true, "skipped: gauge parameters present"});
      } else {
        double lint = lagrangian_integral(spec, *a.eom, traj);
        double mismatch = std::abs(traj.z.back() - lint);
        checks.push_back({"action_matches_lagrangian", mismatch <= 1e-6 * (1 + std::abs(lint)), fmt(mismatch)});
      }
    } catch (const InconsistentError& e) {
      checks.push_back({"numeric_flow", true, std::string("skipped: ") + e.what()});
    }
  }

  bool all = true;
  Json arr = Json::array();
  std::ostringstream text;
  for (const auto& c : checks) {
    all = all && c.pass;
    arr.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    text << (c.pass ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : "  (" + c.detail + ")") << '\n';
  }
  Json header = run_header("check", g.flags());
  header["flags"]["file"] = path;
  Json doc{{"run", header}, {"status", status_name(status)}, {"checks", arr}, {"all_pass", all}};
  emit(doc, text.str(), "% check results are available as text or json\n", g);
  return all ? kOk : kInconsistent;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hamilton-Jacobi constraint analysis for higher-order Lagrangians"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"text", "json", "latex"}));
  app.add_option("--seed", g.seed, "seed for rank sampling and random checks");
  app.add_option("--rank-samples", g.rank_samples, "sample points for the generic rank")->check(CLI::PositiveNumber);
  app.add_option("--max-iter", g.max_iter, "closure iteration limit")->check(CLI::PositiveNumber);
  app.add_option("--tol", g.tol, "tolerance for initial-data conditions");

  std::string file;
  auto* analyze = app.add_subcommand("analyze", "full constraint analysis report");
  analyze->add_option("file", file, ".hjl input")->required();

  IntegrateArgs ia;
  auto* integ = app.add_subcommand("integrate", "integrate the total differential equations");
  integ->add_option("file", file, ".hjl input")->required();
  integ->add_option("--init", ia.init, "initial values, NAME=VALUE[,NAME=VALUE...]");
  integ->add_option("--curve", ia.curves, "parameter curve NAME=POLY(tau)");
  integ->add_option("--t-end", ia.t_end, "tau at the end of the run");
  integ->add_option("--dt", ia.dt, "tau step");
  integ->add_option("--out", ia.out, "CSV output path (stdout when omitted)");
  integ->add_flag("--force", ia.force, "integrate non-involutive systems with determined rates");

  auto* action = app.add_subcommand("action", "action differential and path-integral exponent");
  action->add_option("file", file, ".hjl input")->required();

  PropagateArgs pa;
  auto* prop = app.add_subcommand("propagate", "time-sliced propagator of a quadratic system");
  prop->add_option("file", file, ".hjl input")->required();
  prop->add_option("--x0", pa.x0, "start point");
  prop->add_option("--x1", pa.x1, "end point");
  prop->add_option("--T", pa.T, "propagation time");
  prop->add_option("--slices", pa.slices, "time slices")->check(CLI::Range(2, 100000000));

  auto* reduce = app.add_subcommand("reduce", "first-order system with multipliers");
  reduce->add_option("file", file, ".hjl input")->required();

  auto* check = app.add_subcommand("check", "run the property suite on one system");
  check->add_option("file", file, ".hjl input")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  try {
    if (*analyze) return cmd_analyze(file, g);
    if (*integ) return cmd_integrate(file, g, ia);
    if (*action) return cmd_action(file, g);
    if (*prop) return cmd_propagate(file, g, pa);
    if (*reduce) return cmd_reduce(file, g);
    if (*check) return cmd_check(file, g);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << '\n';
    return kUnsupported;
  } catch (const RankError& e) {
    std::cerr << "unsupported: " << e.what() << '\n';
    return kUnsupported;
  } catch (const InconsistentError& e) {
    std::cerr << "inconsistent: " << e.what() << '\n';
    return kInconsistent;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  }
  return kOk;
}
