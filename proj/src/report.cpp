#include "hjpath/report.hpp"

#include <cstdio>
#include <sstream>

#include "hjpath/errors.hpp"
#include "hjpath/normal_form.hpp"
#include "hjpath/parser.hpp"

namespace hjpath {

namespace {

const char* kLowerMomentaNote =
    "lower-level momenta are independent phase coordinates; the Ostrogradsky relation "
    "p_(s-1) = dL/dq^(s) - d/dt p_(s) is recovered from the flow and not imposed as a definition";
const char* kAllMomentaNote = "dp equations are produced for every momentum, regular and degenerate alike";
const char* kSecondClassNote =
    "constraints are second class; equations of motion carry determined parameter rates and the "
    "action is shown for reference only";
const char* kGaugeEndpointNote =
    "gauge-parameter integrals in the exponent are written as a single collective integral; their "
    "endpoints are not interpreted";

std::string ex(const Expr& e, const SymbolTable& t) { return to_string(simplify(e), &t); }

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

std::vector<std::string> names(const std::vector<SymbolId>& v, const SymbolTable& t) {
  std::vector<std::string> out;
  for (const auto& s : v) out.push_back(t.print(s));
  return out;
}

std::vector<std::string> coord_names(const std::vector<int>& idx, const SystemSpec& spec) {
  std::vector<std::string> out;
  for (int i : idx) out.push_back(spec.coordinates[static_cast<std::size_t>(i - 1)]);
  return out;
}

Json trace_json(const std::vector<TraceEntry>& entries, const SymbolTable& t) {
  Json arr = Json::array();
  for (const auto& e : entries)
    arr.push_back({{"iteration", e.iteration},
                   {"bracket", {e.a, e.b}},
                   {"residual", ex(e.residual, t)},
                   {"action_taken", e.action}});
  return arr;
}

Json rates_json(const std::vector<DeterminedRate>& rates, const SymbolTable& t) {
  Json arr = Json::array();
  for (const auto& r : rates) {
    Json c = Json::object();
    for (const auto& [nu, e] : r.coeff) c[t.print(nu)] = ex(e, t);
    arr.push_back({{"parameter", t.print(r.parameter)}, {"coefficients", c}});
  }
  return arr;
}

Json form_terms_json(const ActionForm& form, const SymbolTable& t) {
  Json arr = Json::array();
  for (const auto& term : form.terms)
    arr.push_back(
        {{"parameter", t.print(term.parameter)}, {"generator", term.label}, {"coefficient", ex(term.coefficient, t)}});
  return arr;
}

// Keys whose string values (or array/object members) are expressions.
bool expression_key(const std::string& k) {
  static const char* keys[] = {"lagrangian", "hessian",  "top_momenta", "accelerations", "primary_constraints",
                               "H0",         "expr",     "reduced",     "residual",      "coefficient",
                               "coefficients"};
  for (const char* x : keys)
    if (k == x) return true;
  return false;
}

Json recanon(const Json& v, const SymbolTable& t, bool in_expr) {
  if (v.is_string() && in_expr) return ex(parse(v.get<std::string>(), t), t);
  if (v.is_array()) {
    Json out = Json::array();
    for (const auto& x : v) out.push_back(recanon(x, t, in_expr));
    return out;
  }
  if (v.is_object()) {
    Json out = Json::object();
    for (const auto& [k, x] : v.items()) out[k] = recanon(x, t, in_expr || expression_key(k));
    return out;
  }
  return v;
}

}  // namespace

Analysis analyze_system(const SystemSpec& spec, const RunOptions& options) {
  Analysis a;
  a.spec = spec;
  a.legendre = legendre_transform(spec, options.rank_samples, options.seed);
  a.closure = integrability_closure(build_generators(spec, a.legendre), options.max_iter);
  a.reduced = reduced_space(a.closure);
  auto status = a.closure.report.status;
  if (status == ClosureStatus::ClosedFirstClass || status == ClosureStatus::NonInvolutive) {
    a.forced = status == ClosureStatus::NonInvolutive;
    a.eom = eom_forms(a.closure, a.forced);
    a.action = action_differential(a.closure, a.reduced, a.forced);
  }
  if (spec.k() >= 2) a.warnings.push_back(kLowerMomentaNote);
  a.warnings.push_back(kAllMomentaNote);
  if (a.forced) a.warnings.push_back(kSecondClassNote);
  if (a.action)
    for (const auto& term : a.action->terms)
      if (term.parameter.kind == SymbolKind::Param) {
        a.warnings.push_back(kGaugeEndpointNote);
        break;
      }
  return a;
}

Json run_header(const std::string& command, const Json& flags) {
  return {{"tool", kToolName}, {"version", kVersion}, {"command", command}, {"flags", flags}};
}

Json report_json(const Analysis& a, const Json& header) {
  const SymbolTable t = a.spec.table();
  const auto& L = a.legendre;
  Json doc;
  doc["run"] = header;
  doc["system"] = {{"coordinates", a.spec.coordinates}, {"order", a.spec.order}, {"lagrangian", ex(a.spec.lagrangian, t)}};

  Json hess = Json::array();
  for (const auto& row : L.hessian.a) {
    Json r = Json::array();
    for (const auto& e : row) r.push_back(ex(e, t));
    hess.push_back(r);
  }
  Json acc = Json::object();
  for (const auto& [i, w] : L.w.w) acc[t.print(SymbolId::jet(i, a.spec.k()))] = ex(w, t);
  Json prim = Json::array();
  for (const auto& pc : L.primaries) prim.push_back(ex(pc.expr, t));
  Json tops = Json::array();
  for (const auto& m : L.momenta) tops.push_back(ex(m, t));
  doc["legendre"] = {{"hessian", hess},
                     {"rank", L.partition.rank},
                     {"r", L.partition.r()},
                     {"regular", coord_names(L.partition.regular, a.spec)},
                     {"degenerate", coord_names(L.partition.degenerate, a.spec)},
                     {"permutation", L.partition.permutation},
                     {"exact_rank", L.partition.exact},
                     {"top_momenta", tops},
                     {"accelerations", acc},
                     {"primary_constraints", prim},
                     {"H0", ex(L.h0, t)}};

  Json gens = Json::array();
  for (const auto& g : a.closure.set.generators)
    gens.push_back({{"label", g.label},
                    {"parameter", g.parameter ? Json(t.print(*g.parameter)) : Json(nullptr)},
                    {"momentum", g.momentum ? Json(t.print(*g.momentum)) : Json(nullptr)},
                    {"expr", ex(g.expr, t)},
                    {"reduced", ex(g.reduced, t)},
                    {"origin", origin_name(g.origin)},
                    {"provenance", g.provenance}});
  doc["generators"] = gens;

  const auto& rep = a.closure.report;
  doc["closure"] = {{"status", status_name(rep.status)},
                    {"iterations", rep.iterations},
                    {"added", rep.added},
                    {"trace", trace_json(rep.trace, t)},
                    {"table", trace_json(rep.table, t)},
                    {"determined_rates", rates_json(a.closure.rates, t)}};

  if (a.eom) {
    Json coeff = Json::object();
    for (std::size_t i = 0; i < a.eom->phase.size(); ++i) {
      Json row = Json::object();
      for (std::size_t j = 0; j < a.eom->parameters.size(); ++j)
        row["d" + t.print(a.eom->parameters[j])] = ex(a.eom->coeff[i][j], t);
      coeff["d" + t.print(a.eom->phase[i])] = row;
    }
    doc["equations_of_motion"] = {{"parameters", names(a.eom->parameters, t)}, {"coefficients", coeff}};
  } else {
    doc["equations_of_motion"] = nullptr;
  }
  doc["reduced_space"] = {{"coordinates", names(a.reduced.coordinates, t)}, {"momenta", names(a.reduced.momenta, t)}};
  if (a.action) {
    auto pie = path_integral_exponent(*a.action, a.reduced, t);
    doc["action"] = {{"forced", a.forced}, {"terms", form_terms_json(*a.action, t)}, {"exponent", pie.text}};
  } else {
    doc["action"] = nullptr;
  }
  doc["warnings"] = a.warnings;
  return doc;
}

std::string report_text(const Analysis& a, const Json& header) {
  const SymbolTable t = a.spec.table();
  const auto& L = a.legendre;
  std::ostringstream o;
  o << kToolName << ' ' << kVersion << ' ' << header.value("command", "") << ' ' << header["flags"].dump() << '\n';
  o << "system: coordinates " << join(a.spec.coordinates, ", ") << "; order " << a.spec.order << '\n';
  o << "L = " << ex(a.spec.lagrangian, t) << "\n\n";

  o << "Hessian:\n";
  for (const auto& row : L.hessian.a) {
    std::vector<std::string> cells;
    for (const auto& e : row) cells.push_back(ex(e, t));
    o << "  [" << join(cells, ", ") << "]\n";
  }
  o << "rank " << L.partition.rank << ", r = " << L.partition.r()
    << "; regular {" << join(coord_names(L.partition.regular, a.spec), ", ") << "}, degenerate {"
    << join(coord_names(L.partition.degenerate, a.spec), ", ") << "}\n";
  for (const auto& [i, w] : L.w.w) o << "  " << t.print(SymbolId::jet(i, a.spec.k())) << " = " << ex(w, t) << '\n';
  o << "H0 = " << ex(L.h0, t) << "\n\n";

  o << "generators:\n";
  for (const auto& g : a.closure.set.generators) {
    o << "  " << g.label << " = " << ex(g.expr, t);
    if (g.parameter) o << "   [parameter " << t.print(*g.parameter) << ']';
    o << "   (" << origin_name(g.origin) << ")\n";
  }
  const auto& rep = a.closure.report;
  o << "\nclosure: " << status_name(rep.status) << " after " << rep.iterations << " iteration(s)\n";
  for (const auto& e : rep.trace)
    o << "  [" << e.iteration << "] {" << e.a << ", " << e.b << "} = " << ex(e.residual, t) << "  -> " << e.action
      << '\n';
  for (const auto& r : a.closure.rates) {
    std::vector<std::string> parts;
    for (const auto& [nu, e] : r.coeff) parts.push_back("(" + ex(e, t) + ") d" + t.print(nu));
    o << "  d" << t.print(r.parameter) << " = " << (parts.empty() ? "0" : join(parts, " + ")) << '\n';
  }

  if (a.eom) {
    o << "\nequations of motion:\n";
    for (std::size_t i = 0; i < a.eom->phase.size(); ++i) {
      std::vector<std::string> parts;
      for (std::size_t j = 0; j < a.eom->parameters.size(); ++j)
        if (!a.eom->coeff[i][j].is_zero())
          parts.push_back("(" + ex(a.eom->coeff[i][j], t) + ") d" + t.print(a.eom->parameters[j]));
      o << "  d" << t.print(a.eom->phase[i]) << " = " << (parts.empty() ? "0" : join(parts, " + ")) << '\n';
    }
  }
  o << "\nreduced space: coordinates {" << join(names(a.reduced.coordinates, t), ", ") << "}, momenta {"
    << join(names(a.reduced.momenta, t), ", ") << "}\n";
  if (a.action) o << action_text(a);
  if (!a.warnings.empty()) {
    o << "\nnotes:\n";
    for (const auto& w : a.warnings) o << "  - " << w << '\n';
  }
  return o.str();
}

std::string report_latex(const Analysis& a) {
  const SymbolTable t = a.spec.table();
  std::ostringstream o;
  o << "% " << kToolName << ' ' << kVersion << "\n\\begin{align*}\n";
  o << "L &= " << to_latex(simplify(a.spec.lagrangian), t) << " \\\\\n";
  o << "H_0 &= " << to_latex(simplify(a.legendre.h0), t) << " \\\\\n";
  for (const auto& g : a.closure.set.generators)
    o << "H'_{\\mathrm{" << g.label << "}} &= " << to_latex(simplify(g.expr), t) << " \\\\\n";
  if (a.eom)
    for (std::size_t i = 0; i < a.eom->phase.size(); ++i) {
      std::string rhs;
      for (std::size_t j = 0; j < a.eom->parameters.size(); ++j)
        if (!a.eom->coeff[i][j].is_zero())
          rhs += (rhs.empty() ? "" : " + ") + std::string("\\left(") + to_latex(simplify(a.eom->coeff[i][j]), t) +
                 "\\right) d" + t.latex(a.eom->parameters[j]);
      o << "d" << t.latex(a.eom->phase[i]) << " &= " << (rhs.empty() ? "0" : rhs) << " \\\\\n";
    }
  o << "\\end{align*}\n";
  o << "% closure: " << status_name(a.closure.report.status) << '\n';
  if (a.action) o << action_latex(a);
  return o.str();
}

Json action_json(const Analysis& a, const Json& header) {
  const SymbolTable t = a.spec.table();
  Json doc;
  doc["run"] = header;
  doc["system"] = {{"coordinates", a.spec.coordinates}, {"order", a.spec.order}, {"lagrangian", ex(a.spec.lagrangian, t)}};
  doc["status"] = status_name(a.closure.report.status);
  doc["reduced_space"] = {{"coordinates", names(a.reduced.coordinates, t)}, {"momenta", names(a.reduced.momenta, t)}};
  if (a.action) {
    auto pie = path_integral_exponent(*a.action, a.reduced, t);
    doc["forced"] = a.forced;
    doc["terms"] = form_terms_json(*a.action, t);
    doc["exponent"] = pie.text;
    doc["measure"] = names(pie.measure, t);
  }
  doc["warnings"] = a.warnings;
  return doc;
}

std::string action_text(const Analysis& a) {
  if (!a.action) return "action: unavailable (" + std::string(status_name(a.closure.report.status)) + ")\n";
  const SymbolTable t = a.spec.table();
  std::ostringstream o;
  o << "\naction differential:\n";
  std::vector<std::string> parts;
  for (const auto& term : a.action->terms)
    parts.push_back("(" + ex(term.coefficient, t) + ") d" + t.print(term.parameter));
  o << "  dZ = " << join(parts, " + ") << '\n';
  o << "  " << path_integral_exponent(*a.action, a.reduced, t).text << '\n';
  return o.str();
}

std::string action_latex(const Analysis& a) {
  if (!a.action) return "% action unavailable\n";
  const SymbolTable t = a.spec.table();
  std::ostringstream o;
  std::string dz;
  for (const auto& term : a.action->terms)
    dz += (dz.empty() ? "" : " + ") + std::string("\\left(") + to_latex(simplify(term.coefficient), t) + "\\right) d" +
          t.latex(term.parameter);
  o << "\\[ dZ = " << dz << " \\]\n";
  o << "\\[ " << path_integral_exponent(*a.action, a.reduced, t).latex << " \\]\n";
  return o.str();
}

Json reparse_report(const Json& doc) {
  const auto& sys = doc.at("system");
  SymbolTable t(sys.at("coordinates").get<std::vector<std::string>>(), sys.at("order").get<int>());
  return recanon(doc, t, false);
}

}  // namespace hjpath
