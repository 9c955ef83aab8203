// Structural comparison of an analysis against a stored golden record:
// same generator labels and parameters, equivalent expressions.
#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "hjpath/errors.hpp"
#include "hjpath/parser.hpp"
#include "hjpath/report.hpp"

namespace hjtest {

inline hjpath::Json load_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw hjpath::Error("cannot open " + path);
  return hjpath::Json::parse(f);
}

/// Empty string on match, otherwise the first difference.
inline std::string golden_mismatch(const hjpath::Analysis& a, const hjpath::Json& golden) {
  using namespace hjpath;
  const SymbolTable t = a.spec.table();
  auto same = [&](const std::string& text, const Expr& e) { return equivalent(parse(text, t), e); };
  if (golden.at("status") != status_name(a.closure.report.status)) return "status differs";
  if (golden.at("r").get<int>() != a.legendre.partition.r()) return "rank deficiency differs";
  const auto& gens = a.closure.set.generators;
  const auto& gg = golden.at("generators");
  if (gg.size() != gens.size()) return "generator count differs";
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const auto& g = gg[i];
    if (g.at("label") != gens[i].label) return "label of generator " + std::to_string(i);
    std::string prm = gens[i].parameter ? t.print(*gens[i].parameter) : "";
    if ((g.at("parameter").is_null() ? "" : g.at("parameter").get<std::string>()) != prm)
      return "parameter of " + gens[i].label;
    if (!same(g.at("expr").get<std::string>(), gens[i].expr)) return "expression of " + gens[i].label;
  }
  if (!a.action) return "no action form";
  const auto& ga = golden.at("action");
  if (ga.size() != a.action->terms.size()) return "action term count differs";
  for (std::size_t i = 0; i < ga.size(); ++i) {
    const auto& term = a.action->terms[i];
    if (ga[i].at("parameter") != t.print(term.parameter)) return "action parameter " + std::to_string(i);
    if (!same(ga[i].at("coefficient").get<std::string>(), term.coefficient)) return "action coefficient of " + term.label;
  }
  return {};
}

}  // namespace hjtest
