#include "hjpath/model.hpp"

#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "hjpath/errors.hpp"
#include "hjpath/normal_form.hpp"
#include "hjpath/parser.hpp"

namespace hjpath {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

void check_coordinate_names(const std::vector<std::string>& names) {
  static const std::regex ident(R"(^[A-Za-z_][A-Za-z0-9_]*$)");
  if (names.empty()) throw ParseError("at least one coordinate is required");
  std::set<std::string> seen;
  for (const auto& c : names) {
    if (!std::regex_match(c, ident)) throw ParseError("invalid coordinate name '" + c + "'");
    if (is_reserved_name(c)) throw ParseError("coordinate name '" + c + "' is reserved");
    if (!seen.insert(c).second) throw ParseError("duplicate coordinate name '" + c + "'");
  }
}

// Byte offset -> 1-based line number.
int line_of(const std::string& text, std::size_t offset) {
  int line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace

SystemSpec make_spec(std::vector<std::string> coordinates, int order, const std::string& lagrangian) {
  check_coordinate_names(coordinates);
  if (order < 1) throw ParseError("order must be at least 1");
  SystemSpec spec;
  spec.coordinates = std::move(coordinates);
  spec.order = order;
  spec.lagrangian_text = trim(lagrangian);
  SymbolTable table = spec.table();
  table.set_phase_names(false);
  spec.lagrangian = parse(spec.lagrangian_text, table);
  return spec;
}

SystemSpec parse_hjl(const std::string& raw) {
  // Blank out comments while keeping offsets stable for line numbers.
  std::string text = raw;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '#') continue;
    while (i < text.size() && text[i] != '\n') text[i++] = ' ';
  }
  auto open = text.find('{');
  if (open == std::string::npos || trim(text.substr(0, open)) != "system")
    throw ParseError("line " + std::to_string(line_of(text, open == std::string::npos ? 0 : open)) +
                     ": expected 'system {'");
  auto close = text.rfind('}');
  if (close == std::string::npos || close < open)
    throw ParseError("line " + std::to_string(line_of(text, text.size())) + ": missing closing '}'");
  if (!trim(text.substr(close + 1)).empty())
    throw ParseError("line " + std::to_string(line_of(text, close + 1)) + ": text after closing '}'");

  std::map<std::string, std::pair<std::string, int>> entries;
  std::size_t pos = open + 1;
  while (pos < close) {
    auto semi = text.find(';', pos);
    if (semi == std::string::npos || semi > close) {
      if (!trim(text.substr(pos, close - pos)).empty())
        throw ParseError("line " + std::to_string(line_of(text, pos)) + ": entry must end with ';'");
      break;
    }
    std::string entry = text.substr(pos, semi - pos);
    int line = line_of(text, pos + entry.find_first_not_of(" \t\r\n"));
    pos = semi + 1;
    if (trim(entry).empty()) continue;
    auto colon = entry.find(':');
    if (colon == std::string::npos) throw ParseError("line " + std::to_string(line) + ": expected 'key: value'");
    std::string key = trim(entry.substr(0, colon));
    std::string value = trim(entry.substr(colon + 1));
    if (key != "coordinates" && key != "order" && key != "lagrangian")
      throw ParseError("line " + std::to_string(line) + ": unknown key '" + key + "'");
    if (entries.count(key)) throw ParseError("line " + std::to_string(line) + ": duplicate key '" + key + "'");
    entries[key] = {value, line};
  }
  for (const char* key : {"coordinates", "order", "lagrangian"})
    if (!entries.count(key)) throw ParseError(std::string("missing key '") + key + "'");

  std::vector<std::string> coords;
  {
    std::stringstream ss(entries["coordinates"].first);
    std::string item;
    while (std::getline(ss, item, ',')) coords.push_back(trim(item));
  }
  const auto& [order_text, order_line] = entries["order"];
  static const std::regex digits(R"(^[0-9]{1,3}$)");
  if (!std::regex_match(order_text, digits))
    throw ParseError("line " + std::to_string(order_line) + ": order must be a positive integer");
  int order = std::stoi(order_text);

  try {
    return make_spec(coords, order, entries["lagrangian"].first);
  } catch (const ParseError& e) {
    throw ParseError("line " + std::to_string(entries["lagrangian"].second) + ": " + e.what());
  }
}

SystemSpec load_hjl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_hjl(ss.str());
}

std::string write_hjl(const SystemSpec& spec) {
  SymbolTable table = spec.table();
  std::ostringstream out;
  out << "system {\n  coordinates: ";
  for (std::size_t i = 0; i < spec.coordinates.size(); ++i) out << (i ? ", " : "") << spec.coordinates[i];
  out << ";\n  order: " << spec.order << ";\n  lagrangian: " << to_string(spec.lagrangian, &table) << ";\n}\n";
  return out.str();
}

ValidationReport validate_spec(const SystemSpec& spec) {
  ValidationReport report;
  const int k = spec.k();
  for (const auto& s : free_symbols(spec.lagrangian)) {
    bool ok = s.kind == SymbolKind::Time ||
              (s.kind == SymbolKind::Jet && s.index >= 1 && s.index <= spec.n() && s.level <= k);
    if (!ok)
      report.violations.push_back(
          {s.kind == SymbolKind::Jet ? "level_overflow" : "unknown_symbol",
           "symbol " + s.canonical_name() + " is not a jet of level <= " + std::to_string(k) + " or t"});
  }
  if (!report.ok()) return report;

  NormalForm nf = normalize(spec.lagrangian);
  std::set<Atom> top;
  for (int i = 1; i <= spec.n(); ++i) top.insert(Atom::from_symbol(SymbolId::jet(i, k)));
  auto mentions_top = [&](const Expr& e) {
    for (const auto& s : free_symbols(e))
      if (s.kind == SymbolKind::Jet && s.level == k) return true;
    return false;
  };

  bool transcendental = false;
  for (const Poly* p : {&nf.numerator(), &nf.denominator()})
    for (const auto& a : p->atoms())
      if (a.is_function() && a.arg && mentions_top(*a.arg)) transcendental = true;
  if (transcendental)
    report.violations.push_back({"top_transcendental", "transcendental of top derivative"});

  for (const auto& a : nf.denominator().atoms())
    if (top.count(a)) {
      report.violations.push_back({"top_denominator", "top derivative appears in a denominator"});
      break;
    }
  if (nf.numerator().degree_in(top) > 2)
    report.violations.push_back({"top_degree", "degree > 2 in top derivative"});
  return report;
}

void require_valid(const SystemSpec& spec) {
  auto report = validate_spec(spec);
  if (report.ok()) return;
  std::string msg = "unsupported Lagrangian:";
  for (const auto& v : report.violations) msg += " " + v.message + ";";
  msg.pop_back();
  throw UnsupportedError(msg);
}

std::vector<SymbolId> PhaseLayout::symbols() const {
  std::vector<SymbolId> out;
  for (const auto& pr : pairs) out.push_back(pr.coordinate);
  for (const auto& pr : pairs) out.push_back(pr.momentum);
  return out;
}

bool PhaseLayout::contains(const SymbolId& s) const {
  for (const auto& pr : pairs)
    if (pr.coordinate == s || pr.momentum == s) return true;
  return false;
}

PhaseLayout phase_layout(int n, int k) {
  PhaseLayout layout;
  layout.n = n;
  layout.k = k;
  for (int s = 0; s < k; ++s)
    for (int i = 1; i <= n; ++i) layout.pairs.push_back({SymbolId::jet(i, s), SymbolId::momentum(s, i)});
  return layout;
}

PhaseLayout phase_layout(const SystemSpec& spec) { return phase_layout(spec.n(), spec.k()); }

}  // namespace hjpath
