#include "hjpath/symbol.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

#include "hjpath/errors.hpp"

namespace hjpath {

namespace {

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

// Parses "<prefix><s>_<i>" or, when both fit in one digit, "<prefix><s><i>".
std::optional<std::pair<int, int>> level_index(const std::string& ident, char prefix) {
  if (ident.size() < 2 || ident[0] != prefix) return std::nullopt;
  std::string rest = ident.substr(1);
  auto us = rest.find('_');
  if (us != std::string::npos) {
    std::string a = rest.substr(0, us), b = rest.substr(us + 1);
    if (!all_digits(a) || !all_digits(b) || a.size() > 6 || b.size() > 6) return std::nullopt;
    return std::make_pair(std::stoi(a), std::stoi(b));
  }
  if (rest.size() == 2 && all_digits(rest)) return std::make_pair(rest[0] - '0', rest[1] - '0');
  return std::nullopt;
}

}  // namespace

SymbolId SymbolId::conjugate() const {
  switch (kind) {
    case SymbolKind::Jet:
      return momentum(level, index);
    case SymbolKind::Momentum:
      return jet(index, level);
    case SymbolKind::Param:
      return momentum(level, index);
    case SymbolKind::Time:
      return time_momentum();
    case SymbolKind::TimeMomentum:
      return time();
    case SymbolKind::Aux:
      break;
  }
  throw Error("symbol " + canonical_name() + " has no conjugate");
}

std::string SymbolId::canonical_name() const {
  switch (kind) {
    case SymbolKind::Time:
      return "t";
    case SymbolKind::Jet:
      return "q" + std::to_string(index) + std::string(static_cast<std::size_t>(level), '\'');
    case SymbolKind::Momentum:
      return "p" + std::to_string(level) + "_" + std::to_string(index);
    case SymbolKind::Param:
      return "t" + std::to_string(level) + "_" + std::to_string(index);
    case SymbolKind::TimeMomentum:
      return "p_t";
    case SymbolKind::Aux:
      return name;
  }
  return {};
}

bool is_reserved_name(const std::string& name) {
  static const std::regex pattern(R"(^(sin|cos|exp|t|tau|p|p_t|[pt][0-9]+(_[0-9]+)?)$)");
  return std::regex_match(name, pattern);
}

SymbolTable::SymbolTable(std::vector<std::string> coordinates, int order)
    : coordinates_(std::move(coordinates)), order_(order), max_level_(order) {}

int SymbolTable::coordinate_index(const std::string& name) const {
  for (std::size_t i = 0; i < coordinates_.size(); ++i)
    if (coordinates_[i] == name) return static_cast<int>(i) + 1;
  return 0;
}

std::optional<SymbolId> SymbolTable::lookup(const std::string& ident) const {
  if (int i = coordinate_index(ident)) return SymbolId::jet(i, 0);
  for (const auto& a : aux_)
    if (a == ident) return SymbolId::aux(a);
  if (ident == "t") return SymbolId::time();
  if (!phase_names_) return std::nullopt;
  if (ident == "p_t") return SymbolId::time_momentum();
  const int nn = n();
  if (ident == "p" && nn == 1 && order_ == 1) return SymbolId::momentum(0, 1);
  if (nn == 1 && ident.size() >= 2 && ident[0] == 'p' && all_digits(ident.substr(1))) {
    int s = std::stoi(ident.substr(1));
    if (s < order_) return SymbolId::momentum(s, 1);
  }
  if (auto li = level_index(ident, 'p')) {
    auto [s, i] = *li;
    if (s >= 0 && s < order_ && i >= 1 && i <= nn) return SymbolId::momentum(s, i);
  }
  if (auto li = level_index(ident, 't')) {
    auto [s, i] = *li;
    if (s >= 0 && s < order_ && i >= 1 && i <= nn) return SymbolId::param(s, i);
  }
  return std::nullopt;
}

std::string SymbolTable::print(const SymbolId& s) const {
  switch (s.kind) {
    case SymbolKind::Jet:
      if (s.index >= 1 && s.index <= n())
        return coordinates_[static_cast<std::size_t>(s.index - 1)] +
               std::string(static_cast<std::size_t>(s.level), '\'');
      return s.canonical_name();
    case SymbolKind::Momentum:
      if (n() == 1 && order_ == 1 && s.index == 1 && s.level == 0) return "p";
      if (n() == 1 && s.index == 1) return "p" + std::to_string(s.level);
      return s.canonical_name();
    default:
      return s.canonical_name();
  }
}

std::string SymbolTable::latex(const SymbolId& s) const {
  switch (s.kind) {
    case SymbolKind::Time:
      return "t";
    case SymbolKind::Jet: {
      std::string base = (s.index >= 1 && s.index <= n())
                             ? coordinates_[static_cast<std::size_t>(s.index - 1)]
                             : "q_{" + std::to_string(s.index) + "}";
      if (s.level == 0) return base;
      if (s.level <= 3) return base + std::string(static_cast<std::size_t>(s.level), '\'');
      return base + "^{(" + std::to_string(s.level) + ")}";
    }
    case SymbolKind::Momentum:
      if (n() == 1 && order_ == 1) return "p";
      if (n() == 1) return "p_{(" + std::to_string(s.level) + ")}";
      return "p_{(" + std::to_string(s.level) + ")" + std::to_string(s.index) + "}";
    case SymbolKind::Param:
      return "t_{(" + std::to_string(s.level) + ")" + std::to_string(s.index) + "}";
    case SymbolKind::TimeMomentum:
      return "p_{t}";
    case SymbolKind::Aux:
      return s.name;
  }
  return {};
}

}  // namespace hjpath
