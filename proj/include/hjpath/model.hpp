#pragma once

#include <string>
#include <vector>

#include "hjpath/expr.hpp"
#include "hjpath/symbol.hpp"

namespace hjpath {

/// A higher-order Lagrangian system L(t, q, q', ..., q^(k)) in n coordinates.
struct SystemSpec {
  std::vector<std::string> coordinates;
  int order = 1;
  Expr lagrangian;
  /// Original text of the Lagrangian, kept for echoing in reports.
  std::string lagrangian_text;

  int n() const { return static_cast<int>(coordinates.size()); }
  int k() const { return order; }
  SymbolTable table() const { return SymbolTable(coordinates, order); }
};

/// Builds a spec from parts; parses the Lagrangian against the coordinate
/// table. Throws ParseError on bad names or expression text.
SystemSpec make_spec(std::vector<std::string> coordinates, int order, const std::string& lagrangian);

/// Reads the `.hjl` format:
///
///   system {
///     coordinates: q1, q2;
///     order: 2;
///     lagrangian: (1/2)*(q1'' - q2')^2;
///   }
///
/// Keys may come in any order and `#` starts a comment.
SystemSpec parse_hjl(const std::string& text);
SystemSpec load_hjl(const std::string& path);
std::string write_hjl(const SystemSpec& spec);

struct Violation {
  std::string code;     // machine tag, e.g. "top_degree"
  std::string message;  // human text
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks the supported class: only jets up to level k and t appear, the
/// Lagrangian is polynomial of total degree <= 2 in the level-k jets, and
/// no level-k jet sits inside sin/cos/exp or a denominator.
ValidationReport validate_spec(const SystemSpec& spec);

/// Throws UnsupportedError listing the violations when the system fails
/// validation.
void require_valid(const SystemSpec& spec);

struct PhasePair {
  SymbolId coordinate;  // Jet(i, s)
  SymbolId momentum;    // Momentum(s, i)
};

/// The 2nk-dimensional phase space, level-major then index-minor.
struct PhaseLayout {
  int n = 0;
  int k = 0;
  std::vector<PhasePair> pairs;

  int dimension() const { return 2 * static_cast<int>(pairs.size()); }
  /// Coordinates then momenta, each in pair order.
  std::vector<SymbolId> symbols() const;
  bool contains(const SymbolId& s) const;
};

PhaseLayout phase_layout(const SystemSpec& spec);
PhaseLayout phase_layout(int n, int k);

}  // namespace hjpath
