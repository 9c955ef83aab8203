#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hjpath {

/// Kind tag of a symbol. The numeric order is part of the canonical atom
/// ordering used by NormalForm, so do not reorder.
enum class SymbolKind : std::uint8_t {
  Time = 0,          // t
  Jet = 1,           // q_i^(s)
  Momentum = 2,      // p_(s)i
  Param = 3,         // t_(s)i, a coordinate promoted to an evolution parameter
  TimeMomentum = 4,  // p_t, conjugate of t in H'_0 = p_t + H_0
  Aux = 5,           // free named symbol (tau, test variables)
};

/// Value-semantic symbol identifier.
///
/// `level` is the derivative level s and `index` the 1-based coordinate
/// index i. Both are zero for Time, TimeMomentum and Aux symbols; Aux
/// symbols are distinguished by `name`.
struct SymbolId {
  SymbolKind kind = SymbolKind::Aux;
  int level = 0;
  int index = 0;
  std::string name;

  static SymbolId time() { return {SymbolKind::Time, 0, 0, {}}; }
  static SymbolId jet(int index, int level) { return {SymbolKind::Jet, level, index, {}}; }
  static SymbolId momentum(int level, int index) { return {SymbolKind::Momentum, level, index, {}}; }
  static SymbolId param(int level, int index) { return {SymbolKind::Param, level, index, {}}; }
  static SymbolId time_momentum() { return {SymbolKind::TimeMomentum, 0, 0, {}}; }
  static SymbolId aux(std::string name) { return {SymbolKind::Aux, 0, 0, std::move(name)}; }

  bool is_jet() const { return kind == SymbolKind::Jet; }
  bool is_momentum() const { return kind == SymbolKind::Momentum; }

  /// Conjugate partner inside the phase layout: jet <-> momentum,
  /// param -> momentum of the promoted coordinate.
  SymbolId conjugate() const;

  /// Stable spelling independent of user coordinate names; used for
  /// opaque-atom keys and diagnostics.
  std::string canonical_name() const;

  friend bool operator==(const SymbolId&, const SymbolId&) = default;
  friend std::strong_ordering operator<=>(const SymbolId& a, const SymbolId& b) {
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    if (auto c = a.level <=> b.level; c != 0) return c;
    if (auto c = a.index <=> b.index; c != 0) return c;
    return a.name.compare(b.name) <=> 0;
  }
};

struct SymbolIdHash {
  std::size_t operator()(const SymbolId& s) const {
    std::size_t h = std::hash<std::string>{}(s.name);
    h ^= (static_cast<std::size_t>(s.kind) << 48) ^ (static_cast<std::size_t>(s.level) << 24) ^
         static_cast<std::size_t>(s.index);
    return h;
  }
};

/// Symbol universe of one problem: coordinate names, order k, and the
/// extra names the parser should accept. Doubles as the pretty-printer's
/// naming scheme so that printed expressions parse back.
///
/// Spellings:
///   q1'' ......... Jet(1,2) (name followed by primes, at most k of them)
///   p1_2 ......... Momentum(1,2); `p1` when n == 1; `p` when n == k == 1
///   t0_2, t02 .... Param(0,2)
///   t ............ Time
///   p_t .......... TimeMomentum
class SymbolTable {
 public:
  SymbolTable() = default;
  SymbolTable(std::vector<std::string> coordinates, int order);

  int n() const { return static_cast<int>(coordinates_.size()); }
  int k() const { return order_; }
  const std::vector<std::string>& coordinates() const { return coordinates_; }

  /// Maximum prime count accepted on coordinate names (defaults to k).
  int max_level() const { return max_level_; }
  void set_max_level(int level) { max_level_ = level; }

  /// Whether momenta, parameters and p_t are accepted by the parser.
  bool phase_names() const { return phase_names_; }
  void set_phase_names(bool on) { phase_names_ = on; }

  void add_aux(std::string name) { aux_.push_back(std::move(name)); }
  const std::vector<std::string>& aux() const { return aux_; }

  /// Resolve an identifier (without primes) to a symbol, or nullopt.
  std::optional<SymbolId> lookup(const std::string& ident) const;

  /// 1-based coordinate index of `name`, or 0.
  int coordinate_index(const std::string& name) const;

  std::string print(const SymbolId& s) const;
  std::string latex(const SymbolId& s) const;

 private:
  std::vector<std::string> coordinates_;
  std::vector<std::string> aux_;
  int order_ = 1;
  int max_level_ = 1;
  bool phase_names_ = true;
};

/// True when `name` collides with a reserved spelling (functions, t, tau,
/// momentum or parameter patterns).
bool is_reserved_name(const std::string& name);

}  // namespace hjpath
