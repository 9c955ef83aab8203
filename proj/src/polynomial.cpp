#include "hjpath/polynomial.hpp"

#include <algorithm>

#include "hjpath/errors.hpp"

namespace hjpath {

Atom Atom::from_symbol(const SymbolId& s) {
  Atom a;
  a.tag = static_cast<std::uint8_t>(s.kind);
  a.level = s.level;
  a.index = s.index;
  a.key = s.name;
  return a;
}

Atom Atom::from_function(FuncKind f, const Expr& canonical_arg) {
  Atom a;
  switch (f) {
    case FuncKind::Sin:
      a.tag = kSin;
      break;
    case FuncKind::Cos:
      a.tag = kCos;
      break;
    case FuncKind::Exp:
      a.tag = kExp;
      break;
  }
  a.key = to_string(canonical_arg);
  a.arg = canonical_arg;
  return a;
}

SymbolId Atom::symbol() const {
  return SymbolId{static_cast<SymbolKind>(tag), level, index, key};
}

Expr Atom::to_expr() const {
  switch (tag) {
    case kSin:
      return sin(*arg);
    case kCos:
      return cos(*arg);
    case kExp:
      return exp(*arg);
    default:
      return Expr(symbol());
  }
}

bool monomial_less(const Monomial& a, const Monomial& b) {
  auto i = a.rbegin(), j = b.rbegin();
  while (i != a.rend() && j != b.rend()) {
    if (i->first == j->first) {
      if (i->second != j->second) return i->second < j->second;
      ++i;
      ++j;
    } else if (j->first < i->first) {
      return false;  // a carries a more significant atom
    } else {
      return true;
    }
  }
  return i == a.rend() && j != b.rend();
}

namespace {

Monomial monomial_mul(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  auto i = a.begin(), j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (i->first == j->first) {
      out.emplace_back(i->first, i->second + j->second);
      ++i;
      ++j;
    } else if (i->first < j->first) {
      out.push_back(*i++);
    } else {
      out.push_back(*j++);
    }
  }
  out.insert(out.end(), i, a.end());
  out.insert(out.end(), j, b.end());
  return out;
}

std::optional<Monomial> monomial_div(const Monomial& a, const Monomial& b) {
  Monomial out;
  auto i = a.begin();
  for (const auto& [atom, e] : b) {
    while (i != a.end() && i->first < atom) out.push_back(*i++);
    if (i == a.end() || !(i->first == atom) || i->second < e) return std::nullopt;
    if (i->second > e) out.emplace_back(atom, i->second - e);
    ++i;
  }
  out.insert(out.end(), i, a.end());
  return out;
}

bool term_greater(const Poly::Term& a, const Poly::Term& b) { return monomial_less(b.monomial, a.monomial); }

}  // namespace

Poly::Poly(const Rational& c) {
  if (c != 0) terms_.push_back({{}, c});
}

Poly Poly::atom(const Atom& a, int exponent) {
  Poly p;
  p.terms_.push_back({{{a, exponent}}, Rational(1)});
  return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), term_greater);
  Poly p;
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().monomial == t.monomial) {
      p.terms_.back().coeff += t.coeff;
    } else {
      if (!p.terms_.empty() && p.terms_.back().coeff == 0) p.terms_.pop_back();
      p.terms_.push_back(std::move(t));
    }
  }
  if (!p.terms_.empty() && p.terms_.back().coeff == 0) p.terms_.pop_back();
  return p;
}

Rational Poly::constant_value() const { return terms_.empty() ? Rational(0) : terms_.front().coeff; }

Poly operator+(const Poly& a, const Poly& b) {
  Poly out;
  auto i = a.terms_.begin(), j = b.terms_.begin();
  while (i != a.terms_.end() && j != b.terms_.end()) {
    if (i->monomial == j->monomial) {
      Rational c = i->coeff + j->coeff;
      if (c != 0) out.terms_.push_back({i->monomial, c});
      ++i;
      ++j;
    } else if (term_greater(*i, *j)) {
      out.terms_.push_back(*i++);
    } else {
      out.terms_.push_back(*j++);
    }
  }
  out.terms_.insert(out.terms_.end(), i, a.terms_.end());
  out.terms_.insert(out.terms_.end(), j, b.terms_.end());
  return out;
}

Poly operator-(const Poly& a) { return a.scaled(Rational(-1)); }
Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  std::vector<Poly::Term> terms;
  terms.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& x : a.terms_)
    for (const auto& y : b.terms_) terms.push_back({monomial_mul(x.monomial, y.monomial), x.coeff * y.coeff});
  return Poly::from_terms(std::move(terms));
}

Poly Poly::scaled(const Rational& c) const {
  if (c == 0) return Poly();
  Poly out = *this;
  for (auto& t : out.terms_) t.coeff *= c;
  return out;
}

std::set<Atom> Poly::atoms() const {
  std::set<Atom> out;
  for (const auto& t : terms_)
    for (const auto& [a, e] : t.monomial) out.insert(a);
  return out;
}

bool Poly::has(const Atom& x) const { return degree(x) > 0; }

int Poly::degree(const Atom& x) const {
  int d = 0;
  for (const auto& t : terms_)
    for (const auto& [a, e] : t.monomial)
      if (a == x) d = std::max(d, e);
  return d;
}

int Poly::degree_in(const std::set<Atom>& subset) const {
  int d = 0;
  for (const auto& t : terms_) {
    int td = 0;
    for (const auto& [a, e] : t.monomial)
      if (subset.count(a)) td += e;
    d = std::max(d, td);
  }
  return d;
}

std::vector<Poly> Poly::coefficients(const Atom& x) const {
  std::vector<std::vector<Term>> buckets(static_cast<std::size_t>(degree(x)) + 1);
  for (const auto& t : terms_) {
    int e = 0;
    Monomial rest;
    for (const auto& p : t.monomial) {
      if (p.first == x)
        e = p.second;
      else
        rest.push_back(p);
    }
    buckets[static_cast<std::size_t>(e)].push_back({std::move(rest), t.coeff});
  }
  std::vector<Poly> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) out.push_back(from_terms(std::move(b)));
  return out;
}

Poly Poly::from_coefficients(const Atom& x, const std::vector<Poly>& coeffs) {
  Poly out;
  for (std::size_t d = 0; d < coeffs.size(); ++d) {
    if (coeffs[d].is_zero()) continue;
    out = out + (d == 0 ? coeffs[d] : coeffs[d] * atom(x, static_cast<int>(d)));
  }
  return out;
}

std::optional<Poly> Poly::divide_exact(const Poly& b) const {
  if (b.is_zero()) throw InconsistentError("polynomial division by zero");
  if (b.is_constant()) return scaled(Rational(1) / b.constant_value());
  Poly rem = *this, quot;
  const Term& lb = b.leading();
  while (!rem.is_zero()) {
    const Term& lr = rem.leading();
    auto m = monomial_div(lr.monomial, lb.monomial);
    if (!m) return std::nullopt;
    Poly t;
    t.terms_.push_back({*m, lr.coeff / lb.coeff});
    quot = quot + t;
    rem = rem - t * b;
  }
  return quot;
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  return scaled(Rational(1) / leading().coeff);
}

Poly Poly::reduce_trig() const {
  bool needs = false;
  for (const auto& t : terms_)
    for (const auto& [a, e] : t.monomial)
      if (a.tag == Atom::kCos && e >= 2) needs = true;
  if (!needs) return *this;
  std::vector<Term> out;
  bool again = false;
  for (const auto& t : terms_) {
    auto it = std::find_if(t.monomial.begin(), t.monomial.end(),
                           [](const auto& p) { return p.first.tag == Atom::kCos && p.second >= 2; });
    if (it == t.monomial.end()) {
      out.push_back(t);
      continue;
    }
    Atom c = it->first;
    Atom s = c;
    s.tag = Atom::kSin;
    Monomial base = t.monomial;
    auto bit = base.begin() + (it - t.monomial.begin());
    if (bit->second == 2)
      base.erase(bit);
    else
      bit->second -= 2;
    // cos^2 -> 1 - sin^2
    out.push_back({base, t.coeff});
    out.push_back({monomial_mul(base, Monomial{{s, 2}}), -t.coeff});
    again = true;
  }
  Poly p = from_terms(std::move(out));
  return again ? p.reduce_trig() : p;
}

Expr Poly::to_expr() const {
  std::vector<Expr> sum;
  for (const auto& t : terms_) {
    std::vector<Expr> prod{Expr(t.coeff)};
    // Most significant atom first reads naturally.
    for (auto it = t.monomial.rbegin(); it != t.monomial.rend(); ++it)
      prod.push_back(pow(it->first.to_expr(), it->second));
    sum.push_back(Expr::product(std::move(prod)));
  }
  return Expr::sum(std::move(sum));
}

// ---------------------------------------------------------------------------
// GCD: recursive primitive polynomial remainder sequences.

namespace {

std::optional<Atom> main_atom(const Poly& a, const Poly& b) {
  std::optional<Atom> best;
  for (const Poly* p : {&a, &b})
    for (const auto& t : p->terms())
      if (!t.monomial.empty() && (!best || *best < t.monomial.back().first)) best = t.monomial.back().first;
  return best;
}

Poly content(const Poly& p, const Atom& x) {
  Poly g;
  for (const auto& c : p.coefficients(x)) {
    if (c.is_zero()) continue;
    g = gcd(g, c);
    if (g.is_constant()) return Poly(Rational(1));
  }
  return g;
}

Poly primitive(const Poly& p, const Atom& x) {
  Poly c = content(p, x);
  return *p.divide_exact(c);
}

int degree_of(const std::vector<Poly>& cs) {
  for (int d = static_cast<int>(cs.size()) - 1; d >= 0; --d)
    if (!cs[static_cast<std::size_t>(d)].is_zero()) return d;
  return -1;
}

Poly pseudo_remainder(const Poly& a, const Poly& b, const Atom& x) {
  std::vector<Poly> r = a.coefficients(x);
  const std::vector<Poly> bc = b.coefficients(x);
  const int db = degree_of(bc);
  const Poly& lcb = bc[static_cast<std::size_t>(db)];
  int dr = degree_of(r);
  while (dr >= db) {
    Poly lcr = r[static_cast<std::size_t>(dr)];
    const int shift = dr - db;
    for (auto& c : r) c = c * lcb;
    for (int i = 0; i <= db; ++i) {
      auto& slot = r[static_cast<std::size_t>(i + shift)];
      slot = slot - lcr * bc[static_cast<std::size_t>(i)];
    }
    dr = degree_of(r);
  }
  return Poly::from_coefficients(x, r);
}

}  // namespace

Poly gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return Poly(Rational(1));
  if (a == b) return a.monic();
  const Atom x = *main_atom(a, b);
  if (!a.has(x)) return gcd(a, content(b, x));
  if (!b.has(x)) return gcd(content(a, x), b);

  Poly g_content = gcd(content(a, x), content(b, x));
  Poly f1 = primitive(a, x), f2 = primitive(b, x);
  if (f1.degree(x) < f2.degree(x)) std::swap(f1, f2);
  while (true) {
    Poly r = pseudo_remainder(f1, f2, x);
    if (r.is_zero()) break;
    if (!r.has(x)) {
      f2 = Poly(Rational(1));
      break;
    }
    f1 = f2;
    f2 = primitive(r, x);
  }
  return (g_content * primitive(f2, x)).monic();
}

}  // namespace hjpath
