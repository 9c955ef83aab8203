#pragma once

#include <gmpxx.h>

#include <string>

namespace hjpath {

using Rational = mpq_class;
using Integer = mpz_class;

/// "3", "-1/2". Canonical (GMP keeps rationals reduced).
inline std::string to_string(const Rational& r) { return r.get_str(); }

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

/// Exact decimal literal such as "0.25" or "1e-3".
Rational parse_decimal(const std::string& text);

}  // namespace hjpath
