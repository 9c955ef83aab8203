#pragma once

#include <string>

#include "hjpath/expr.hpp"
#include "hjpath/symbol.hpp"

namespace hjpath {

/// Parses the expression DSL:
///
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := ('-'|'+') factor | base ('^' ['-'] integer)?
///   base   := number | ident primes? | func '(' expr ')' | '(' expr ')'
///   func   := sin | cos | exp
///
/// Numbers may be integers or exact decimals ("0.5", "1e-3"). Primes on a
/// coordinate name select the derivative level. Throws ParseError with
/// the byte offset of the offending token.
Expr parse(const std::string& text, const SymbolTable& ctx);

}  // namespace hjpath
