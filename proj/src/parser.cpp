#include "hjpath/parser.hpp"

#include <cctype>

#include "hjpath/errors.hpp"

namespace hjpath {

Rational parse_decimal(const std::string& text) {
  std::size_t i = 0;
  Integer mantissa = 0;
  int scale = 0;
  bool digits = false;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    mantissa = mantissa * 10 + (text[i] - '0');
    digits = true;
    ++i;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      mantissa = mantissa * 10 + (text[i] - '0');
      --scale;
      digits = true;
      ++i;
    }
  }
  if (!digits) throw ParseError("malformed number '" + text + "'");
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    int sign = 1;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) sign = text[i++] == '-' ? -1 : 1;
    if (i >= text.size()) throw ParseError("malformed exponent in '" + text + "'");
    int e = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      e = e * 10 + (text[i] - '0');
      if (e > 400) throw ParseError("exponent out of range in '" + text + "'");
      ++i;
    }
    scale += sign * e;
  }
  if (i != text.size()) throw ParseError("malformed number '" + text + "'");
  Integer ten_pow = 1;
  for (int j = 0; j < std::abs(scale); ++j) ten_pow *= 10;
  Rational r = scale >= 0 ? Rational(mantissa * ten_pow) : Rational(mantissa, ten_pow);
  r.canonicalize();
  return r;
}

namespace {

class Parser {
 public:
  Parser(const std::string& text, const SymbolTable& ctx) : text_(text), ctx_(ctx) {}

  Expr run() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("empty expression", pos_);
    Expr e = expr();
    skip_ws();
    if (pos_ < text_.size()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return e;
  }

 private:
  const std::string& text_;
  const SymbolTable& ctx_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  Expr expr() {
    std::vector<Expr> terms{term()};
    while (true) {
      if (accept('+'))
        terms.push_back(term());
      else if (accept('-'))
        terms.push_back(-term());
      else
        break;
    }
    return Expr::sum(std::move(terms));
  }

  Expr term() {
    Expr acc = factor();
    while (true) {
      if (accept('*')) {
        acc = acc * factor();
      } else if (accept('/')) {
        std::size_t at = pos_;
        Expr d = factor();
        if (d.is_zero()) throw ParseError("division by zero", at);
        acc = acc / d;
      } else {
        break;
      }
    }
    return acc;
  }

  Expr factor() {
    if (accept('-')) return -factor();
    if (accept('+')) return factor();
    Expr b = base();
    if (accept('^')) {
      skip_ws();
      bool paren = accept('(');
      skip_ws();
      int sign = 1;
      if (accept('-')) sign = -1;
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) throw ParseError("exponent must be an integer", start);
      if (pos_ - start > 6) throw ParseError("exponent too large", start);
      int e = sign * std::stoi(text_.substr(start, pos_ - start));
      if (paren) expect(')');
      if (b.is_zero() && e < 0) throw ParseError("division by zero", start);
      return pow(b, e);
    }
    return b;
  }

  Expr base() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  Expr number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    try {
      return Expr(parse_decimal(text_.substr(start, pos_ - start)));
    } catch (const ParseError& e) {
      throw ParseError("malformed number", start);
    }
  }

  Expr identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string ident = text_.substr(start, pos_ - start);
    int primes = 0;
    while (pos_ < text_.size() && text_[pos_] == '\'') {
      ++primes;
      ++pos_;
    }
    if (primes == 0 && (ident == "sin" || ident == "cos" || ident == "exp")) {
      expect('(');
      Expr arg = expr();
      expect(')');
      FuncKind f = ident == "sin" ? FuncKind::Sin : ident == "cos" ? FuncKind::Cos : FuncKind::Exp;
      return Expr::function(f, arg);
    }
    auto sym = ctx_.lookup(ident);
    if (!sym) throw ParseError("unknown identifier '" + ident + "'", start);
    if (primes > 0) {
      if (sym->kind != SymbolKind::Jet) throw ParseError("primes are only allowed on coordinates", start);
      if (primes > ctx_.max_level())
        throw ParseError("derivative level exceeds order (" + std::to_string(primes) + " > " +
                             std::to_string(ctx_.max_level()) + ")",
                         start);
      return Expr(SymbolId::jet(sym->index, primes));
    }
    return Expr(*sym);
  }
};

}  // namespace

Expr parse(const std::string& text, const SymbolTable& ctx) { return Parser(text, ctx).run(); }

}  // namespace hjpath
