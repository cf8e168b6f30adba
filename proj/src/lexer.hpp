#pragma once

// Tokenizer and recursive-descent term reader shared by the term and .trs
// parsers. Internal to the library.

#include <cctype>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "cbn/error.hpp"
#include "cbn/term.hpp"

namespace cbn::detail {

enum class Tok { ident, lparen, rparen, comma, arrow, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
  Decoration deco = Decoration::plain;
};

class Lexer {
 public:
  Lexer(std::string_view src, bool allow_decorated, bool allow_comments)
      : src_(src), decorated_(allow_decorated), comments_(allow_comments) {
    advance();
  }

  const Token& peek() const { return cur_; }

  Token next() {
    Token t = cur_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg, std::size_t offset) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < src_.size(); ++i) {
      if (src_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(msg, offset, line, col);
  }

  Token expect(Tok kind, const char* what) {
    if (cur_.kind != kind) fail(std::string("expected ") + what + describe(cur_), cur_.offset);
    return next();
  }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Tok::end: return ", found end of input";
      case Tok::ident: return ", found '" + t.text + "'";
      case Tok::lparen: return ", found '('";
      case Tok::rparen: return ", found ')'";
      case Tok::comma: return ", found ','";
      case Tok::arrow: return ", found '->'";
    }
    return {};
  }

 private:
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

  void advance() {
    for (;;) {
      while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])) != 0) ++pos_;
      if (comments_ && pos_ < src_.size() && src_[pos_] == ';') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
        continue;
      }
      break;
    }
    std::size_t start = pos_;
    if (pos_ >= src_.size()) {
      cur_ = {Tok::end, "", start};
      return;
    }
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      cur_ = {Tok::lparen, "(", start};
    } else if (c == ')') {
      ++pos_;
      cur_ = {Tok::rparen, ")", start};
    } else if (c == ',') {
      ++pos_;
      cur_ = {Tok::comma, ",", start};
    } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
      pos_ += 2;
      cur_ = {Tok::arrow, "->", start};
    } else if (c == '#' && decorated_) {
      ++pos_;
      cur_ = {Tok::ident, "#", start, Decoration::bullet};
    } else if (ident_char(c)) {
      while (pos_ < src_.size() && ident_char(src_[pos_])) ++pos_;
      cur_ = {Tok::ident, std::string(src_.substr(start, pos_ - start)), start};
      if (decorated_ && pos_ < src_.size() && src_[pos_] == '@') {
        ++pos_;
        cur_.deco = Decoration::circled;
      }
    } else {
      fail(std::string("unexpected character '") + c + "'", start);
    }
  }

  std::string_view src_;
  bool decorated_;
  bool comments_;
  std::size_t pos_ = 0;
  Token cur_{Tok::end, "", 0};
};

/// Resolves an identifier used with `arity` arguments to a symbol, or throws
/// via the lexer. Variables are filtered out before the resolver is called.
using SymbolResolver = std::function<Symbol(const Token& tok, unsigned arity, Lexer& lex)>;
using VarPredicate = std::function<bool(const std::string&)>;

inline Term read_term(Lexer& lex, const VarPredicate& is_var, const SymbolResolver& resolve) {
  Token head = lex.expect(Tok::ident, "a term");
  std::vector<Term> args;
  bool has_parens = false;
  if (lex.peek().kind == Tok::lparen) {
    has_parens = true;
    lex.next();
    if (lex.peek().kind != Tok::rparen) {
      for (;;) {
        args.push_back(read_term(lex, is_var, resolve));
        if (lex.peek().kind == Tok::comma) {
          lex.next();
          continue;
        }
        break;
      }
    }
    lex.expect(Tok::rparen, "')'");
  }
  if (head.deco == Decoration::plain && is_var(head.text)) {
    if (has_parens) lex.fail("variable '" + head.text + "' applied to arguments", head.offset);
    return Term::var(head.text);
  }
  Symbol f = resolve(head, static_cast<unsigned>(args.size()), lex);
  return Term::app(f, std::move(args));
}

}  // namespace cbn::detail
