#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "alam/scalar.hpp"
#include "alam/term.hpp"

namespace alam {

struct ParseError : Error {
  ParseError(const std::string& what, int line, int col)
      : Error("parse error at " + std::to_string(line) + ":" +
              std::to_string(col) + ": " + what),
        line(line),
        col(col) {}
  int line;
  int col;
};

namespace detail {

enum class Tok { LParen, RParen, Plus, Minus, Lambda, Dot, Ident, Number, End };

struct Token {
  Tok kind;
  std::string text;  // Ident name or Number digits ("n" or "n/d")
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src)
      : src_(std::make_shared<const std::string>(src)) {
    advance();
  }

  auto peek() const -> const Token& { return cur_; }
  auto peek2() -> const Token& {
    if (!next_) next_ = lex();
    return *next_;
  }
  auto pop() -> Token {
    Token t = cur_;
    advance();
    return t;
  }

 private:
  void advance() {
    if (next_) {
      cur_ = *next_;
      next_.reset();
    } else {
      cur_ = lex();
    }
  }

  auto lex() -> Token {
    while (pos_ < src_->size()) {
      char c = (*src_)[pos_];
      if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++col_;
        ++pos_;
      } else {
        break;
      }
    }
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= src_->size()) {
      t.kind = Tok::End;
      return t;
    }
    char c = (*src_)[pos_];
    auto take = [&](Tok kind) {
      ++pos_;
      ++col_;
      t.kind = kind;
      return t;
    };
    switch (c) {
      case '(': return take(Tok::LParen);
      case ')': return take(Tok::RParen);
      case '+': return take(Tok::Plus);
      case '-': return take(Tok::Minus);
      case '.': return take(Tok::Dot);
      case '\\': return take(Tok::Lambda);
      default: break;
    }
    // UTF-8 lambda.
    if (static_cast<unsigned char>(c) == 0xce && pos_ + 1 < src_->size() &&
        static_cast<unsigned char>((*src_)[pos_ + 1]) == 0xbb) {
      pos_ += 2;
      ++col_;
      t.kind = Tok::Lambda;
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string digits;
      while (pos_ < src_->size() &&
             std::isdigit(static_cast<unsigned char>((*src_)[pos_]))) {
        digits += (*src_)[pos_++];
        ++col_;
      }
      // "n/d" is a single rational literal.
      if (pos_ < src_->size() && (*src_)[pos_] == '/') {
        std::size_t save_pos = pos_;
        int save_col = col_;
        ++pos_;
        ++col_;
        std::string den;
        while (pos_ < src_->size() &&
               std::isdigit(static_cast<unsigned char>((*src_)[pos_]))) {
          den += (*src_)[pos_++];
          ++col_;
        }
        if (den.empty()) {
          pos_ = save_pos;
          col_ = save_col;
        } else {
          digits += "/" + den;
        }
      }
      t.kind = Tok::Number;
      t.text = std::move(digits);
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name;
      while (pos_ < src_->size() &&
             (std::isalnum(static_cast<unsigned char>((*src_)[pos_])) ||
              (*src_)[pos_] == '_' || (*src_)[pos_] == '\'')) {
        name += (*src_)[pos_++];
        ++col_;
      }
      t.kind = Tok::Ident;
      t.text = std::move(name);
      return t;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
  }

  std::shared_ptr<const std::string> src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token cur_;
  std::optional<Token> next_;
};

class Parser {
 public:
  Parser(const std::string& src, ScalarDomain domain)
      : lex_(src), domain_(domain) {}

  auto parse_term() -> TermPtr {
    auto t = parse_sum();
    expect(Tok::End, "end of input");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw ParseError(what, lex_.peek().line, lex_.peek().col);
  }

  void expect(Tok kind, const std::string& what) {
    if (lex_.peek().kind != kind) fail("expected " + what);
    lex_.pop();
  }

  auto parse_sum() -> TermPtr {
    auto t = parse_smul();
    while (lex_.peek().kind == Tok::Plus) {
      lex_.pop();
      t = Term::sum(t, parse_smul());
    }
    return t;
  }

  // A scalar prefix is NUMBER "." or "(" ["-"] NUMBER ")" "." where the dot is
  // not itself part of a lambda. A bare "0" atom is the zero term.
  auto parse_smul() -> TermPtr {
    std::vector<Scalar> prefix;
    for (;;) {
      const Token& t0 = lex_.peek();
      if (t0.kind == Tok::Number && lex_.peek2().kind == Tok::Dot) {
        Scalar s = make_scalar(false, lex_.pop().text);
        lex_.pop();  // dot
        prefix.push_back(s);
        continue;
      }
      if (t0.kind == Tok::Minus) {
        Token minus = lex_.pop();
        if (lex_.peek().kind != Tok::Number)
          throw ParseError("expected number after '-'", minus.line, minus.col);
        Scalar s = make_scalar(true, lex_.pop().text);
        expect(Tok::Dot, "'.' after scalar");
        prefix.push_back(s);
        continue;
      }
      if (t0.kind == Tok::LParen && is_paren_scalar_prefix()) {
        lex_.pop();  // (
        bool neg = false;
        if (lex_.peek().kind == Tok::Minus) {
          neg = true;
          lex_.pop();
        }
        Scalar s = make_scalar(neg, lex_.pop().text);
        expect(Tok::RParen, "')'");
        expect(Tok::Dot, "'.' after scalar");
        prefix.push_back(s);
        continue;
      }
      break;
    }
    auto body = parse_appl();
    for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
      body = Term::smul(*it, body);
    return body;
  }

  // Lookahead distinguishing "(2).x" / "(-1).y" from "(M) N" application; only
  // needs to look past one parenthesized token.
  auto is_paren_scalar_prefix() -> bool {
    // peek = LParen. A scalar in parens is (NUMBER) or (-NUMBER), then DOT.
    const Token& t1 = lex_.peek2();
    if (t1.kind != Tok::Minus && t1.kind != Tok::Number) return false;
    // Re-lex from scratch is overkill; scan tokens by cloning is unavailable,
    // so decide by raw text: cheap because parens around scalars are rare.
    return paren_scalar_probe();
  }

  auto paren_scalar_probe() -> bool {
    // Conservative: (Minus Number RParen Dot) or (Number RParen Dot).
    // Lexer has one-token lookahead only, so probe on a throwaway copy.
    Lexer probe = lex_;
    probe.pop();  // (
    Token a = probe.pop();
    if (a.kind == Tok::Minus) {
      if (probe.pop().kind != Tok::Number) return false;
    } else if (a.kind != Tok::Number) {
      return false;
    }
    if (probe.pop().kind != Tok::RParen) return false;
    return probe.pop().kind == Tok::Dot;
  }

  auto make_scalar(bool negative, const std::string& digits) -> Scalar {
    Rational v(digits);
    if (negative) v = -v;
    return Scalar::checked(std::move(v), domain_);
  }

  auto parse_appl() -> TermPtr {
    auto t = parse_atom();
    for (;;) {
      switch (lex_.peek().kind) {
        case Tok::LParen:
        case Tok::Ident:
        case Tok::Lambda:
        case Tok::Number:
          t = Term::app(t, parse_atom());
          continue;
        default: return t;
      }
    }
  }

  auto parse_atom() -> TermPtr {
    const Token& t = lex_.peek();
    switch (t.kind) {
      case Tok::Number: {
        Token n = lex_.pop();
        if (n.text != "0")
          throw ParseError("bare scalar '" + n.text +
                               "' is not a term; write '" + n.text + ".M'",
                           n.line, n.col);
        return Term::zero();
      }
      case Tok::Ident: return Term::var(lex_.pop().text);
      case Tok::Lambda: {
        lex_.pop();
        if (lex_.peek().kind != Tok::Ident) fail("expected binder after lambda");
        std::string binder = lex_.pop().text;
        expect(Tok::Dot, "'.' after binder");
        return Term::lam(std::move(binder), parse_sum());
      }
      case Tok::LParen: {
        lex_.pop();
        auto inner = parse_sum();
        expect(Tok::RParen, "')'");
        return inner;
      }
      default: fail("expected a term");
    }
  }

  Lexer lex_;
  ScalarDomain domain_;
};

}  // namespace detail

inline auto parse(const std::string& src, ScalarDomain domain = ScalarDomain::Ring)
    -> TermPtr {
  detail::Parser p(src, domain);
  return p.parse_term();
}

}  // namespace alam
