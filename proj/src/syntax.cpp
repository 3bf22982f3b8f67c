// Copyright 2026 The superfcm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "superfcm/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

#include "superfcm/errors.hpp"

namespace superfcm {

namespace {

enum class Tok { Ident, Var, Chars, Eps, LParen, RParen, Comma, Colon, Semi, Equals, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space();
    Token tok;
    tok.line = line_;
    tok.column = column_;
    if (pos_ >= text_.size()) return tok;
    const char c = text_[pos_];
    if (text_.compare(pos_, 2, "\xCE\xB5") == 0) {  // UTF-8 epsilon
      advance(2);
      tok.kind = Tok::Eps;
      return tok;
    }
    switch (c) {
      case '(':
        advance(1);
        tok.kind = Tok::LParen;
        return tok;
      case ')':
        advance(1);
        tok.kind = Tok::RParen;
        return tok;
      case ',':
        advance(1);
        tok.kind = Tok::Comma;
        return tok;
      case ':':
        advance(1);
        tok.kind = Tok::Colon;
        return tok;
      case ';':
        advance(1);
        tok.kind = Tok::Semi;
        return tok;
      case '=':
        advance(1);
        tok.kind = Tok::Equals;
        return tok;
      case '\'':
        return chars(tok);
      default:
        break;
    }
    if (ident_char(c)) {
      std::size_t end = pos_;
      while (end < text_.size() && ident_char(text_[end])) ++end;
      std::string word(text_.substr(pos_, end - pos_));
      if ((word == "e" || word == "s" || word == "t") && end < text_.size() && text_[end] == '.') {
        std::size_t name_end = end + 1;
        while (name_end < text_.size() && ident_char(text_[name_end])) ++name_end;
        if (name_end == end + 1) fail("variable name expected", line_, column_ + 2);
        tok.kind = Tok::Var;
        tok.text = std::string(text_.substr(pos_, name_end - pos_));
        advance(name_end - pos_);
        return tok;
      }
      tok.kind = Tok::Ident;
      tok.text = std::move(word);
      advance(end - pos_);
      return tok;
    }
    fail(std::string("unexpected character '") + c + "'", line_, column_);
  }

  [[noreturn]] static void fail(const std::string& message, std::size_t line, std::size_t column) {
    throw SyntaxError(message, line, column);
  }

 private:
  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i, ++pos_) {
      if (text_[pos_] == '\n') {
        ++line_;
        column_ = 1;
      } else if ((static_cast<unsigned char>(text_[pos_]) & 0xC0) != 0x80) {
        ++column_;
      }
    }
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) != 0) {
        advance(1);
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance(1);
      } else {
        break;
      }
    }
  }

  Token chars(Token tok) {
    advance(1);
    std::string body;
    while (true) {
      if (pos_ >= text_.size() || text_[pos_] == '\n')
        fail("unterminated character literal", tok.line, tok.column);
      char c = text_[pos_];
      if (c == '\'') {
        advance(1);
        break;
      }
      if (c == '\\') {
        if (pos_ + 1 >= text_.size()) fail("bad escape", line_, column_);
        const char e = text_[pos_ + 1];
        advance(2);
        switch (e) {
          case 'n':
            body += '\n';
            break;
          case 't':
            body += '\t';
            break;
          case '\\':
          case '\'':
            body += e;
            break;
          case 'x': {
            if (pos_ + 2 > text_.size()) fail("bad escape", line_, column_);
            const std::string hex(text_.substr(pos_, 2));
            if (!std::isxdigit(static_cast<unsigned char>(hex[0])) ||
                !std::isxdigit(static_cast<unsigned char>(hex[1])))
              fail("bad escape", line_, column_);
            body += static_cast<char>(std::stoi(hex, nullptr, 16));
            advance(2);
            break;
          }
          default:
            fail("bad escape", line_, column_);
        }
        continue;
      }
      body += c;
      advance(1);
    }
    tok.kind = body.empty() ? Tok::Eps : Tok::Chars;
    tok.text = std::move(body);
    return tok;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_(text) {
    cur_ = lexer_.next();
    peek_ = lexer_.next();
  }

  Program program(std::optional<Term> initial) {
    std::optional<Term> start;
    std::vector<char> declared;
    std::vector<std::pair<Term, Term>> rules;
    std::vector<Token> rule_starts;
    while (cur_.kind != Tok::End) {
      if (cur_.kind == Tok::Ident && cur_.text == "start" && peek_.kind == Tok::Colon) {
        const Token at = cur_;
        shift();
        shift();
        if (start) Lexer::fail("duplicate start declaration", at.line, at.column);
        start = term();
        expect(Tok::Semi, "';'");
      } else if (cur_.kind == Tok::Ident && cur_.text == "alphabet" && peek_.kind == Tok::Colon) {
        shift();
        shift();
        while (cur_.kind == Tok::Chars || cur_.kind == Tok::Eps) {
          for (char c : cur_.text)
            if (std::find(declared.begin(), declared.end(), c) == declared.end())
              declared.push_back(c);
          shift();
        }
        expect(Tok::Semi, "';'");
      } else {
        rule_starts.push_back(cur_);
        Term lhs = term();
        expect(Tok::Equals, "'='");
        Term rhs = term();
        expect(Tok::Semi, "';'");
        if (lhs.size() != 1 || !lhs.atom().is_call())
          Lexer::fail("left-hand side must be a function call", rule_starts.back().line,
                      rule_starts.back().column);
        for (const Term& arg : lhs.atom().args())
          if (!arg.is_passive())
            Lexer::fail("patterns must be passive", rule_starts.back().line,
                        rule_starts.back().column);
        rules.emplace_back(std::move(lhs), std::move(rhs));
      }
    }
    if (!start) start = std::move(initial);
    if (!start) Lexer::fail("missing 'start:' declaration", cur_.line, cur_.column);
    return make_program(std::move(*start), std::move(rules), std::move(declared));
  }

  Term whole_term() {
    Term t = term();
    if (cur_.kind != Tok::End) Lexer::fail("unexpected trailing input", cur_.line, cur_.column);
    return t;
  }

 private:
  void shift() {
    cur_ = peek_;
    peek_ = lexer_.next();
  }

  void expect(Tok kind, const char* what) {
    if (cur_.kind != kind) Lexer::fail(std::string("expected ") + what, cur_.line, cur_.column);
    shift();
  }

  static bool ends_term(Tok k) {
    return k == Tok::RParen || k == Tok::Comma || k == Tok::Semi || k == Tok::Equals ||
           k == Tok::End;
  }

  Term term() {
    Term out;
    if (ends_term(cur_.kind)) return out;
    out.append(element());
    while (cur_.kind == Tok::Colon) {
      shift();
      out.append(element());
    }
    return out;
  }

  Term element() {
    switch (cur_.kind) {
      case Tok::Chars: {
        Term t = Term::word(cur_.text);
        shift();
        return t;
      }
      case Tok::Eps:
        shift();
        return Term();
      case Tok::Var: {
        const VarKind kind = cur_.text[0] == 'e'   ? VarKind::E
                             : cur_.text[0] == 's' ? VarKind::S
                                                   : VarKind::T;
        Term t = Term::var(kind, cur_.text.substr(2));
        shift();
        return t;
      }
      case Tok::LParen: {
        shift();
        Term inner = term();
        expect(Tok::RParen, "')'");
        return Term::paren(std::move(inner));
      }
      case Tok::Ident: {
        std::string name = cur_.text;
        shift();
        expect(Tok::LParen, "'(' after function name");
        std::vector<Term> args;
        if (cur_.kind != Tok::RParen) {
          args.push_back(term());
          while (cur_.kind == Tok::Comma) {
            shift();
            args.push_back(term());
          }
        }
        expect(Tok::RParen, "')'");
        return Term::call(std::move(name), std::move(args));
      }
      default:
        Lexer::fail("term expected", cur_.line, cur_.column);
    }
  }

  Lexer lexer_;
  Token cur_;
  Token peek_;
};

void print_into(const Term& t, std::string& out, bool empty_as_eps);

void print_atom(const Atom& a, std::string& out) {
  switch (a.kind()) {
    case Atom::Kind::Char:
      out += '\'';
      out += escape_char(a.ch());
      out += '\'';
      return;
    case Atom::Kind::Var:
      out += to_string(a.var());
      return;
    case Atom::Kind::Paren:
      out += '(';
      print_into(a.inner(), out, false);
      out += ')';
      return;
    case Atom::Kind::Call:
      out += a.function();
      out += '(';
      for (std::size_t i = 0; i < a.args().size(); ++i) {
        if (i > 0) out += ", ";
        print_into(a.args()[i], out, true);
      }
      out += ')';
      return;
  }
}

void print_into(const Term& t, std::string& out, bool empty_as_eps) {
  if (t.empty()) {
    if (empty_as_eps) out += "\xCE\xB5";
    return;
  }
  std::size_t i = 0;
  bool first = true;
  while (i < t.size()) {
    if (!first) out += ':';
    first = false;
    if (t[i].is_char()) {
      out += '\'';
      while (i < t.size() && t[i].is_char()) out += escape_char(t[i++].ch());
      out += '\'';
    } else {
      print_atom(t[i++], out);
    }
  }
}

}  // namespace

std::string escape_char(char c) {
  switch (c) {
    case '\'':
      return "\\'";
    case '\\':
      return "\\\\";
    case '\n':
      return "\\n";
    case '\t':
      return "\\t";
    default:
      break;
  }
  const auto u = static_cast<unsigned char>(c);
  if (u < 0x20 || u >= 0x7F) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "\\x%02X", u);
    return buf;
  }
  return std::string(1, c);
}

Program parse_program(std::string_view text, std::optional<Term> initial) {
  Parser parser(text);
  return parser.program(std::move(initial));
}

Term parse_term(std::string_view text) {
  Parser parser(text);
  return parser.whole_term();
}

std::string print_term(const Term& t) {
  std::string out;
  print_into(t, out, true);
  return out;
}

std::string print_rule(const Rule& r) { return print_term(r.lhs) + " = " + print_term(r.rhs) + ";"; }

std::string print_program(const Program& p) {
  std::string out = "start: " + print_term(p.initial) + ";\n";
  if (p.alphabet != inferred_alphabet(p.initial, p.rules)) {
    out += "alphabet:";
    for (char c : p.alphabet) out += " '" + escape_char(c) + "'";
    out += ";\n";
  }
  for (const Rule& r : p.rules) out += print_rule(r) + "\n";
  return out;
}

}  // namespace superfcm
