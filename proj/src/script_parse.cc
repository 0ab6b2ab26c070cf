// Copyright 2026 The linc Authors.
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

#include <algorithm>
#include <cctype>
#include <cstring>
#include <set>

#include "linc/script.h"

namespace linc {

std::string SrcPos::str() const {
  return std::to_string(line) + ":" + std::to_string(col);
}

bool TypeExpr::operator==(const TypeExpr& o) const {
  return base == o.base && arrow == o.arrow;
}

bool Expr::operator==(const Expr& o) const {
  return kind == o.kind && name == o.name && type == o.type && kids == o.kids;
}

bool ProofArg::operator==(const ProofArg& o) const {
  return word == o.word && term == o.term;
}

bool ProofStep::operator==(const ProofStep& o) const {
  return rule == o.rule && args == o.args && premises == o.premises;
}

bool Decl::operator==(const Decl& o) const {
  return kind == o.kind && name == o.name && names == o.names &&
         type == o.type && flavor == o.flavor && body == o.body &&
         level == o.level && params == o.params && goal == o.goal &&
         proof == o.proof && expect == o.expect;
}

size_t Script::count(DeclKind k) const {
  size_t n = 0;
  for (const Decl& d : decls) n += d.kind == k;
  return n;
}

const Decl* Script::find_derivation(const std::string& name) const {
  for (const Decl& d : decls)
    if ((d.kind == DeclKind::kTheorem || d.kind == DeclKind::kReject) &&
        d.name == name)
      return &d;
  return nullptr;
}

namespace {

enum class Tok {
  kIdent, kInt, kLParen, kRParen, kLBrace, kRBrace, kColon, kSemi, kComma,
  kBackslash, kDot, kDefEq, kSeqArrow, kArrow, kImp, kAnd, kOr, kEq,
  kHeader, kEnd,
};

struct Token {
  Tok kind;
  std::string text;
  SrcPos pos;
};

const std::set<std::string> kDeclWords = {
    "type", "const", "inductive", "coinductive", "level",
    "theorem", "reject", "normalize", "expect-error",
};

[[noreturn]] void syntax_error(const SrcPos& p, const std::string& msg) {
  throw Error(ErrorCode::kSyntaxError, p.str() + ": " + msg);
}

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  size_t i = 0;
  int line = 1, col = 1;
  auto adv = [&](size_t n) {
    for (size_t k = 0; k < n; ++k) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto starts = [&](const char* p) { return s.compare(i, strlen(p), p) == 0; };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      adv(1);
      continue;
    }
    if (c == '%') {
      while (i < s.size() && s[i] != '\n') adv(1);
      continue;
    }
    SrcPos p{line, col};
    if (c == '#') {
      size_t j = i;
      while (j < s.size() && s[j] != '\n') ++j;
      out.push_back({Tok::kHeader, s.substr(i, j - i), p});
      adv(j - i);
      continue;
    }
    if (ident_start(c)) {
      size_t j = i;
      // Hyphens join words ("rule-shape", "expect-error") but never
      // start an arrow.
      while (j < s.size() &&
             (ident_char(s[j]) ||
              (s[j] == '-' && j + 1 < s.size() && ident_start(s[j + 1]))))
        ++j;
      out.push_back({Tok::kIdent, s.substr(i, j - i), p});
      adv(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])))
        ++j;
      out.push_back({Tok::kInt, s.substr(i, j - i), p});
      adv(j - i);
      continue;
    }
    struct Punct {
      const char* text;
      Tok kind;
    };
    static const Punct kPunct[] = {
        {"-->", Tok::kSeqArrow}, {":=", Tok::kDefEq}, {"->", Tok::kArrow},
        {"=>", Tok::kImp},       {"/\\", Tok::kAnd},  {"\\/", Tok::kOr},
        {"(", Tok::kLParen},     {")", Tok::kRParen}, {"{", Tok::kLBrace},
        {"}", Tok::kRBrace},     {":", Tok::kColon},  {";", Tok::kSemi},
        {",", Tok::kComma},      {"\\", Tok::kBackslash},
        {".", Tok::kDot},        {"=", Tok::kEq},
    };
    bool hit = false;
    for (const Punct& q : kPunct) {
      if (starts(q.text)) {
        out.push_back({q.kind, q.text, p});
        adv(strlen(q.text));
        hit = true;
        break;
      }
    }
    if (!hit) syntax_error(p, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::kEnd, "", {line, col}});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  Script script() {
    Script s;
    if (peek().kind == Tok::kHeader) {
      const Token& h = next();
      if (h.text != "#linc 1")
        syntax_error(h.pos, "unsupported header '" + h.text +
                                "', expected '#linc 1'");
    }
    std::set<std::string> types, consts, derivs;
    while (peek().kind != Tok::kEnd) {
      Decl d = decl();
      auto dup = [&](std::set<std::string>& seen, const std::string& n) {
        if (!seen.insert(n).second)
          throw Error(ErrorCode::kDuplicateName,
                      d.pos.str() + ": '" + n + "' is already declared");
      };
      switch (d.kind) {
        case DeclKind::kType: dup(types, d.name); break;
        case DeclKind::kConst:
          for (const std::string& n : d.names) dup(consts, n);
          break;
        case DeclKind::kDefine: dup(consts, d.name); break;
        case DeclKind::kTheorem: case DeclKind::kReject:
          dup(derivs, d.name);
          break;
        default: break;
      }
      s.decls.push_back(std::move(d));
    }
    return s;
  }

  Expr lone_expr() {
    Expr e = expr();
    expect(Tok::kEnd, "end of input");
    return e;
  }

 private:
  const Token& peek(size_t k = 0) const {
    return t_[std::min(p_ + k, t_.size() - 1)];
  }
  const Token& next() { return t_[std::min(p_++, t_.size() - 1)]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_word(const char* w) const {
    return peek().kind == Tok::kIdent && peek().text == w;
  }
  const Token& expect(Tok k, const char* what) {
    if (!at(k)) {
      std::string got = peek().kind == Tok::kEnd ? "end of input"
                                                 : "'" + peek().text + "'";
      syntax_error(peek().pos, std::string("expected ") + what + ", got " + got);
    }
    return next();
  }
  std::string ident(const char* what) { return expect(Tok::kIdent, what).text; }
  void expect_word(const char* w) {
    if (!at_word(w)) syntax_error(peek().pos, std::string("expected '") + w + "'");
    next();
  }

  // ------------------------------------------------------------ decls

  Decl decl() {
    Decl d;
    d.pos = peek().pos;
    if (!at(Tok::kIdent) || !kDeclWords.count(peek().text))
      syntax_error(peek().pos, "expected a declaration, got '" +
                                   peek().text + "'");
    std::string kw = next().text;
    if (kw == "type") {
      d.kind = DeclKind::kType;
      d.name = ident("type name");
    } else if (kw == "const") {
      d.kind = DeclKind::kConst;
      while (at(Tok::kIdent)) d.names.push_back(next().text);
      if (d.names.empty()) syntax_error(d.pos, "const without a name");
      expect(Tok::kColon, "':'");
      d.type = type();
    } else if (kw == "inductive" || kw == "coinductive") {
      d.kind = DeclKind::kDefine;
      d.flavor = kw == "inductive" ? Flavor::kInductive : Flavor::kCoinductive;
      d.name = ident("predicate name");
      expect(Tok::kColon, "':'");
      d.type = type();
      expect(Tok::kDefEq, "':='");
      if (at(Tok::kEnd) || (at(Tok::kIdent) && kDeclWords.count(peek().text)))
        syntax_error(peek().pos, "definition of " + d.name + " has no body");
      d.body = expr();
    } else if (kw == "level") {
      d.kind = DeclKind::kLevel;
      d.name = ident("predicate name");
      d.level = std::stoi(expect(Tok::kInt, "a level").text);
    } else if (kw == "theorem" || kw == "reject") {
      d.kind = kw == "theorem" ? DeclKind::kTheorem : DeclKind::kReject;
      if (d.kind == DeclKind::kReject) d.expect = ident("a check error class");
      d.name = ident("derivation name");
      while (at(Tok::kLParen)) {
        next();
        std::vector<std::string> ns;
        while (at(Tok::kIdent)) ns.push_back(next().text);
        if (ns.empty()) syntax_error(peek().pos, "expected parameter names");
        expect(Tok::kColon, "':'");
        TypeExpr ty = type();
        expect(Tok::kRParen, "')'");
        for (auto& n : ns) d.params.push_back({n, ty});
      }
      expect(Tok::kColon, "':'");
      d.goal = sequent();
      expect(Tok::kDefEq, "':='");
      d.proof = step();
    } else if (kw == "normalize") {
      d.kind = DeclKind::kNormalize;
      d.name = ident("derivation name");
    } else {
      d.kind = DeclKind::kExpectError;
      d.expect = ident("an error code");
    }
    return d;
  }

  // ------------------------------------------------------------ types

  TypeExpr type() {
    TypeExpr a = type_atom();
    if (at(Tok::kArrow)) {
      next();
      TypeExpr r;
      r.arrow = {std::move(a), type()};
      return r;
    }
    return a;
  }

  TypeExpr type_atom() {
    if (at(Tok::kLParen)) {
      next();
      TypeExpr t = type();
      expect(Tok::kRParen, "')'");
      return t;
    }
    TypeExpr t;
    t.base = ident("a type");
    return t;
  }

  // --------------------------------------------------------- sequents

  SequentExpr sequent() {
    SequentExpr s;
    if (at(Tok::kSeqArrow)) {
      next();
      s.concl = expr();
      return s;
    }
    while (true) {
      HypExpr h;
      if (at(Tok::kIdent) && peek(1).kind == Tok::kColon) {
        h.label = next().text;
        next();
      }
      h.formula = expr();
      s.hyps.push_back(std::move(h));
      if (at(Tok::kComma)) {
        next();
        continue;
      }
      break;
    }
    if (at(Tok::kSeqArrow)) {
      next();
      s.concl = expr();
      return s;
    }
    if (s.hyps.size() != 1 || !s.hyps[0].label.empty())
      syntax_error(peek().pos, "expected '-->'");
    s.concl = std::move(s.hyps[0].formula);
    s.hyps.clear();
    return s;
  }

  // ------------------------------------------------------------ proofs

  bool arg_stop() const {
    switch (peek().kind) {
      case Tok::kIdent: return kDeclWords.count(peek().text) > 0;
      case Tok::kLParen: return false;
      default: return true;
    }
  }

  ProofStep step() {
    ProofStep s;
    s.pos = peek().pos;
    if (at(Tok::kIdent) && kDeclWords.count(peek().text))
      syntax_error(s.pos, "expected a rule name");
    s.rule = ident("a rule name");
    while (!arg_stop()) {
      ProofArg a;
      a.pos = peek().pos;
      if (at(Tok::kLParen)) {
        next();
        a.term = expr();
        expect(Tok::kRParen, "')'");
      } else {
        a.word = next().text;
      }
      s.args.push_back(std::move(a));
    }
    if (at(Tok::kSemi)) {
      next();
      s.chained = true;
      s.premises.push_back(step());
      return s;
    }
    while (at(Tok::kLBrace)) {
      next();
      s.premises.push_back(step());
      expect(Tok::kRBrace, "'}'");
    }
    return s;
  }

  // ------------------------------------------------------- expressions
  //
  //   expr  := binder | imp
  //   imp   := or ('=>' (binder | imp))?
  //   or    := and ('\/' (binder | or))?
  //   and   := eq ('/\' (binder | and))?
  //   eq    := app ('=' app)?
  //   app   := atom+ binder?
  //   binder:= ('forall' | 'exists')? IDENT (':' tyatom)? '\' expr

  bool at_binder() const {
    size_t k = 0;
    if (at_word("forall") || at_word("exists")) k = 1;
    if (peek(k).kind != Tok::kIdent) return false;
    const Token& after = peek(k + 1);
    if (after.kind == Tok::kBackslash) return true;
    // x : T \ ...   (only a binder can carry an annotation)
    return after.kind == Tok::kColon && k + 2 < t_.size() &&
           (peek(k + 2).kind == Tok::kIdent ||
            peek(k + 2).kind == Tok::kLParen) &&
           binder_colon_ahead(k + 2);
  }

  // After "x :", a type atom followed by a backslash.
  bool binder_colon_ahead(size_t k) const {
    if (peek(k).kind == Tok::kIdent) return peek(k + 1).kind == Tok::kBackslash;
    int depth = 0;
    for (size_t j = k; p_ + j < t_.size(); ++j) {
      Tok tk = peek(j).kind;
      if (tk == Tok::kLParen) ++depth;
      if (tk == Tok::kRParen && --depth == 0)
        return peek(j + 1).kind == Tok::kBackslash;
      if (tk == Tok::kEnd) return false;
    }
    return false;
  }

  Expr binder() {
    Expr e;
    e.pos = peek().pos;
    e.kind = ExprKind::kAbs;
    if (at_word("forall")) {
      next();
      e.kind = ExprKind::kForall;
    } else if (at_word("exists")) {
      next();
      e.kind = ExprKind::kExists;
    }
    e.name = ident("a bound variable");
    if (at(Tok::kColon)) {
      next();
      e.type = type_atom();
    }
    expect(Tok::kBackslash, "'\\'");
    e.kids.push_back(expr());
    return e;
  }

  Expr expr() { return at_binder() ? binder() : imp(); }

  Expr bin(ExprKind k, Expr l, Expr r, SrcPos p) {
    Expr e;
    e.kind = k;
    e.pos = p;
    e.kids = {std::move(l), std::move(r)};
    return e;
  }

  Expr imp() {
    Expr l = disj();
    if (!at(Tok::kImp)) return l;
    SrcPos p = next().pos;
    return bin(ExprKind::kImp, std::move(l), at_binder() ? binder() : imp(), p);
  }

  Expr disj() {
    Expr l = conj();
    if (!at(Tok::kOr)) return l;
    SrcPos p = next().pos;
    return bin(ExprKind::kOr, std::move(l), at_binder() ? binder() : disj(), p);
  }

  Expr conj() {
    Expr l = eq();
    if (!at(Tok::kAnd)) return l;
    SrcPos p = next().pos;
    return bin(ExprKind::kAnd, std::move(l), at_binder() ? binder() : conj(), p);
  }

  Expr eq() {
    Expr l = app();
    if (!at(Tok::kEq)) return l;
    SrcPos p = next().pos;
    return bin(ExprKind::kEq, std::move(l), app(), p);
  }

  bool at_atom() const {
    if (at(Tok::kLParen)) return true;
    if (!at(Tok::kIdent)) return false;
    const std::string& w = peek().text;
    if (kDeclWords.count(w) || w == "forall" || w == "exists") return false;
    return !at_binder();
  }

  Expr app() {
    Expr f = atom();
    while (at_atom() || at_binder()) {
      bool last = !at_atom();
      Expr a = last ? binder() : atom();
      Expr e;
      e.kind = ExprKind::kApp;
      e.pos = f.pos;
      e.kids = {std::move(f), std::move(a)};
      f = std::move(e);
      if (last) break;
    }
    return f;
  }

  Expr atom() {
    Expr e;
    e.pos = peek().pos;
    if (at(Tok::kLParen)) {
      next();
      e = expr();
      expect(Tok::kRParen, "')'");
      return e;
    }
    if (!at_atom()) {
      std::string got = at(Tok::kEnd) ? "end of input" : "'" + peek().text + "'";
      syntax_error(peek().pos, "expected a term, got " + got);
    }
    std::string w = next().text;
    if (w == "tt") {
      e.kind = ExprKind::kTop;
    } else if (w == "ff") {
      e.kind = ExprKind::kBot;
    } else {
      e.kind = ExprKind::kName;
      e.name = w;
    }
    return e;
  }

  std::vector<Token> t_;
  size_t p_ = 0;
};

}  // namespace

Script parse_script(const std::string& text) {
  return Parser(lex(text)).script();
}

Expr parse_expr(const std::string& text) {
  return Parser(lex(text)).lone_expr();
}

}  // namespace linc
