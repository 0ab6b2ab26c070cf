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

// Abstract syntax of .linc scripts, the parser and the printer. The
// grammar is described in docs/script.md. Nothing here knows about
// types; elab.h turns the syntax into kernel objects.

#ifndef LINC_SCRIPT_H_
#define LINC_SCRIPT_H_

#include <optional>
#include <string>
#include <vector>

#include "linc/defs.h"
#include "linc/error.h"

namespace linc {

struct SrcPos {
  int line = 0;
  int col = 0;
  std::string str() const;
};

struct TypeExpr {
  std::string base;             // empty for an arrow
  std::vector<TypeExpr> arrow;  // {domain, codomain}
  bool operator==(const TypeExpr& o) const;
};

enum class ExprKind {
  kName, kApp, kAbs, kTop, kBot, kAnd, kOr, kImp, kEq, kForall, kExists,
};

struct Expr {
  ExprKind kind = ExprKind::kTop;
  SrcPos pos;
  std::string name;              // kName, or the bound name of a binder
  std::optional<TypeExpr> type;  // binder annotation
  std::vector<Expr> kids;        // app: {fn, arg}; binary: {l, r}; binder: {body}

  // Structural, ignoring positions.
  bool operator==(const Expr& o) const;
};

// A rule argument: a bare word (label, variable name, `as`, `using`)
// or a parenthesised term.
struct ProofArg {
  SrcPos pos;
  std::string word;
  std::optional<Expr> term;
  bool operator==(const ProofArg& o) const;
};

struct ProofStep {
  SrcPos pos;
  std::string rule;
  std::vector<ProofArg> args;
  std::vector<ProofStep> premises;
  bool chained = false;  // written `rule args; next`
  bool operator==(const ProofStep& o) const;
};

struct Binder {
  std::string name;
  TypeExpr type;
  bool operator==(const Binder& o) const = default;
};

struct HypExpr {
  std::string label;  // empty when not written
  Expr formula;
  bool operator==(const HypExpr& o) const = default;
};

struct SequentExpr {
  std::vector<HypExpr> hyps;
  Expr concl;
  bool operator==(const SequentExpr& o) const = default;
};

enum class DeclKind {
  kType,         // type nt
  kConst,        // const z : nt
  kDefine,       // inductive nat : nt -> o := ...
  kLevel,        // level nat 1
  kTheorem,      // theorem n (x : nt) : seq := proof
  kReject,       // reject rule-shape n : seq := proof
  kNormalize,    // normalize n
  kExpectError,  // expect-error NotStratified
};

struct Decl {
  DeclKind kind = DeclKind::kType;
  SrcPos pos;
  std::string name;
  std::vector<std::string> names;  // kConst may declare several
  TypeExpr type;                   // kConst, kDefine
  Flavor flavor = Flavor::kInductive;
  Expr body;                       // kDefine
  int level = 0;                   // kLevel
  std::vector<Binder> params;      // kTheorem, kReject
  SequentExpr goal;
  ProofStep proof;
  std::string expect;              // kReject: check class; kExpectError: code

  bool operator==(const Decl& o) const;
};

struct Script {
  int version = 1;
  std::vector<Decl> decls;

  size_t count(DeclKind k) const;
  const Decl* find_derivation(const std::string& name) const;
  bool operator==(const Script& o) const { return decls == o.decls; }
};

// SyntaxError carries "line:col: message"; DuplicateName is raised for
// a type, constant, predicate or derivation declared twice.
Script parse_script(const std::string& text);
Expr parse_expr(const std::string& text);

std::string print_script(const Script& s);
std::string print_expr(const Expr& e);
std::string print_type(const TypeExpr& t);
std::string print_proof(const ProofStep& p);

}  // namespace linc

#endif  // LINC_SCRIPT_H_
