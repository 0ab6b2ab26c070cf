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

#include <sstream>

#include "linc/script.h"

namespace linc {
namespace {

// Binding strength: larger binds tighter.
enum Prec { kBinder = 0, kImp = 1, kOr = 2, kAnd = 3, kEq = 4, kApp = 5,
            kAtom = 6 };

int prec(const Expr& e) {
  switch (e.kind) {
    case ExprKind::kAbs: case ExprKind::kForall: case ExprKind::kExists:
      return kBinder;
    case ExprKind::kImp: return kImp;
    case ExprKind::kOr: return kOr;
    case ExprKind::kAnd: return kAnd;
    case ExprKind::kEq: return kEq;
    case ExprKind::kApp: return kApp;
    default: return kAtom;
  }
}

void type_to(std::ostream& os, const TypeExpr& t, bool atom) {
  if (t.arrow.empty()) {
    os << t.base;
    return;
  }
  if (atom) os << "(";
  type_to(os, t.arrow[0], true);
  os << " -> ";
  type_to(os, t.arrow[1], false);
  if (atom) os << ")";
}

// `edge`: nothing follows e, so a trailing binder needs no parentheses.
void expr_to(std::ostream& os, const Expr& e, int min, bool edge) {
  int p = prec(e);
  bool paren = p < min || (p == kBinder && !edge);
  if (paren) {
    os << "(";
    edge = true;
  }
  switch (e.kind) {
    case ExprKind::kName: os << e.name; break;
    case ExprKind::kTop: os << "tt"; break;
    case ExprKind::kBot: os << "ff"; break;
    case ExprKind::kAbs: case ExprKind::kForall: case ExprKind::kExists:
      if (e.kind == ExprKind::kForall) os << "forall ";
      if (e.kind == ExprKind::kExists) os << "exists ";
      os << e.name;
      if (e.type) {
        os << ":";
        type_to(os, *e.type, true);
      }
      os << "\\ ";
      expr_to(os, e.kids[0], kBinder, edge);
      break;
    case ExprKind::kApp: {
      expr_to(os, e.kids[0], kApp, false);
      os << " ";
      // A trailing binder argument is allowed unparenthesised.
      const Expr& a = e.kids[1];
      if (prec(a) == kBinder && edge)
        expr_to(os, a, kBinder, true);
      else
        expr_to(os, a, kAtom, false);
      break;
    }
    case ExprKind::kEq:
      expr_to(os, e.kids[0], kApp, false);
      os << " = ";
      expr_to(os, e.kids[1], kApp, edge);
      break;
    case ExprKind::kImp: case ExprKind::kOr: case ExprKind::kAnd: {
      const char* op = e.kind == ExprKind::kImp  ? " => "
                       : e.kind == ExprKind::kOr ? " \\/ "
                                                 : " /\\ ";
      expr_to(os, e.kids[0], p + 1, false);
      os << op;
      const Expr& r = e.kids[1];
      // Right associative; a binder may close the chain.
      expr_to(os, r, prec(r) == kBinder ? kBinder : p, edge);
      break;
    }
  }
  if (paren) os << ")";
}

void proof_to(std::ostream& os, const ProofStep& s, int indent) {
  os << s.rule;
  for (const ProofArg& a : s.args) {
    os << " ";
    if (a.term) {
      os << "(";
      expr_to(os, *a.term, kBinder, true);
      os << ")";
    } else {
      os << a.word;
    }
  }
  if (s.chained && s.premises.size() == 1) {
    os << ";\n" << std::string(indent, ' ');
    proof_to(os, s.premises[0], indent);
    return;
  }
  for (const ProofStep& p : s.premises) {
    os << "\n" << std::string(indent + 2, ' ') << "{ ";
    proof_to(os, p, indent + 4);
    os << " }";
  }
}

void sequent_to(std::ostream& os, const SequentExpr& s) {
  for (size_t i = 0; i < s.hyps.size(); ++i) {
    if (i) os << ", ";
    const Expr& f = s.hyps[i].formula;
    if (!s.hyps[i].label.empty()) os << s.hyps[i].label << ": ";
    // "," and "-->" end a formula, so binders may stay bare; but
    // "x:T\ ..." at the start would read as a label.
    bool typed_abs = f.kind == ExprKind::kAbs && f.type;
    expr_to(os, f, typed_abs ? kAtom : kBinder, true);
  }
  os << (s.hyps.empty() ? "--> " : " --> ");
  expr_to(os, s.concl, kBinder, true);
}

}  // namespace

std::string print_type(const TypeExpr& t) {
  std::ostringstream os;
  type_to(os, t, false);
  return os.str();
}

std::string print_expr(const Expr& e) {
  std::ostringstream os;
  expr_to(os, e, kBinder, true);
  return os.str();
}

std::string print_proof(const ProofStep& p) {
  std::ostringstream os;
  proof_to(os, p, 2);
  return os.str();
}

std::string print_script(const Script& s) {
  std::ostringstream os;
  os << "#linc " << s.version << "\n";
  for (const Decl& d : s.decls) {
    switch (d.kind) {
      case DeclKind::kType: os << "type " << d.name << "\n"; break;
      case DeclKind::kConst:
        os << "const";
        for (const auto& n : d.names) os << " " << n;
        os << " : " << print_type(d.type) << "\n";
        break;
      case DeclKind::kDefine:
        os << (d.flavor == Flavor::kInductive ? "inductive " : "coinductive ")
           << d.name << " : " << print_type(d.type) << " :=\n  "
           << print_expr(d.body) << "\n";
        break;
      case DeclKind::kLevel:
        os << "level " << d.name << " " << d.level << "\n";
        break;
      case DeclKind::kTheorem: case DeclKind::kReject:
        os << (d.kind == DeclKind::kTheorem ? "theorem " : "reject ");
        if (d.kind == DeclKind::kReject) os << d.expect << " ";
        os << d.name;
        for (const Binder& b : d.params)
          os << " (" << b.name << " : " << print_type(b.type) << ")";
        os << " : ";
        sequent_to(os, d.goal);
        os << " :=\n  " << print_proof(d.proof) << "\n";
        break;
      case DeclKind::kNormalize: os << "normalize " << d.name << "\n"; break;
      case DeclKind::kExpectError:
        os << "expect-error " << d.expect << "\n";
        break;
    }
  }
  return os.str();
}

}  // namespace linc
