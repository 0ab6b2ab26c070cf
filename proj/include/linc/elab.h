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

// From script syntax to kernel objects: signature and definitions,
// terms (with simple type inference for binders and equality), and
// proof trees. A proof is elaborated backwards: each step names a rule
// and its arguments, and the premise sequents follow from the goal.
// The result is an ordinary derivation that still has to pass
// check_derivation; the elaborator itself only refuses steps whose
// premises cannot be formed at all.

#ifndef LINC_ELAB_H_
#define LINC_ELAB_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "linc/calculus.h"
#include "linc/defs.h"
#include "linc/script.h"

namespace linc {

using Env = std::map<std::string, Term>;

// A step that could not be built, classified like a checker failure.
class ProofError : public Error {
 public:
  ProofError(CheckError kind, SrcPos pos, const std::string& msg)
      : Error(ErrorCode::kBadDerivation,
              pos.str() + ": " + check_error_name(kind) + ": " + msg),
        kind_(kind),
        pos_(pos) {}
  CheckError kind() const { return kind_; }
  const SrcPos& pos() const { return pos_; }

 private:
  CheckError kind_;
  SrcPos pos_;
};

struct Goal {
  Sequent seq;
  std::vector<std::string> labels;  // one per hypothesis
  Env env;                          // names usable in terms
};

struct Statement {
  std::vector<Var> params;
  Goal goal;
};

struct LoadOptions {
  bool infer_levels = false;
};

class Elaborator {
 public:
  explicit Elaborator(LoadOptions opts = {}) : opts_(opts) {}

  // type, const, inductive/coinductive and level declarations. Bodies
  // and levels are kept by reference until seal(), so `d` must outlive
  // that call; this lets a body mention a predicate declared after it.
  void declare(const Decl& d);
  // Fills in levels (with infer_levels) and checks stratification.
  // Throws NotStratified. Later calls are no-ops; declare() after
  // sealing throws.
  void seal();
  bool sealed() const { return sealed_; }

  const DefTable& table() const { return table_; }

  Type type(const TypeExpr& t) const;
  // Normal term of type `expected` if given. Names resolve to bound
  // variables, then `env`, then constants.
  Term term(const Expr& e, const Env& env,
            std::optional<Type> expected = std::nullopt) const;
  Term formula(const Expr& e, const Env& env) const {
    return term(e, env, Type::Prop());
  }

  Statement statement(const Decl& d) const;
  Deriv prove(const Goal& g, const ProofStep& p) const;

  // Derivations available to `use`.
  void add_theorem(const std::string& name, const Statement& st, Deriv d);

 private:
  struct Known {
    Statement st;
    Deriv deriv;
  };
  friend class ProofBuilder;

  LoadOptions opts_;
  DefTable table_;
  bool sealed_ = false;
  std::vector<const Decl*> pending_;
  std::vector<const Decl*> levels_;
  std::map<std::string, Known> theorems_;
};

}  // namespace linc

#endif  // LINC_ELAB_H_
