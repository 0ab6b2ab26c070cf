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

// Simply-typed lambda terms.
//
// Bound variables are de Bruijn indices, so alpha-equivalent terms are
// structurally identical. Free variables carry a globally unique id drawn
// from an atomic counter; the name is only a printing hint. Terms built by
// the public constructors are raw; normalize() produces the beta-normal
// eta-long form that everything else in the kernel works with.

#ifndef LINC_TERM_H_
#define LINC_TERM_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "linc/error.h"

namespace linc {

class Type {
 public:
  enum class Kind { kBase, kProp, kArrow };

  Type();  // o
  static Type Base(std::string name);
  static Type Prop();
  static Type Arrow(Type dom, Type cod);
  // a1 -> ... -> an -> result
  static Type Arrows(const std::vector<Type>& args, Type result);

  Kind kind() const;
  bool is_prop() const { return kind() == Kind::kProp; }
  bool is_arrow() const { return kind() == Kind::kArrow; }
  const std::string& name() const;  // base only
  const Type& dom() const;
  const Type& cod() const;

  // Argument types and final result of the curried type.
  std::vector<Type> args() const;
  Type result() const;

  // No occurrence of o anywhere.
  bool quantifiable() const;

  bool operator==(const Type& other) const;
  bool operator!=(const Type& other) const { return !(*this == other); }
  bool operator<(const Type& other) const;

  std::string str() const;

  struct Node;  // defined in term.cc

 private:
  explicit Type(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Var {
  uint64_t id = 0;
  std::string name;
  Type type;

  bool operator==(const Var& o) const { return id == o.id; }
  bool operator!=(const Var& o) const { return id != o.id; }
  bool operator<(const Var& o) const { return id < o.id; }
};

// Fresh variable with a unique id. Thread-safe.
Var fresh_var(const std::string& name, const Type& type);

enum class LogicOp { kTop, kBot, kAnd, kOr, kImp, kEq, kForall, kExists };

const char* logic_op_name(LogicOp op);

class Term {
 public:
  enum class Kind { kConst, kLogic, kBVar, kFVar, kLam, kApp };

  Term();  // tt

  static Term Const(std::string name, Type type);
  static Term Logic(LogicOp op, Type param = Type());
  static Term BVar(int index);
  static Term FVar(const Var& v);
  static Term Lam(Type type, std::string hint, Term body);
  static Term App(Term head, std::vector<Term> args);

  // Convenience builders for formulas. They produce raw terms; Lam bodies
  // must refer to the bound variable as BVar(0).
  static Term Top();
  static Term Bot();
  static Term And(Term a, Term b);
  static Term Or(Term a, Term b);
  static Term Imp(Term a, Term b);
  static Term Eq(Type t, Term a, Term b);
  static Term Forall(Type t, std::string hint, Term body);
  static Term Exists(Type t, std::string hint, Term body);

  Kind kind() const;
  const std::string& name() const;  // const name or lambda hint
  const Type& type() const;         // const type, lambda domain, logic param
  LogicOp op() const;
  int index() const;
  const Var& var() const;
  const Term& body() const;
  const Term& head() const;
  const std::vector<Term>& args() const;

  bool is_const() const { return kind() == Kind::kConst; }
  bool is_fvar() const { return kind() == Kind::kFVar; }
  bool is_lam() const { return kind() == Kind::kLam; }
  bool is_app() const { return kind() == Kind::kApp; }

  // Head and argument spine; a non-application is its own head.
  const Term& spine_head() const;
  std::vector<Term> spine_args() const;

  // Structural equality; on normal terms this is alpha-beta-eta equality.
  bool operator==(const Term& o) const;
  bool operator!=(const Term& o) const { return !(*this == o); }
  bool operator<(const Term& o) const;  // arbitrary total order

  const void* identity() const { return node_.get(); }

  struct Node;  // defined in term.cc

 private:
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Constants and predicates. Predicates are constants whose result is o.
class Signature {
 public:
  void add_type(const std::string& name);
  void add_const(const std::string& name, const Type& type);
  bool has_type(const std::string& name) const;
  bool has_const(const std::string& name) const;
  const Type& const_type(const std::string& name) const;
  bool is_predicate(const std::string& name) const;

  const std::vector<std::string>& types() const { return types_; }
  const std::vector<std::string>& consts() const { return order_; }

  // Constant term for a declared symbol.
  Term constant(const std::string& name) const;

 private:
  std::vector<std::string> types_;
  std::map<std::string, Type> consts_;
  std::vector<std::string> order_;
};

// Type of the term. Bound-variable types for loose indices come from
// `bound` (innermost last). Checks constant types against `sig` when
// given.
Type typecheck(const Term& t, const Signature* sig,
               const std::vector<Type>& bound = {});

// Beta-normal, eta-long form.
Term normalize(const Term& t);
// Same, for a term with loose bound variables typed by `bound`
// (innermost last).
Term normalize_in(const Term& t, const std::vector<Type>& bound);

bool is_normal(const Term& t);

// de Bruijn plumbing.
Term shift(const Term& t, int d, int cutoff = 0);
Term instantiate_bvar(const Term& body, const Term& arg);  // body[arg/0]
bool has_loose_bvars(const Term& t, int depth = 0);

// Free variables.
void collect_fvars(const Term& t, std::map<uint64_t, Var>* out);
std::map<uint64_t, Var> fvars(const Term& t);
bool occurs(const Term& t, uint64_t var_id);

// Does the constant `name` occur in t?
bool mentions_const(const Term& t, const std::string& name);
// Replace every occurrence of constant `name` by `repl` and renormalize.
Term replace_const(const Term& t, const std::string& name, const Term& repl);

// Abstract the free variables `vs` (outermost first).
Term abstract(const std::vector<Var>& vs, const Term& body);
// Normal form of `f` applied to args.
Term beta_apply(const Term& f, const std::vector<Term>& args);

// Atomic formula: a predicate constant applied to arguments.
bool is_atomic(const Term& f);

std::string to_string(const Term& t);

class Subst {
 public:
  Subst() = default;
  static Subst single(const Var& v, const Term& t);

  // Binds v to normalize(t). Type errors raise kTypeMismatch.
  void bind(const Var& v, const Term& t);
  bool binds(uint64_t id) const { return map_.count(id) > 0; }
  const Term* lookup(uint64_t id) const;
  bool empty() const { return map_.empty(); }
  size_t size() const { return map_.size(); }

  const std::map<uint64_t, std::pair<Var, Term>>& entries() const {
    return map_;
  }

  // Variables occurring in the range.
  std::map<uint64_t, Var> range_vars() const;

  // Only the bindings for the given variables.
  Subst restricted_to(const std::map<uint64_t, Var>& vars) const;

  bool operator==(const Subst& o) const;

  std::string str() const;

 private:
  std::map<uint64_t, std::pair<Var, Term>> map_;
};

Term subst_apply(const Term& t, const Subst& s);
Term subst_apply_in(const Term& t, const Subst& s,
                    const std::vector<Type>& bound);
// t (a o b) = (t a) b
Subst subst_compose(const Subst& a, const Subst& b);

}  // namespace linc

#endif  // LINC_TERM_H_
