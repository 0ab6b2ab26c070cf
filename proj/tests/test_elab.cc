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

#include <functional>

#include "doctest.h"
#include "linc/elab.h"
#include "linc/script.h"

namespace linc {
namespace {

const char* kNat = R"(
type nt
const z : nt
const s : nt -> nt
const f : nt -> nt
inductive nat : nt -> o := x\ x = z \/ exists y\ x = s y /\ nat y
level nat 1
)";

// Loads the declarations of a script; keeps the Script alive for seal().
struct Loaded {
  Script script;
  Elaborator el;
  explicit Loaded(const std::string& text, LoadOptions o = {})
      : script(parse_script(text)), el(o) {
    for (const Decl& d : script.decls)
      if (d.kind == DeclKind::kType || d.kind == DeclKind::kConst ||
          d.kind == DeclKind::kDefine || d.kind == DeclKind::kLevel)
        el.declare(d);
    el.seal();
  }
  Term term(const std::string& e, const Env& env = {}) {
    return el.term(parse_expr(e), env);
  }
  // Elaborates the first theorem of `theorem`.
  Deriv prove(const std::string& theorem, Statement* st_out = nullptr) {
    Script s = parse_script(theorem);
    const Decl& d = s.decls.at(0);
    Statement st = el.statement(d);
    Deriv pi = el.prove(st.goal, d.proof);
    if (st_out) *st_out = st;
    return pi;
  }
};

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error");
  return ErrorCode::kIo;
}

CheckError class_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ProofError& e) {
    return e.kind();
  }
  FAIL("no proof error");
  return CheckError::kMalformed;
}

TEST_CASE("binder and equality types are inferred") {
  Loaded l(kNat);
  Term t = l.term("forall x\\ x = s z");
  CHECK(t.spine_head().type() == Type::Base("nt"));
  // The function's type comes from its use.
  t = l.term("exists g\\ g z = z");
  CHECK(t.spine_head().type() == Type::Arrow(Type::Base("nt"), Type::Base("nt")));
  t = l.term("x\\ y\\ nat x /\\ x = y");
  CHECK(typecheck(t, &l.el.table().sig()) ==
        Type::Arrows({Type::Base("nt"), Type::Base("nt")}, Type::Prop()));
  // annotations are respected
  t = l.term("exists g:(nt -> nt)\\ tt");
  CHECK(t.spine_head().type().is_arrow());
}

TEST_CASE("type errors") {
  Loaded l(kNat);
  CHECK(code_of([&] { l.term("exists x\\ tt"); }) == ErrorCode::kTypeMismatch);
  CHECK(code_of([&] { l.term("nat z z"); }) == ErrorCode::kTypeMismatch);
  CHECK(code_of([&] { l.el.formula(parse_expr("s"), {}); }) == ErrorCode::kTypeMismatch);
  CHECK(code_of([&] { l.term("forall x\\ x"); }) == ErrorCode::kIllegalOInQuantifier);
  CHECK(code_of([&] { l.term("(nat z) = tt"); }) == ErrorCode::kIllegalOInQuantifier);
  CHECK(code_of([&] { l.term("nat q"); }) == ErrorCode::kUnknownConstant);
  CHECK(code_of([&] { l.term("exists x:nope\\ tt"); }) == ErrorCode::kUnknownConstant);
}

TEST_CASE("environment names win over constants, bound names over both") {
  Loaded l(kNat);
  Var v = fresh_var("z", Type::Base("nt"));
  Env env{{"z", Term::FVar(v)}};
  Term t = l.term("nat z", env);
  CHECK(occurs(t, v.id));
  t = l.term("forall z\\ nat z", env);
  CHECK(!occurs(t, v.id));
}

TEST_CASE("loading: levels and stratification") {
  CHECK(code_of([] { Loaded l("type a\ninductive p : a -> o := x\\ p x => ff\nlevel p 5\n"); }) ==
        ErrorCode::kNotStratified);
  CHECK(code_of([] { Loaded l("type a\ninductive p : a -> o := x\\ tt\n"); }) ==
        ErrorCode::kNotStratified);
  CHECK(code_of([] { Loaded l("type a\nlevel q 1\n"); }) == ErrorCode::kUnknownPredicate);
  CHECK(code_of([] { Loaded l("type a\ninductive p : a -> a := x\\ x\n"); }) ==
        ErrorCode::kTypeMismatch);

  // Bodies may mention predicates declared later.
  Loaded fwd(
      "type a\n"
      "inductive p : a -> o := x\\ q x\n"
      "inductive q : a -> o := x\\ tt\n",
      LoadOptions{true});
  CHECK(fwd.el.table().level("q") == 1);
  CHECK(fwd.el.table().level("p") == 2);

  // Declared levels are kept; only missing ones are inferred.
  Loaded mixed(
      "type a\n"
      "inductive q : a -> o := x\\ tt\n"
      "inductive p : a -> o := x\\ q x\n"
      "level q 4\n",
      LoadOptions{true});
  CHECK(mixed.el.table().level("q") == 4);
  CHECK(mixed.el.table().level("p") == 5);
}

TEST_CASE("statements: parameters and default labels") {
  Loaded l(kNat);
  Script s = parse_script("theorem t (a b : nt) : nat a, k: nat b --> nat a := id h1");
  Statement st = l.el.statement(s.decls[0]);
  CHECK(st.params.size() == 2);
  CHECK(st.goal.labels == std::vector<std::string>{"h1", "k"});
  CHECK(st.goal.env.count("a"));
  CHECK(code_of([&] {
          l.el.statement(
              parse_script("theorem t : h: tt, h: tt --> tt := topR").decls[0]);
        }) == ErrorCode::kDuplicateName);
}

TEST_CASE("elaborated derivations check") {
  Loaded l(kNat);
  const char* good[] = {
      "theorem t : --> nat (s z) := IR; orR2; exR z; andR { eqR } { IR; orR1; eqR }",
      "theorem t (a : nt) : nat a --> nat a := init",
      "theorem t (a : nt) : nat a, nat z --> nat a := wL h2; init",
      "theorem t (a : nt) : nat a --> nat a /\\ nat a := cL h1; andR { wL h1'; init } "
      "{ wL h1; init }",
      "theorem t : ff --> nat z := botL h1",
      "theorem t : --> tt \\/ ff := orR1; topR",
      "theorem t : tt /\\ ff --> ff := andL2 h1; botL h1",
      "theorem t : tt \\/ ff --> tt := orL h1 { topR } { botL h1 }",
      "theorem t (a : nt) : nat a => ff, nat a --> ff := impL h1 { id h2 } { botL h1 }",
      "theorem t : --> forall x\\ nat x => nat x := allR; impR; id",
      "theorem t : --> forall x\\ nat x => nat x := allR y; impR k; id k",
      "theorem t : forall x\\ nat x --> nat (s z) := allL h1 (s z); id h1",
      "theorem t : exists x\\ x = s z --> nat (s z) := "
      "exL h1 v; eqL h1 { IR; orR2; exR z; andR { eqR } { IR; orR1; eqR } }",
      "theorem t (a : nt) : nat a --> nat a := cut (nat a) as c using h1 { id h1 } { id c }",
  };
  for (const char* src : good) {
    CAPTURE(src);
    Statement st;
    Deriv pi = l.prove(src, &st);
    CheckReport r = check_derivation(pi, l.el.table());
    CHECK_MESSAGE(r.ok, r.str());
    CHECK(same_sequent(pi->concl, st.goal.seq));
  }
}

TEST_CASE("a hypothesis reintroduced under its own label keeps working") {
  Loaded l(kNat);
  Deriv pi = l.prove(
      "theorem t : tt /\\ (tt /\\ nat z) --> nat z := andL2 h1; andL2 h1; id h1");
  CHECK(check_derivation(pi, l.el.table()).ok);
}

TEST_CASE("eigenvariable names: reuse of a goal variable is caught by the checker") {
  Loaded l(kNat);
  Deriv pi = l.prove("theorem t (x : nt) : nat x --> forall y\\ nat y := allR x; id h1");
  CheckReport r = check_derivation(pi, l.el.table());
  REQUIRE(!r.ok);
  CHECK(r.failures[0].kind == CheckError::kEigenvariable);
  // a name that is not free in the goal gives a fresh variable
  pi = l.prove("theorem t : --> forall y\\ nat y => nat y := allR x; impR; id");
  CHECK(check_derivation(pi, l.el.table()).ok);
}

TEST_CASE("free variables of the goal are in scope by name") {
  Loaded l(kNat);
  // After eqL the variable v is gone; w stays reachable.
  Deriv pi = l.prove(
      "theorem t : --> forall v\\ forall w\\ v = s w => nat w => nat v :="
      " allR v; allR w; impR e; impR n; eqL e"
      " { IR; orR2; exR w; andR { eqR } { id n } }");
  CHECK(check_derivation(pi, l.el.table()).ok);
}

TEST_CASE("proof errors are classified") {
  Loaded l(kNat);
  // The class comes from the builder or, failing that, from the checker.
  auto cls = [&](const std::string& src) {
    return class_of([&] {
      CheckReport r = check_derivation(l.prove(src), l.el.table());
      if (!r.ok) throw ProofError(r.failures[0].kind, {}, r.failures[0].message);
    });
  };
  CHECK(cls("theorem t : --> nat z := andR { topR } { topR }") == CheckError::kRuleShape);
  CHECK(cls("theorem t : nat z --> tt := botL h1") == CheckError::kRuleShape);
  CHECK(cls("theorem t : tt --> tt := wL nope; topR") == CheckError::kMalformed);
  CHECK(cls("theorem t : --> tt := frob") == CheckError::kMalformed);
  CHECK(cls("theorem t : --> tt := topR { topR }") == CheckError::kMalformed);
  CHECK(cls("theorem t : --> tt := topR extra") == CheckError::kMalformed);
  CHECK(cls("theorem t : --> exists x\\ nat x := exR (nat); topR") == CheckError::kWitness);
  CHECK(cls("theorem t : z = s z --> tt := eqL h1 { topR }") == CheckError::kEqLCoverage);
  CHECK(cls("theorem t : s z = s z --> tt := eqL h1") == CheckError::kEqLCoverage);
  CHECK(cls("theorem t (g : nt -> nt) : g z = z --> tt := eqL h1 { topR }") ==
        CheckError::kNotAPattern);
  CHECK(cls("theorem t : nat z --> nat (s z) := id h1") == CheckError::kInit);
  CHECK(cls("theorem t : --> tt := use nothing") == CheckError::kMalformed);
  CHECK(cls("theorem t : --> tt := IR; topR") == CheckError::kRuleShape);
  CHECK(cls("theorem t : --> tt := cut (nat z) { topR } { topR }") == CheckError::kMalformed);
  CHECK(cls("theorem t : tt --> tt := cL h1 as h1; topR") == CheckError::kMalformed);
}

TEST_CASE("IL and CIR build the invariant premises") {
  Loaded l(
      "type nt\nconst z : nt\nconst s : nt -> nt\n"
      "inductive nat : nt -> o := x\\ x = z \\/ exists y\\ x = s y /\\ nat y\n"
      "coinductive inf : nt -> o := x\\ inf (s x)\n"
      "level nat 1\nlevel inf 1\n");
  Deriv pi = l.prove(
      "theorem t (a : nt) : nat a --> tt := IL h1 (x\\ tt) y { topR } { topR }");
  REQUIRE(pi->rule == Rule::kIL);
  CHECK(pi->premises[0]->concl.hyps.size() == 1);
  CHECK(pi->premises[0]->concl.concl == Term::Top());
  CHECK(check_derivation(pi, l.el.table()).ok);

  pi = l.prove("theorem t : --> inf z := CIR (x\\ tt) y { topR } { topR }");
  REQUIRE(pi->rule == Rule::kCIR);
  CHECK(pi->eigen.size() == 1);
  // The minor premise concludes the unfolded body with tt for inf.
  CHECK(pi->premises[1]->concl.concl == Term::Top());
  CHECK(check_derivation(pi, l.el.table()).ok);
  // Unfolding inf on the left.
  pi = l.prove("theorem t : inf z --> inf (s z) := CIL h1; id h1");
  CHECK(check_derivation(pi, l.el.table()).ok);
  // Unfolding tt is refused before checking.
  CHECK(class_of([&] { l.prove("theorem t : --> inf z := CIR (x\\ tt) y { topR } { IR; topR }"); }) ==
        CheckError::kRuleShape);
}

TEST_CASE("use instantiates, reorders and weakens") {
  Loaded l(kNat);
  Script s = parse_script(
      "theorem lemma (a : nt) : nat a --> nat (s a) :="
      "  IR; orR2; exR a; andR { eqR } { id h1 }\n"
      "theorem user (b : nt) : tt, nat (f b) --> nat (s (f b)) := use lemma\n");
  Statement st = l.el.statement(s.decls[0]);
  Deriv lem = l.el.prove(st.goal, s.decls[0].proof);
  REQUIRE(check_derivation(lem, l.el.table()).ok);
  l.el.add_theorem("lemma", st, lem);
  Statement st2 = l.el.statement(s.decls[1]);
  Deriv pi = l.el.prove(st2.goal, s.decls[1].proof);
  CHECK(check_derivation(pi, l.el.table()).ok);
  CHECK(pi->concl.hyps == st2.goal.seq.hyps);
  CHECK(pi->concl.concl == st2.goal.seq.concl);
}

}  // namespace
}  // namespace linc
