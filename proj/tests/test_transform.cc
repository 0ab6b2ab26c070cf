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

#include "linc/transform.h"

#include "deriv_gen.h"
#include "doctest.h"
#include "props.h"

namespace linc {
namespace {

using testing::DerivGen;
using testing::Rng;
using testing::World;

TEST_CASE("generated derivations check") {
  World w;
  Rng rng(1);
  DerivGen g(&w, &rng);
  std::map<Rule, int> seen;
  for (int i = 0; i < 1500; ++i) {
    Deriv d = g.gen(5);
    auto rep = check_derivation(d, w.table);
    REQUIRE_MESSAGE(rep.ok, rep.str());
    for (int r = 0; r <= int(Rule::kCIR); ++r)
      if (count_rule(d, Rule(r))) seen[Rule(r)]++;
  }
  for (int r = 0; r <= int(Rule::kCIR); ++r) {
    if (Rule(r) == Rule::kIR || Rule(r) == Rule::kCIL) continue;
    CHECK_MESSAGE(seen[Rule(r)] > 0, rule_name(Rule(r)));
  }
}

TEST_CASE("measures") {
  World w;
  Term a = w.pred("p", {w.z()});
  Deriv id = identity_derivation(a);
  CHECK(measure(id) == 1);
  CHECK(ind_measure(id) == 0);
  // premises of measure 1 and 3 give 4
  DerivNode top;
  top.rule = Rule::kTopR;
  top.concl = {{}, Term::Top()};
  Deriv t = make_deriv(top);
  Deriv t3 = weaken(t, {a, a});
  CHECK(measure(t3) == 3);
  DerivNode n;
  n.rule = Rule::kAndR;
  n.concl = {{a, a}, Term::And(Term::Top(), Term::Top())};
  n.premises = {weaken(t, {a, a}), t3};
  CHECK(measure(make_deriv(n)) == 4);
}

TEST_CASE("identity derivations") {
  World w;
  Term a = w.pred("p", {w.var(0)});
  Deriv id = identity_derivation(a);
  CHECK(id->rule == Rule::kInit);
  CHECK(deriv_size(id) == 1);

  Term b = w.pred("nat", {w.z()});
  Deriv imp = identity_derivation(Term::Imp(a, b));
  CHECK(imp->rule == Rule::kImpR);
  CHECK(imp->premises[0]->rule == Rule::kImpL);
  CHECK(check_derivation(imp, w.table).ok);

  Rng rng(2);
  DerivGen g(&w, &rng);
  for (int i = 0; i < 2000; ++i) {
    Term c = g.nformula(3);
    Deriv d = identity_derivation(c);
    auto rep = check_derivation(d, w.table);
    REQUIRE_MESSAGE(rep.ok, to_string(c) << "\n" << rep.str());
    CHECK(ind_measure(d) == 0);
    CHECK(is_cut_free(d));
  }
}

TEST_CASE("weakening and contraction helpers") {
  World w;
  Term a = w.pred("p", {w.z()});
  Term b = w.pred("q", {w.z(), w.z()});
  Deriv d = weaken(identity_derivation(a), {b, a, b});
  CHECK(d->concl.hyps.size() == 4);
  CHECK(check_derivation(d, w.table).ok);
  Deriv c = contract_to(d, {b, a});
  CHECK(c->concl.hyps == std::vector<Term>{b, a});
  CHECK(check_derivation(c, w.table).ok);
}

TEST_CASE("substitution into derivations") {
  World w;
  Rng rng(3);
  DerivGen g(&w, &rng);
  for (int i = 0; i < 1500; ++i) {
    Deriv d = g.gen(5);
    CHECK(deriv_subst(d, Subst()) == d);
    Subst th = testing::random_subst(w, g, rng);
    Deriv dt = deriv_subst(d, th);
    auto rep = check_derivation(dt, w.table);
    REQUIRE_MESSAGE(rep.ok, rep.str());
    Sequent want;
    for (const Term& h : d->concl.hyps) want.hyps.push_back(subst_apply(h, th));
    want.concl = subst_apply(d->concl.concl, th);
    CHECK(dt->concl.hyps == want.hyps);
    CHECK(dt->concl.concl == want.concl);
    CHECK(measure(dt) <= measure(d));
    CHECK(ind_measure(dt) <= ind_measure(d));
  }
}

TEST_CASE("property: (Pi theta) rho == Pi (theta o rho)") {
  World w;
  Rng rng(4);
  DerivGen g(&w, &rng);
  for (int i = 0; i < 1500; ++i) {
    Deriv d = g.gen(5);
    Subst th = testing::random_subst(w, g, rng);
    Subst rh = testing::random_subst(w, g, rng);
    Deriv lhs = deriv_subst(deriv_subst(d, th), rh);
    Deriv rhs = deriv_subst(d, subst_compose(th, rh));
    CHECK(deriv_alpha_eq(lhs, rhs));
  }
}

TEST_CASE("eqL re-indexing") {
  World w;
  // X0 = s X1, p X0 --> p (s X1)   by eqL {X0 := s X1} and init
  Term x0 = w.var(0), x1 = w.var(1);
  Term eq = normalize(Term::Eq(w.nt, x0, w.s(x1)));
  auto us = csu(eq.args()[0], eq.args()[1]);
  REQUIRE(us.size() == 1);
  Term goal = w.pred("p", {w.s(x1)});
  DerivNode n;
  n.rule = Rule::kEqL;
  n.principal = 0;
  n.concl = {{eq, w.pred("p", {x0})}, goal};
  n.unifiers = us;
  n.premises = {identity_derivation(goal)};
  Deriv d = make_deriv(n);
  REQUIRE(check_derivation(d, w.table).ok);

  // theta = {X1 := z}: the equation becomes X0 = s z
  Deriv d1 = deriv_subst(d, Subst::single(w.xs[1], w.z()));
  CHECK(check_derivation(d1, w.table).ok);
  CHECK(d1->premises.size() == 1);
  // theta = {X0 := z}: the equation z = s X1 has no unifier
  Deriv d2 = deriv_subst(d, Subst::single(w.xs[0], w.z()));
  CHECK(check_derivation(d2, w.table).ok);
  CHECK(d2->premises.empty());
  CHECK(measure(d2) < measure(d));
  // theta = {X0 := s X2}: csu now binds X2 or X1
  Deriv d3 = deriv_subst(d, Subst::single(w.xs[0], w.s(w.var(2))));
  CHECK(check_derivation(d3, w.table).ok);
}

TEST_CASE("inductive unfolding") {
  World w;
  Rng rng(5);
  DerivGen g(&w, &rng);

  SUBCASE("vacuous") {
    Term a = w.pred("p", {w.z()});
    Deriv d = identity_derivation(a);
    CHECK(inductive_unfold("nat", a, d, g.nat_top(), w.table) == d);
  }
  SUBCASE("init becomes IL over the invariant and Id") {
    Term a = w.pred("nat", {w.var(0)});
    Deriv d = identity_derivation(a);
    Invariant inv = g.nat_top();
    Deriv u = inductive_unfold("nat", a, d, inv, w.table);
    CHECK(u->rule == Rule::kIL);
    REQUIRE(u->premises.size() == 2);
    CHECK(u->concl.concl == Term::Top());
    CHECK(u->premises[1]->rule == Rule::kTopR);
    auto rep = check_derivation(u, w.table);
    CHECK_MESSAGE(rep.ok, rep.str());
  }
  SUBCASE("IR becomes mc against the instantiated invariant") {
    Term t = w.z();
    Term a = w.pred("nat", {t});
    Term b = unfold_body("nat", {t}, w.table.sig().constant("nat"), w.table);
    DerivNode eqr;
    eqr.rule = Rule::kEqR;
    eqr.concl = {{}, b.args()[0]};
    DerivNode orr;
    orr.rule = Rule::kOrR1;
    orr.concl = {{}, b};
    orr.premises = {make_deriv(eqr)};
    DerivNode ir;
    ir.rule = Rule::kIR;
    ir.concl = {{}, a};
    ir.premises = {make_deriv(orr)};
    Deriv d = make_deriv(ir);
    REQUIRE(check_derivation(d, w.table).ok);
    Deriv u = inductive_unfold("nat", a, d, g.nat_top(), w.table);
    CHECK(u->rule == Rule::kMc);
    CHECK(u->concl.concl == Term::Top());
    CHECK(check_derivation(u, w.table).ok);
  }
  SUBCASE("domination is re-checked") {
    Term a = normalize(Term::Imp(w.pred("nat", {w.z()}), Term::Bot()));
    Term c = normalize(
        Term::Imp(Term::Imp(w.pred("p", {w.z()}), w.pred("nat", {w.z()})),
                  Term::Bot()));
    Deriv d = identity_derivation(c);
    try {
      inductive_unfold("nat", c, d, g.nat_top(), w.table);
      FAIL("expected DominationViolation");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kDominationViolation);
    }
    CHECK_THROWS_AS(inductive_unfold("conat", a, identity_derivation(a),
                                     g.nat_top(), w.table),
                    Error);
  }
}

TEST_CASE("property: inductive unfolding commutes with substitution") {
  World w;
  Rng rng(6);
  DerivGen g(&w, &rng);
  LevelMap lm = w.table.level_map();
  int tried = 0;
  for (int i = 0; i < 6000 && tried < 800; ++i) {
    Deriv d = g.gen(4);
    const Term& c = d->concl.concl;
    if (!mentions_const(c, "nat") || !dominated_by(c, "nat", lm)) continue;
    ++tried;
    Invariant inv = rng.coin() ? g.nat_top() : g.nat_self();
    Deriv u = inductive_unfold("nat", c, d, inv, w.table);
    auto rep = check_derivation(u, w.table);
    REQUIRE_MESSAGE(rep.ok, rep.str());
    CHECK(u->concl.hyps == d->concl.hyps);
    CHECK(u->concl.concl == replace_const(c, "nat", inv.s));
    // Also covers variables of C that vanish from C[S/p] and survive
    // only inside the unfolded derivation.
    Subst th = testing::random_subst(w, g, rng);
    Deriv lhs = deriv_subst(u, th);
    Deriv dt = deriv_subst(d, th);
    Deriv rhs = inductive_unfold("nat", dt->concl.concl, dt, inv, w.table);
    CHECK_MESSAGE(deriv_alpha_eq(lhs, rhs), deriv_str(d) << "theta " << th.str()
                  << "\n" << deriv_str(lhs) << "----\n" << deriv_str(rhs));
  }
  CHECK(tried > 100);
}

TEST_CASE("co-inductive unfolding") {
  World w;
  Rng rng(7);
  DerivGen g(&w, &rng);
  SUBCASE("p t becomes a CIR node") {
    Invariant inv = g.conat_zero();
    Term t = w.var(0);
    Term c = w.pred("conat", {t});
    Term sc = normalize(Term::Eq(w.nt, t, w.z()));
    Deriv d = identity_derivation(sc);
    Deriv u = coinductive_unfold("conat", c, d, inv, w.table);
    CHECK(u->rule == Rule::kCIR);
    CHECK(u->premises[0] == d);
    CHECK(u->concl.concl == c);
    auto rep = check_derivation(u, w.table);
    CHECK_MESSAGE(rep.ok, rep.str());
  }
  SUBCASE("vacuous") {
    Term a = w.pred("p", {w.z()});
    Deriv d = identity_derivation(a);
    CHECK(coinductive_unfold("conat", a, d, g.conat_zero(), w.table) == d);
  }
}

TEST_CASE("property: co-inductive unfolding commutes with substitution") {
  World w;
  Rng rng(8);
  DerivGen g(&w, &rng);
  LevelMap lm = w.table.level_map();
  int tried = 0;
  for (int i = 0; i < 8000 && tried < 800; ++i) {
    Deriv d = g.gen(4);
    const Term& sc = d->concl.concl;
    if (mentions_const(sc, "conat")) continue;
    // Replace some positive  u = z  by  conat u.
    Term c = testing::coabstract(w, sc, rng);
    if (!mentions_const(c, "conat") || !dominated_by(c, "conat", lm)) continue;
    ++tried;
    Invariant inv = g.conat_zero();
    REQUIRE(replace_const(c, "conat", inv.s) == sc);
    Deriv u = coinductive_unfold("conat", c, d, inv, w.table);
    auto rep = check_derivation(u, w.table);
    REQUIRE_MESSAGE(rep.ok, rep.str());
    CHECK(u->concl.hyps == d->concl.hyps);
    CHECK(u->concl.concl == c);
    Subst th = testing::random_subst(w, g, rng);
    Deriv lhs = deriv_subst(u, th);
    Deriv dt = deriv_subst(d, th);
    Deriv rhs =
        coinductive_unfold("conat", subst_apply(c, th), dt, inv, w.table);
    CHECK(deriv_alpha_eq(lhs, rhs));
  }
  CHECK(tried > 100);
}

}  // namespace
}  // namespace linc
