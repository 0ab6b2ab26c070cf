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

// Random checked derivations over a small first-order world:
//   nt, z, s;  p : nt -> o, q : nt -> nt -> o (no clauses, level 0)
//   nat X  :=mu  X = z \/ exists y, X = s y /\ nat y     (level 1)
//   conat X :=nu X = z \/ exists y, X = s y /\ conat y   (level 1)
// Derivations are grown bottom-up from leaves by rule constructors, so
// they are correct by construction; the tests still re-check them.

#ifndef LINC_TESTS_DERIV_GEN_H_
#define LINC_TESTS_DERIV_GEN_H_

#include <map>
#include <string>
#include <vector>

#include "generators.h"
#include "linc/calculus.h"
#include "linc/defs.h"
#include "linc/transform.h"
#include "linc/unify.h"

namespace linc {
namespace testing {

class World {
 public:
  World() {
    Signature sig;
    sig.add_type("nt");
    nt = Type::Base("nt");
    o = Type::Prop();
    sig.add_const("z", nt);
    sig.add_const("s", Type::Arrow(nt, nt));
    sig.add_const("p", Type::Arrow(nt, o));
    sig.add_const("q", Type::Arrows({nt, nt}, o));
    sig.add_const("nat", Type::Arrow(nt, o));
    sig.add_const("conat", Type::Arrow(nt, o));
    table = DefTable(sig);
    table.add_clause("nat", Flavor::kInductive, body("nat"));
    table.add_clause("conat", Flavor::kCoinductive, body("conat"));
    table.set_level("p", 0);
    table.set_level("q", 0);
    table.set_level("nat", 1);
    table.set_level("conat", 1);
    for (int i = 0; i < 4; ++i)
      xs.push_back(fresh_var("X" + std::to_string(i), nt));
  }

  Term z() const { return table.sig().constant("z"); }
  Term s(const Term& t) const {
    return Term::App(table.sig().constant("s"), {t});
  }
  Term pred(const std::string& name, std::vector<Term> args) const {
    return Term::App(table.sig().constant(name), std::move(args));
  }
  Term var(int i) const { return Term::FVar(xs[i]); }

  // x\ x = z \/ exists y, x = s y /\ P y
  Term body(const std::string& p) const {
    Term x = Term::BVar(0);
    Term inner = Term::Exists(
        nt, "y",
        Term::And(Term::Eq(nt, Term::BVar(1), s(Term::BVar(0))),
                  Term::App(Term::Const(p, Type::Arrow(nt, o)),
                            {Term::BVar(0)})));
    return Term::Lam(nt, "x", Term::Or(Term::Eq(nt, x, z()), inner));
  }

  Type nt, o;
  DefTable table;
  std::vector<Var> xs;
};

class DerivGen {
 public:
  DerivGen(const World* w, Rng* rng) : w_(w), rng_(rng) {}

  // ----- terms and formulas

  Term term(int depth) {
    int k = depth <= 0 ? rng_->below(2) : rng_->below(3);
    if (k == 0) return w_->z();
    if (k == 1) return extra_var_ ? Term::FVar(*extra_var_)
                                  : w_->var(rng_->below(int(w_->xs.size())));
    return w_->s(term(depth - 1));
  }

  Term atom() {
    switch (rng_->below(4)) {
      case 0: return w_->pred("p", {term(1)});
      case 1: return w_->pred("q", {term(1), term(1)});
      case 2: return w_->pred("nat", {term(1)});
      default: return w_->pred("conat", {term(1)});
    }
  }

  Term formula(int depth) {
    if (depth <= 0) {
      switch (rng_->below(5)) {
        case 0: return Term::Eq(w_->nt, term(1), term(1));
        case 1: return rng_->coin() ? Term::Top() : Term::Bot();
        default: return atom();
      }
    }
    switch (rng_->below(7)) {
      case 0: return Term::And(formula(depth - 1), formula(depth - 1));
      case 1: return Term::Or(formula(depth - 1), formula(depth - 1));
      case 2: return Term::Imp(formula(depth - 1), formula(depth - 1));
      case 3:
      case 4: {
        Var y = fresh_var("y", w_->nt);
        auto saved = extra_var_;
        extra_var_ = y;
        Term b = formula(depth - 1);
        extra_var_ = saved;
        Term lam = abstract({y}, b);
        return normalize(rng_->coin()
                             ? Term::App(Term::Logic(LogicOp::kForall, w_->nt),
                                         {lam})
                             : Term::App(Term::Logic(LogicOp::kExists, w_->nt),
                                         {lam}));
      }
      default: return formula(0);
    }
  }

  Term nformula(int depth) { return normalize(formula(depth)); }

  // ----- derivations

  Deriv gen(int depth) {
    Deriv d = depth <= 0 || rng_->coin(1, 5) ? leaf() : step(depth);
    remember(d);
    return d;
  }

  // A derivation ending in mc whose cut formulas are hypotheses of a
  // random major premise; left premises come from the pool of earlier
  // derivations when one fits, otherwise they are identities.
  Deriv redex(int depth) {
    Deriv major = gen(depth);
    const auto& hs = major->concl.hyps;
    if (hs.empty()) major = weaken(major, {nformula(1)});
    std::vector<int> pos;
    for (int i = 0; i < int(major->concl.hyps.size()); ++i)
      if (rng_->coin(2, 3)) pos.push_back(i);
    if (pos.empty()) pos.push_back(rng_->below(int(major->concl.hyps.size())));
    std::shuffle(pos.begin(), pos.end(), rng_->engine());
    DerivNode n;
    n.rule = Rule::kMc;
    n.cut_pos = pos;
    std::vector<Term> hyps;
    for (int k : pos) {
      Deriv l = provider(major->concl.hyps[k], depth);
      n.premises.push_back(l);
      for (const Term& h : l->concl.hyps) hyps.push_back(h);
    }
    for (int i = 0; i < int(major->concl.hyps.size()); ++i)
      if (std::find(pos.begin(), pos.end(), i) == pos.end())
        hyps.push_back(major->concl.hyps[i]);
    n.premises.push_back(major);
    n.concl = {hyps, major->concl.concl};
    return make_deriv(std::move(n));
  }

  // Some derivation of --> f's context-free conclusion f, preferring
  // non-trivial ones from the pool.
  Deriv provider(const Term& f, int depth) {
    auto it = pool_.find(key(f));
    if (it != pool_.end() && rng_->coin(3, 4)) {
      std::vector<Deriv> fits;
      for (const Deriv& d : it->second)
        if (d->concl.concl == f) fits.push_back(d);
      if (!fits.empty()) return rng_->pick(fits);
    }
    if (depth > 0 && rng_->coin()) {
      // Try a few random derivations.
      for (int i = 0; i < 8; ++i) {
        Deriv d = gen(depth - 1);
        if (d->concl.concl == f) return d;
      }
    }
    return identity_derivation(f);
  }

  // Invariants used by IL / CIR and by the unfolding tests.
  Invariant nat_self() {
    Var x = fresh_var("x", w_->nt);
    Term xt = Term::FVar(x);
    Term b = unfold_body("nat", {xt}, w_->table.sig().constant("nat"),
                         w_->table);
    DerivNode ir;
    ir.rule = Rule::kIR;
    ir.concl = {{b}, w_->pred("nat", {xt})};
    ir.premises = {identity_derivation(b)};
    return {normalize(w_->table.sig().constant("nat")), {x},
            make_deriv(std::move(ir))};
  }

  Invariant nat_top() {
    Var x = fresh_var("x", w_->nt);
    Term s = normalize(Term::Lam(w_->nt, "x", Term::Top()));
    Term b = unfold_body("nat", {Term::FVar(x)}, s, w_->table);
    DerivNode t;
    t.rule = Rule::kTopR;
    t.concl = {{b}, Term::Top()};
    return {s, {x}, make_deriv(std::move(t))};
  }

  Invariant conat_self() {
    Var x = fresh_var("x", w_->nt);
    Term xt = Term::FVar(x);
    Term c = w_->pred("conat", {xt});
    Term b = unfold_body("conat", {xt}, w_->table.sig().constant("conat"),
                         w_->table);
    DerivNode cil;
    cil.rule = Rule::kCIL;
    cil.principal = 0;
    cil.concl = {{c}, b};
    cil.premises = {identity_derivation(b)};
    return {normalize(w_->table.sig().constant("conat")), {x},
            make_deriv(std::move(cil))};
  }

  // S = x\ x = z:   x = z --> x = z \/ exists y, x = s y /\ S y
  Invariant conat_zero() {
    Var x = fresh_var("x", w_->nt);
    Term xt = Term::FVar(x);
    Term s = normalize(Term::Lam(w_->nt, "x",
                                 Term::Eq(w_->nt, Term::BVar(0), w_->z())));
    Term b = unfold_body("conat", {xt}, s, w_->table);
    Term eq = normalize(Term::Eq(w_->nt, xt, w_->z()));
    auto us = csu(eq.args()[0], eq.args()[1]);
    Term bz = subst_apply(b, us[0]);
    DerivNode r;
    r.rule = Rule::kEqR;
    r.concl = {{}, bz.args()[0]};
    DerivNode o1;
    o1.rule = Rule::kOrR1;
    o1.concl = {{}, bz};
    o1.premises = {make_deriv(std::move(r))};
    DerivNode e;
    e.rule = Rule::kEqL;
    e.principal = 0;
    e.concl = {{eq}, b};
    e.unifiers = us;
    e.premises = {make_deriv(std::move(o1))};
    return {s, {x}, make_deriv(std::move(e))};
  }

 private:
  static std::string key(const Term& f) { return to_string(f); }

  void remember(const Deriv& d) {
    auto& v = pool_[key(d->concl.concl)];
    if (v.size() < 6) v.push_back(d);
  }

  static Deriv mk(Rule r, std::vector<Term> hyps, Term concl,
                  std::vector<Deriv> prems, int principal = -1) {
    DerivNode n;
    n.rule = r;
    n.concl = {std::move(hyps), std::move(concl)};
    n.premises = std::move(prems);
    n.principal = principal;
    return make_deriv(std::move(n));
  }

  std::vector<Term> small_ctx() {
    std::vector<Term> h;
    int k = rng_->below(3);
    for (int i = 0; i < k; ++i) h.push_back(nformula(1));
    return h;
  }

  Deriv leaf() {
    switch (rng_->below(7)) {
      case 0: {
        Term a = normalize(atom());
        return mk(Rule::kInit, {a}, a, {});
      }
      case 1: return mk(Rule::kTopR, small_ctx(), Term::Top(), {});
      case 2: {
        Term t = normalize(term(2));
        return mk(Rule::kEqR, small_ctx(), Term::Eq(w_->nt, t, t), {});
      }
      case 3: {
        auto h = small_ctx();
        h.push_back(Term::Bot());
        return mk(Rule::kBotL, h, nformula(1), {}, int(h.size()) - 1);
      }
      case 4: {
        auto h = small_ctx();
        h.push_back(
            normalize(Term::Eq(w_->nt, w_->z(), w_->s(term(1)))));
        return mk(Rule::kEqL, h, nformula(1), {}, int(h.size()) - 1);
      }
      case 5: {
        // IR over Id of an unfolded nat body
        Term t = normalize(term(1));
        Term a = w_->pred("nat", {t});
        Term b = unfold_body("nat", {t}, w_->table.sig().constant("nat"),
                             w_->table);
        return mk(Rule::kIR, {b}, a, {identity_derivation(b)});
      }
      default: return identity_derivation(nformula(1));
    }
  }

  static std::vector<Term> concat(std::vector<Term> a,
                                  const std::vector<Term>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  }

  std::optional<Var> pick_fv(const Term& f) {
    auto fv = fvars(f);
    if (fv.empty()) return std::nullopt;
    std::vector<Var> vs;
    for (const auto& [id, v] : fv) vs.push_back(v);
    return rng_->pick(vs);
  }

  Term quant(LogicOp op, const Var& x, const Term& b) {
    return normalize(
        Term::App(Term::Logic(op, x.type), {abstract({x}, b)}));
  }

  Deriv step(int depth) {
    Deriv a = gen(depth - 1);
    const auto& H = a->concl.hyps;
    const Term& C = a->concl.concl;
    int nh = int(H.size());
    switch (rng_->below(20)) {
      case 0: {  // andR
        Deriv b = gen(depth - 1);
        auto hyps = concat(H, b->concl.hyps);
        Deriv a2 = weaken(a, b->concl.hyps);
        Deriv b2 = reorder_conclusion(weaken(b, H), hyps);
        return mk(Rule::kAndR, hyps, Term::And(C, b->concl.concl), {a2, b2});
      }
      case 1: {
        Term o = nformula(1);
        bool left = rng_->coin();
        return mk(left ? Rule::kOrR1 : Rule::kOrR2, H,
                  left ? Term::Or(C, o) : Term::Or(o, C), {a});
      }
      case 2: {  // impR
        if (nh == 0) {
          Term f = nformula(1);
          a = weaken(a, {f});
          nh = 1;
        }
        const auto& H2 = a->concl.hyps;
        int k = rng_->below(int(H2.size()));
        std::vector<Term> rest;
        for (int i = 0; i < int(H2.size()); ++i)
          if (i != k) rest.push_back(H2[i]);
        return mk(Rule::kImpR, rest, Term::Imp(H2[k], a->concl.concl), {a});
      }
      case 3: {  // allR on a variable free only in the conclusion
        std::map<uint64_t, Var> hv;
        for (const Term& h : H) collect_fvars(h, &hv);
        std::vector<Var> cands;
        for (const auto& [id, v] : fvars(C))
          if (!hv.count(id)) cands.push_back(v);
        Var y = cands.empty() ? fresh_var("y", w_->nt) : rng_->pick(cands);
        DerivNode n;
        n.rule = Rule::kAllR;
        n.concl = {H, quant(LogicOp::kForall, y, C)};
        n.eigen = {y};
        n.premises = {a};
        return make_deriv(std::move(n));
      }
      case 4: {  // exR abstracting a variable of the conclusion
        auto x = pick_fv(C);
        Var y = x ? *x : fresh_var("y", w_->nt);
        DerivNode n;
        n.rule = Rule::kExR;
        n.concl = {H, quant(LogicOp::kExists, y, C)};
        n.term = x ? normalize(Term::FVar(*x)) : w_->z();
        n.premises = {a};
        return make_deriv(std::move(n));
      }
      case 5:
      case 6: {  // andL
        if (nh == 0) break;
        int k = rng_->below(nh);
        Term o = nformula(1);
        bool first = rng_->coin();
        auto hyps = H;
        hyps[k] = first ? Term::And(H[k], o) : Term::And(o, H[k]);
        return mk(first ? Rule::kAndL1 : Rule::kAndL2, hyps, C, {a}, k);
      }
      case 7: {  // orL
        if (nh == 0) break;
        int k = rng_->below(nh);
        auto hyps = H;
        if (rng_->coin()) {
          hyps[k] = Term::Or(H[k], H[k]);
          return mk(Rule::kOrL, hyps, C, {a, a}, k);
        }
        hyps[k] = Term::Or(H[k], Term::Bot());
        auto bh = H;
        bh[k] = Term::Bot();
        Deriv bot = mk(Rule::kBotL, bh, C, {}, k);
        return mk(Rule::kOrL, hyps, C, {a, bot}, k);
      }
      case 8: {  // impL
        Deriv b = gen(depth - 1);
        if (nh == 0) break;
        int k = rng_->below(nh);
        std::vector<Term> rest;
        for (int i = 0; i < nh; ++i)
          if (i != k) rest.push_back(H[i]);
        auto ctx = concat(rest, b->concl.hyps);
        Deriv left = reorder_conclusion(weaken(b, rest), ctx);
        Deriv right = weaken(a, b->concl.hyps);
        auto hyps = concat(ctx, {Term::Imp(b->concl.concl, H[k])});
        return mk(Rule::kImpL, hyps, C, {left, right}, int(hyps.size()) - 1);
      }
      case 9: {  // allL
        if (nh == 0) break;
        int k = rng_->below(nh);
        auto x = pick_fv(H[k]);
        Var y = x ? *x : fresh_var("y", w_->nt);
        auto hyps = H;
        hyps[k] = quant(LogicOp::kForall, y, H[k]);
        DerivNode n;
        n.rule = Rule::kAllL;
        n.principal = k;
        n.concl = {hyps, C};
        n.term = x ? normalize(Term::FVar(*x)) : normalize(term(1));
        n.premises = {a};
        return make_deriv(std::move(n));
      }
      case 10: {  // exL on a variable private to one hypothesis
        if (nh == 0) break;
        int k = rng_->below(nh);
        std::map<uint64_t, Var> other;
        for (int i = 0; i < nh; ++i)
          if (i != k) collect_fvars(H[i], &other);
        collect_fvars(C, &other);
        std::vector<Var> cands;
        for (const auto& [id, v] : fvars(H[k]))
          if (!other.count(id)) cands.push_back(v);
        Var y = cands.empty() ? fresh_var("y", w_->nt) : rng_->pick(cands);
        auto hyps = H;
        hyps[k] = quant(LogicOp::kExists, y, H[k]);
        DerivNode n;
        n.rule = Rule::kExL;
        n.principal = k;
        n.concl = {hyps, C};
        n.eigen = {y};
        n.premises = {a};
        return make_deriv(std::move(n));
      }
      case 11: {  // cL on a duplicated hypothesis
        for (int i = 0; i < nh; ++i)
          for (int j = i + 1; j < nh; ++j)
            if (H[i] == H[j]) {
              auto hyps = H;
              hyps.erase(hyps.begin() + j);
              return mk(Rule::kCL, hyps, C, {a}, i);
            }
        if (nh == 0) break;
        {
          int k = rng_->below(nh);
          Deriv w = weaken(a, {H[k]});
          return mk(Rule::kCL, H, C, {w}, k);
        }
      }
      case 12: return weaken(a, {nformula(1)});
      case 13:
      case 14: {  // eqL with a unifiable equation
        Term s, t;
        auto x = pick_fv(C);
        if (x && rng_->coin()) {
          s = normalize(Term::FVar(*x));
          t = normalize(term(1));
        } else {
          s = normalize(term(2));
          t = normalize(term(2));
        }
        Term eq = normalize(Term::Eq(w_->nt, s, t));
        auto us = csu(s, t);
        auto hyps = concat(H, {eq});
        DerivNode n;
        n.rule = Rule::kEqL;
        n.principal = int(hyps.size()) - 1;
        n.concl = {hyps, C};
        n.unifiers = us;
        if (!us.empty()) n.premises = {deriv_subst(a, us[0])};
        return make_deriv(std::move(n));
      }
      case 15: {  // IL on nat
        bool self = rng_->coin();
        Invariant inv = self ? nat_self() : nat_top();
        int k = -1;
        for (int i = 0; i < nh && k < 0; ++i) {
          if (self ? is_pred(H[i], "nat") : H[i] == Term::Top()) k = i;
        }
        Term t = normalize(term(1));
        Deriv major = a;
        if (k < 0) {
          major = weaken(a, {beta_apply(inv.s, {t})});
          k = int(major->concl.hyps.size()) - 1;
        } else if (self) {
          t = H[k].args()[0];
        }
        auto hyps = major->concl.hyps;
        hyps[k] = w_->pred("nat", {t});
        DerivNode n;
        n.rule = Rule::kIL;
        n.principal = k;
        n.concl = {hyps, C};
        n.term = inv.s;
        n.eigen = inv.xs;
        n.premises = {inv.pi, major};
        return make_deriv(std::move(n));
      }
      case 16: {  // CIR on conat
        if (is_pred(C, "conat")) {
          Invariant inv = conat_self();
          DerivNode n;
          n.rule = Rule::kCIR;
          n.concl = {H, C};
          n.term = inv.s;
          n.eigen = inv.xs;
          n.premises = {a, inv.pi};
          return make_deriv(std::move(n));
        }
        if (C.spine_head().kind() == Term::Kind::kLogic &&
            C.spine_head().op() == LogicOp::kEq && C.args()[1] == w_->z()) {
          Invariant inv = conat_zero();
          DerivNode n;
          n.rule = Rule::kCIR;
          n.concl = {H, w_->pred("conat", {C.args()[0]})};
          n.term = inv.s;
          n.eigen = inv.xs;
          n.premises = {a, inv.pi};
          return make_deriv(std::move(n));
        }
        break;
      }
      case 17: {  // CIL on a hypothesis of unfolded form
        Term t = normalize(term(1));
        Term b = unfold_body("conat", {t},
                             w_->table.sig().constant("conat"), w_->table);
        Deriv major = weaken(a, {b});
        auto hyps = major->concl.hyps;
        hyps.back() = w_->pred("conat", {t});
        return mk(Rule::kCIL, hyps, C, {major}, int(hyps.size()) - 1);
      }
      case 18: {  // IR when the conclusion fits a nat body
        if (C.spine_head().kind() == Term::Kind::kLogic &&
            C.spine_head().op() == LogicOp::kEq && C.args()[1] == w_->z()) {
          Term t = C.args()[0];
          Term b = unfold_body("nat", {t}, w_->table.sig().constant("nat"),
                               w_->table);
          Deriv orr = mk(Rule::kOrR1, H, b, {a});
          return mk(Rule::kIR, H, w_->pred("nat", {t}), {orr});
        }
        if (is_pred(C, "nat")) {
          Term u = C.args()[0];
          Term st = normalize(w_->s(u));
          Term b = unfold_body("nat", {st}, w_->table.sig().constant("nat"),
                               w_->table);
          Term ex = b.args()[1];
          Deriv eqr = mk(Rule::kEqR, H, Term::Eq(w_->nt, st, st), {});
          Deriv andr = mk(Rule::kAndR, H, beta_apply(ex.args()[0], {u}),
                          {eqr, a});
          DerivNode e;
          e.rule = Rule::kExR;
          e.concl = {H, ex};
          e.term = u;
          e.premises = {andr};
          Deriv orr = mk(Rule::kOrR2, H, b, {make_deriv(std::move(e))});
          return mk(Rule::kIR, H, w_->pred("nat", {st}), {orr});
        }
        break;
      }
      default: {  // mc
        if (nh == 0) break;
        int k = rng_->below(nh);
        Deriv l = provider(H[k], depth - 1);
        std::vector<Term> hyps = l->concl.hyps;
        for (int i = 0; i < nh; ++i)
          if (i != k) hyps.push_back(H[i]);
        DerivNode n;
        n.rule = Rule::kMc;
        n.cut_pos = {k};
        n.concl = {hyps, C};
        n.premises = {l, a};
        return make_deriv(std::move(n));
      }
    }
    return a;
  }

  static bool is_pred(const Term& f, const char* name) {
    return f.spine_head().is_const() && f.spine_head().name() == name;
  }

  const World* w_;
  Rng* rng_;
  std::optional<Var> extra_var_;
  std::map<std::string, std::vector<Deriv>> pool_;
};

}  // namespace testing
}  // namespace linc

#endif  // LINC_TESTS_DERIV_GEN_H_
