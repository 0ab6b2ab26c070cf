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

#include <algorithm>
#include <set>

#include "linc/unify.h"

namespace linc {

namespace {

Term fv_term(const Var& v) { return normalize(Term::FVar(v)); }

std::vector<Term> fv_terms(const std::vector<Var>& vs) {
  std::vector<Term> out;
  for (const Var& v : vs) out.push_back(fv_term(v));
  return out;
}

std::vector<Var> fresh_like(const std::vector<Type>& types, const char* hint) {
  std::vector<Var> out;
  for (const Type& t : types) out.push_back(fresh_var(hint, t));
  return out;
}

Sequent subst_sequent(const Sequent& s, const Subst& th) {
  Sequent out;
  for (const Term& h : s.hyps) out.hyps.push_back(subst_apply(h, th));
  out.concl = subst_apply(s.concl, th);
  return out;
}

[[noreturn]] void invariant_broken(const std::string& msg) {
  throw Error(ErrorCode::kInternalInvariantViolation, msg);
}

// The premise of an eqL node after instantiating its conclusion by
// theta. `rho` is the old unifier and `rho2` the new one; we look for
// delta with (x rho) delta = (x theta) rho2 on the old conclusion's
// variables and use premise[delta].
// One deriv_subst call. Generated and reduced derivations share
// subtrees, so both the variable sets and the results are memoised per
// node; without that a walk over a DAG is exponential in its depth.
class Substituter {
 public:
  Deriv run(const Deriv& d, const Subst& theta);

 private:
  using Key = std::pair<const DerivNode*,
                        std::vector<std::pair<uint64_t, Term>>>;

  const std::set<uint64_t>& vars_of(const Deriv& d);
  Deriv reindex_eq_premise(const DerivNode& old, const Subst& theta,
                           const Subst& rho2);

  std::map<const DerivNode*, std::set<uint64_t>> vars_;
  std::map<Key, Deriv> memo_;
};

Subst without(const Subst& th, const std::map<uint64_t, Var>& vars) {
  Subst out;
  for (const auto& [id, e] : th.entries())
    if (!vars.count(id)) out.bind(e.first, e.second);
  return out;
}

const std::set<uint64_t>& Substituter::vars_of(const Deriv& d) {
  auto it = vars_.find(d.get());
  if (it != vars_.end()) return it->second;
  std::map<uint64_t, Var> acc = sequent_fvars(d->concl);
  if (d->term) collect_fvars(*d->term, &acc);
  for (const Subst& u : d->unifiers)
    for (const auto& [id, e] : u.entries()) {
      acc[id] = e.first;
      collect_fvars(e.second, &acc);
    }
  std::set<uint64_t> out;
  for (const auto& [id, v] : acc) out.insert(id);
  for (const Var& y : d->eigen) out.insert(y.id);
  for (const Deriv& p : d->premises) {
    const auto& sub = vars_of(p);
    out.insert(sub.begin(), sub.end());
  }
  return vars_.emplace(d.get(), std::move(out)).first->second;
}

// theta reaches every sequent of the tree, not only the end sequent:
// a variable free at the root may occur only internally further up
// (in a cut formula, say) and is instantiated there too. Eigenvariables
// are renamed only when theta would capture or bind them. Subtrees that
// theta does not touch come back as the same pointer.
Deriv Substituter::run(const Deriv& d, const Subst& theta_in) {
  const auto& vs = vars_of(d);
  Subst theta;
  Key key{d.get(), {}};
  for (const auto& [id, e] : theta_in.entries())
    if (vs.count(id)) {
      theta.bind(e.first, e.second);
      key.second.push_back({id, e.second});
    }
  if (theta.empty()) return d;
  auto hit = memo_.find(key);
  if (hit != memo_.end()) return hit->second;

  DerivNode n = *d;
  n.concl = subst_sequent(d->concl, theta);
  bool changed = n.concl.hyps != d->concl.hyps ||
                 !(n.concl.concl == d->concl.concl);
  Deriv out;
  if (d->rule == Rule::kEqL) {
    const Deriv* prem = d->premises.empty() ? nullptr : &d->premises[0];
    if (!changed) {
      // Keep the unifier; theta only touches the premise's interior.
      out = d;
      if (prem) {
        auto bound = sequent_fvars((*prem)->concl);
        for (const auto& [id, v] : sequent_fvars(d->concl)) bound[id] = v;
        n.premises[0] = run(*prem, without(subst_compose(theta, d->unifiers.at(0)), bound));
        if (n.premises[0] != *prem) out = make_deriv(std::move(n));
      }
    } else {
      const Term& eq = n.concl.hyps.at(n.principal);
      auto us = csu(eq.args()[0], eq.args()[1]);
      n.unifiers.clear();
      n.premises.clear();
      if (!us.empty()) {
        if (!prem)
          invariant_broken(
              "instance of a non-unifiable equation is unifiable");
        n.premises.push_back(reindex_eq_premise(*d, theta, us[0]));
        n.unifiers.push_back(us[0]);
      }
      out = make_deriv(std::move(n));
    }
  } else {
    Subst ext = theta;
    if (!n.eigen.empty()) {
      auto range = theta.range_vars();
      for (Var& y : n.eigen) {
        if (!theta.binds(y.id) && !range.count(y.id)) continue;
        Var w = fresh_var(y.name, y.type);
        ext.bind(y, fv_term(w));
        y = w;
        changed = true;
      }
    }
    if (n.term) {
      n.term = subst_apply(*n.term, ext);
      changed = changed || !(*n.term == *d->term);
    }
    for (size_t i = 0; i < n.premises.size(); ++i) {
      n.premises[i] = run(d->premises[i], ext);
      changed = changed || n.premises[i] != d->premises[i];
    }
    out = changed ? make_deriv(std::move(n)) : d;
  }
  memo_.emplace(std::move(key), out);
  return out;
}

// The premise of an eqL node after instantiating its conclusion by
// theta. `rho` is the old unifier and `rho2` the new one; we look for
// delta with (x rho) delta = (x theta) rho2 on the old conclusion's
// variables and use premise[delta].
Deriv Substituter::reindex_eq_premise(const DerivNode& old,
                                      const Subst& theta,
                                      const Subst& rho2) {
  const Subst& rho = old.unifiers.at(0);
  const Deriv& prem = old.premises.at(0);
  // Rename apart everything on the rho side, including variables of
  // x rho that the premise happens not to mention.
  auto side = sequent_fvars(prem->concl);
  for (const auto& [id, v] : sequent_fvars(old.concl))
    collect_fvars(subst_apply(fv_term(v), rho), &side);
  Subst kappa;
  for (const auto& [id, v] : side)
    kappa.bind(v, fv_term(fresh_var(v.name, v.type)));
  std::vector<std::pair<Term, Term>> eqs;
  std::set<uint64_t> rigid;
  for (const auto& [id, v] : sequent_fvars(old.concl)) {
    Term x = fv_term(v);
    Term target = subst_apply(subst_apply(x, theta), rho2);
    for (const auto& [tid, tv] : fvars(target)) rigid.insert(tid);
    eqs.push_back({subst_apply(subst_apply(x, rho), kappa), target});
  }
  auto r = unify_all(eqs, rigid);
  if (r.status != UnifyStatus::kUnifier)
    invariant_broken("eqL re-indexing found no matching instance: " +
                     r.detail);
  // Variables deeper in the premise that are neither bound here nor
  // visible in its end sequent receive theta followed by the new
  // unifier, as any other variable would.
  Subst inner = subst_compose(kappa, r.mgu);
  auto bound = side;
  for (const auto& [id, v] : sequent_fvars(old.concl)) bound[id] = v;
  Subst rest = without(subst_compose(theta, rho2), bound);
  for (const auto& [id, e] : rest.entries())
    if (!inner.binds(id)) inner.bind(e.first, e.second);
  return run(prem, inner);
}

}  // namespace

Deriv deriv_subst(const Deriv& d, const Subst& theta) {
  return Substituter().run(d, theta);
}

// ------------------------------------------------------------ identity

Deriv identity_derivation(const Term& c) {
  DerivNode n;
  n.concl = {{c}, c};
  if (is_atomic(c)) {
    n.rule = Rule::kInit;
    return make_deriv(std::move(n));
  }
  const Term& h = c.spine_head();
  if (h.kind() != Term::Kind::kLogic)
    throw Error(ErrorCode::kTypeMismatch, "not a formula: " + to_string(c));
  auto args = c.spine_args();
  auto node = [](Sequent s, Rule r, int principal,
                 std::vector<Deriv> prems) {
    DerivNode m;
    m.concl = std::move(s);
    m.rule = r;
    m.principal = principal;
    m.premises = std::move(prems);
    return m;
  };
  switch (h.op()) {
    case LogicOp::kTop:
      n.rule = Rule::kTopR;
      return make_deriv(std::move(n));
    case LogicOp::kBot:
      n.rule = Rule::kBotL;
      n.principal = 0;
      return make_deriv(std::move(n));
    case LogicOp::kAnd: {
      auto l = node({{c}, args[0]}, Rule::kAndL1, 0,
                    {identity_derivation(args[0])});
      auto r = node({{c}, args[1]}, Rule::kAndL2, 0,
                    {identity_derivation(args[1])});
      n.rule = Rule::kAndR;
      n.premises = {make_deriv(l), make_deriv(r)};
      return make_deriv(std::move(n));
    }
    case LogicOp::kOr: {
      auto l = node({{args[0]}, c}, Rule::kOrR1, -1,
                    {identity_derivation(args[0])});
      auto r = node({{args[1]}, c}, Rule::kOrR2, -1,
                    {identity_derivation(args[1])});
      n.rule = Rule::kOrL;
      n.principal = 0;
      n.premises = {make_deriv(l), make_deriv(r)};
      return make_deriv(std::move(n));
    }
    case LogicOp::kImp: {
      // C = A => B:  impR over  A => B, A --> B  by impL with Id_A and
      // wL(Id_B).
      const Term& a = args[0];
      const Term& b = args[1];
      auto wk = node({{a, b}, b}, Rule::kWL, 0, {identity_derivation(b)});
      auto il = node({{c, a}, b}, Rule::kImpL, 0,
                     {identity_derivation(a), make_deriv(wk)});
      n.rule = Rule::kImpR;
      n.premises = {make_deriv(il)};
      return make_deriv(std::move(n));
    }
    case LogicOp::kForall: {
      Var y = fresh_var(args[0].name().empty() ? "y" : args[0].name(),
                        h.type());
      Term inst = beta_apply(args[0], {fv_term(y)});
      auto al = node({{c}, inst}, Rule::kAllL, 0, {identity_derivation(inst)});
      al.term = fv_term(y);
      n.rule = Rule::kAllR;
      n.eigen = {y};
      n.premises = {make_deriv(al)};
      return make_deriv(std::move(n));
    }
    case LogicOp::kExists: {
      Var y = fresh_var(args[0].name().empty() ? "y" : args[0].name(),
                        h.type());
      Term inst = beta_apply(args[0], {fv_term(y)});
      auto er = node({{inst}, c}, Rule::kExR, -1, {identity_derivation(inst)});
      er.term = fv_term(y);
      n.rule = Rule::kExL;
      n.principal = 0;
      n.eigen = {y};
      n.premises = {make_deriv(er)};
      return make_deriv(std::move(n));
    }
    case LogicOp::kEq: {
      n.rule = Rule::kEqL;
      n.principal = 0;
      for (const Subst& rho : csu(args[0], args[1])) {
        Term e = subst_apply(c, rho);
        DerivNode r;
        r.concl = {{}, e};
        r.rule = Rule::kEqR;
        n.unifiers.push_back(rho);
        n.premises.push_back(make_deriv(std::move(r)));
      }
      return make_deriv(std::move(n));
    }
  }
  throw Error(ErrorCode::kTypeMismatch, "not a formula: " + to_string(c));
}

// ------------------------------------------------------------ measures

size_t measure(const Deriv& d) {
  size_t m = 0;
  for (const auto& p : d->premises) m = std::max(m, measure(p));
  return m + 1;
}

size_t ind_measure(const Deriv& d) {
  size_t m = 0;
  for (const auto& p : d->premises) m = std::max(m, ind_measure(p));
  return d->rule == Rule::kIL ? m + 1 : m;
}

// ----------------------------------------------------------- structure

Deriv weaken(const Deriv& d, const std::vector<Term>& extra) {
  Deriv cur = d;
  for (const Term& e : extra) {
    DerivNode n;
    n.concl = cur->concl;
    n.concl.hyps.push_back(e);
    n.rule = Rule::kWL;
    n.principal = static_cast<int>(n.concl.hyps.size()) - 1;
    n.premises = {cur};
    cur = make_deriv(std::move(n));
  }
  return cur;
}

Deriv contract_to(const Deriv& d, const std::vector<Term>& target) {
  // Surplus = hyps minus target, as a multiset.
  std::vector<Term> surplus = d->concl.hyps;
  for (const Term& t : target) {
    auto it = std::find(surplus.begin(), surplus.end(), t);
    if (it == surplus.end())
      invariant_broken("contract_to: " + to_string(t) + " missing");
    surplus.erase(it);
  }
  Deriv cur = d;
  for (const Term& f : surplus) {
    const auto& h = cur->concl.hyps;
    int last = -1;
    for (int i = static_cast<int>(h.size()) - 1; i >= 0; --i) {
      if (h[i] == f) {
        last = i;
        break;
      }
    }
    DerivNode n;
    n.concl = cur->concl;
    n.concl.hyps.erase(n.concl.hyps.begin() + last);
    n.rule = Rule::kCL;
    n.principal = -1;
    for (int i = 0; i < static_cast<int>(n.concl.hyps.size()); ++i) {
      if (n.concl.hyps[i] == f) {
        n.principal = i;
        break;
      }
    }
    if (n.principal < 0)
      invariant_broken("contract_to: " + to_string(f) + " has one copy");
    n.premises = {cur};
    cur = make_deriv(std::move(n));
  }
  return reorder_conclusion(cur, target);
}

// ----------------------------------------------------------- unfolding

Deriv instantiate(const Invariant& inv, const std::vector<Term>& args) {
  if (args.size() != inv.xs.size())
    throw Error(ErrorCode::kTypeMismatch, "invariant arity mismatch");
  Subst th;
  for (size_t i = 0; i < args.size(); ++i) th.bind(inv.xs[i], args[i]);
  return deriv_subst(inv.pi, th);
}

namespace {

void check_unfold_args(const std::string& p, const Term& c,
                       const Invariant& inv, const DefTable& table,
                       Flavor flavor) {
  const DefClause* cl = table.find(p);
  if (!cl) throw Error(ErrorCode::kUndefinedPredicate, p);
  if (cl->flavor != flavor)
    throw Error(ErrorCode::kTypeMismatch,
                p + (flavor == Flavor::kInductive ? " is not inductive"
                                                  : " is not co-inductive"));
  Type st = typecheck(inv.s, &table.sig());
  if (st != cl->type)
    throw Error(ErrorCode::kTypeMismatch, "invariant has type " + st.str() +
                                              ", expected " + cl->type.str());
  if (!fvars(inv.s).empty() || has_loose_bvars(inv.s))
    throw Error(ErrorCode::kTypeMismatch, "invariant is not closed");
  auto ats = cl->type.args();
  if (inv.xs.size() != ats.size())
    throw Error(ErrorCode::kTypeMismatch, "invariant parameter count");
  for (size_t i = 0; i < ats.size(); ++i)
    if (inv.xs[i].type != ats[i])
      throw Error(ErrorCode::kTypeMismatch, "invariant parameter type");
  auto xs = fv_terms(inv.xs);
  Term body = unfold_body(p, xs, inv.s, table);
  Term sx = beta_apply(inv.s, xs);
  Sequent want = flavor == Flavor::kInductive ? Sequent{{body}, sx}
                                              : Sequent{{sx}, body};
  if (!same_sequent(inv.pi->concl, want))
    throw Error(ErrorCode::kTypeMismatch,
                "invariant derivation proves " + inv.pi->concl.str() +
                    ", expected " + want.str());
  LevelMap lm = table.level_map();
  bool dom;
  try {
    dom = dominated_by(c, p, lm);
  } catch (const Error& e) {
    throw Error(ErrorCode::kDominationViolation, e.what());
  }
  if (!dom)
    throw Error(ErrorCode::kDominationViolation,
                p + " does not dominate " + to_string(c));
}

class Unfolder {
 public:
  Unfolder(const std::string& p, const Invariant& inv, const DefTable& table)
      : p_(p), inv_(inv), clause_(*table.find(p)) {}

  Term sub(const Term& f) const { return replace_const(f, p_, inv_.s); }

  // d : Gamma --> c   ==>   Gamma --> c[S/p]
  Deriv mu(const Deriv& d, const Term& c) const {
    if (!mentions_const(c, p_)) return d;
    DerivNode n = *d;
    n.concl.concl = sub(c);
    switch (d->rule) {
      case Rule::kInit: {
        auto ys = fresh_like(clause_.type.args(), "x");
        Term st = beta_apply(inv_.s, c.spine_args());
        DerivNode il;
        il.concl = {{c}, st};
        il.rule = Rule::kIL;
        il.principal = 0;
        il.term = inv_.s;
        il.eigen = ys;
        il.premises = {instantiate(inv_, fv_terms(ys)),
                       identity_derivation(st)};
        return make_deriv(std::move(il));
      }
      case Rule::kImpL:
      case Rule::kIL:
        n.premises[1] = mu(d->premises[1], c);
        return make_deriv(std::move(n));
      case Rule::kMc:
        n.premises.back() = mu(d->premises.back(), c);
        return make_deriv(std::move(n));
      case Rule::kIR: {
        // Only IR on p itself reaches here: any other atom is vacuous.
        auto ts = c.spine_args();
        const Deriv& prem = d->premises[0];
        Deriv inner = mu(prem, prem->concl.concl);
        DerivNode mc;
        mc.concl = {d->concl.hyps, beta_apply(inv_.s, ts)};
        mc.rule = Rule::kMc;
        mc.cut_pos = {0};
        mc.premises = {inner, instantiate(inv_, ts)};
        return make_deriv(std::move(mc));
      }
      default:
        for (Deriv& q : n.premises) q = mu(q, q->concl.concl);
        return make_deriv(std::move(n));
    }
  }

  // d : Gamma --> c[S/p]   ==>   Gamma --> c
  Deriv nu(const Deriv& d, const Term& c) const {
    if (!mentions_const(c, p_)) return d;
    if (c.spine_head().is_const() && c.spine_head().name() == p_) {
      auto ys = fresh_like(clause_.type.args(), "x");
      DerivNode cir;
      cir.concl = {d->concl.hyps, c};
      cir.rule = Rule::kCIR;
      cir.term = inv_.s;
      cir.eigen = ys;
      cir.premises = {d, instantiate(inv_, fv_terms(ys))};
      return make_deriv(std::move(cir));
    }
    DerivNode n = *d;
    n.concl.concl = c;
    auto args = c.spine_args();
    auto at = [&](size_t i) -> Deriv& { return n.premises.at(i); };
    switch (d->rule) {
      case Rule::kImpL:
      case Rule::kIL:
        at(1) = nu(at(1), c);
        break;
      case Rule::kMc:
        n.premises.back() = nu(n.premises.back(), c);
        break;
      case Rule::kAndR:
        at(0) = nu(at(0), args.at(0));
        at(1) = nu(at(1), args.at(1));
        break;
      case Rule::kOrR1: at(0) = nu(at(0), args.at(0)); break;
      case Rule::kOrR2: at(0) = nu(at(0), args.at(1)); break;
      case Rule::kImpR: at(0) = nu(at(0), args.at(1)); break;
      case Rule::kAllR:
        at(0) = nu(at(0), beta_apply(args.at(0), {fv_term(d->eigen.at(0))}));
        break;
      case Rule::kExR:
        at(0) = nu(at(0), beta_apply(args.at(0), {*d->term}));
        break;
      case Rule::kEqL:
        if (!n.premises.empty())
          at(0) = nu(at(0), subst_apply(c, d->unifiers.at(0)));
        break;
      case Rule::kTopR:
      case Rule::kBotL:
      case Rule::kEqR:
      case Rule::kInit:
        break;
      case Rule::kIR:
      case Rule::kCIR:
        // The conclusion is atomic, hence p t or vacuous, both handled.
        invariant_broken("nu reached an atomic right rule on " +
                         to_string(c));
      default:  // cL wL andL orL allL exL CIL: the right side is unchanged
        for (Deriv& q : n.premises) q = nu(q, c);
        break;
    }
    return make_deriv(std::move(n));
  }

 private:
  const std::string& p_;
  const Invariant& inv_;
  const DefClause& clause_;
};

}  // namespace

Deriv inductive_unfold(const std::string& p, const Term& c, const Deriv& d,
                       const Invariant& inv, const DefTable& table) {
  check_unfold_args(p, c, inv, table, Flavor::kInductive);
  if (d->concl.concl != c)
    throw Error(ErrorCode::kBadDerivation,
                "derivation concludes " + to_string(d->concl.concl) +
                    ", not " + to_string(c));
  return Unfolder(p, inv, table).mu(d, c);
}

Deriv coinductive_unfold(const std::string& p, const Term& c, const Deriv& d,
                         const Invariant& inv, const DefTable& table) {
  check_unfold_args(p, c, inv, table, Flavor::kCoinductive);
  Unfolder u(p, inv, table);
  if (d->concl.concl != u.sub(c))
    throw Error(ErrorCode::kBadDerivation,
                "derivation concludes " + to_string(d->concl.concl) +
                    ", not " + to_string(u.sub(c)));
  return u.nu(d, c);
}

}  // namespace linc
