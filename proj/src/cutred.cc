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

#include "linc/cutred.h"

#include <algorithm>
#include <cstdlib>
#include <set>

#include "linc/transform.h"
#include "linc/unify.h"

namespace linc {

namespace {

using Hyps = std::vector<Term>;

[[noreturn]] void broken(const std::string& msg) {
  throw Error(ErrorCode::kInternalInvariantViolation, msg);
}

Term fv_term(const Var& v) { return normalize(Term::FVar(v)); }

bool is_right_rule(Rule r) {
  switch (r) {
    case Rule::kTopR: case Rule::kAndR: case Rule::kOrR1: case Rule::kOrR2:
    case Rule::kAllR: case Rule::kExR: case Rule::kImpR: case Rule::kEqR:
    case Rule::kIR: case Rule::kCIR:
      return true;
    default:
      return false;
  }
}

// For each wanted formula, a distinct index of `have` holding it. Same
// positions are taken first so that canonically ordered premises are
// tracked by position and not by formula identity.
std::vector<int> match(const Hyps& want, const Hyps& have) {
  std::vector<int> out(want.size(), -1);
  std::vector<bool> used(have.size(), false);
  for (size_t j = 0; j < want.size() && j < have.size(); ++j) {
    if (want[j] == have[j]) {
      out[j] = static_cast<int>(j);
      used[j] = true;
    }
  }
  for (size_t j = 0; j < want.size(); ++j) {
    if (out[j] >= 0) continue;
    for (size_t k = 0; k < have.size(); ++k) {
      if (!used[k] && have[k] == want[j]) {
        out[j] = static_cast<int>(k);
        used[k] = true;
        break;
      }
    }
    if (out[j] < 0) broken("lost hypothesis " + to_string(want[j]));
  }
  return out;
}

// How the hypotheses of a node's conclusion reappear in one premise.
struct Carry {
  std::vector<int> at;     // conclusion index -> premise index, -1 if gone
  std::vector<int> added;  // premise indices not accounted for by `at`
};

std::optional<Carry> carry(const DerivNode& n, size_t q) {
  const Hyps& H = n.concl.hyps;
  bool keep_principal;
  const Subst* rho = nullptr;
  switch (n.rule) {
    case Rule::kCL: case Rule::kAndR: case Rule::kOrR1: case Rule::kOrR2:
    case Rule::kAllR: case Rule::kExR: case Rule::kImpR: case Rule::kIR:
      keep_principal = true;
      break;
    case Rule::kCIR:
      if (q == 1) return std::nullopt;
      keep_principal = true;
      break;
    case Rule::kIL:
      if (q == 0) return std::nullopt;
      keep_principal = false;
      break;
    case Rule::kEqL:
      rho = &n.unifiers.at(0);
      keep_principal = false;
      break;
    case Rule::kWL: case Rule::kAndL1: case Rule::kAndL2: case Rule::kOrL:
    case Rule::kAllL: case Rule::kExL: case Rule::kImpL: case Rule::kCIL:
      keep_principal = false;
      break;
    default:
      broken(std::string("no premise context for ") + rule_name(n.rule));
  }
  Hyps want;
  std::vector<int> src;
  for (int i = 0; i < static_cast<int>(H.size()); ++i) {
    if (!keep_principal && i == n.principal) continue;
    want.push_back(rho ? subst_apply(H[i], *rho) : H[i]);
    src.push_back(i);
  }
  const Hyps& have = n.premises.at(q)->concl.hyps;
  auto m = match(want, have);
  Carry c;
  c.at.assign(H.size(), -1);
  std::vector<bool> hit(have.size(), false);
  for (size_t j = 0; j < want.size(); ++j) {
    c.at[src[j]] = m[j];
    hit[m[j]] = true;
  }
  for (size_t k = 0; k < have.size(); ++k)
    if (!hit[k]) c.added.push_back(static_cast<int>(k));
  return c;
}

Carry carry_or_die(const DerivNode& n, size_t q) {
  auto c = carry(n, q);
  if (!c) broken("premise without context");
  return *c;
}

// mc node with the canonical conclusion order: the left premises'
// contexts in order, then the uncut hypotheses of the major premise.
Deriv mk_mc(std::vector<Deriv> lefts, std::vector<int> pos, Deriv major) {
  if (lefts.size() != pos.size()) broken("mc arity");
  DerivNode n;
  n.rule = Rule::kMc;
  const Hyps& mh = major->concl.hyps;
  std::vector<bool> cut(mh.size(), false);
  for (size_t i = 0; i < lefts.size(); ++i) {
    if (pos[i] < 0 || pos[i] >= static_cast<int>(mh.size()) || cut[pos[i]])
      broken("mc cut position");
    cut[pos[i]] = true;
    for (const Term& h : lefts[i]->concl.hyps) n.concl.hyps.push_back(h);
  }
  for (size_t j = 0; j < mh.size(); ++j)
    if (!cut[j]) n.concl.hyps.push_back(mh[j]);
  n.concl.concl = major->concl.concl;
  n.cut_pos = std::move(pos);
  n.premises = std::move(lefts);
  n.premises.push_back(std::move(major));
  return make_deriv(std::move(n));
}

// Contracts hypothesis k of d into dup_of[k] wherever that is >= 0,
// then lists the survivors in `order` (indices into d's hypotheses).
// Pairs are given by index: when a substitution makes more hypotheses
// equal, a formula-driven choice would change and this one does not.
Deriv contract_pairs(const Deriv& d, const std::vector<int>& dup_of,
                     const std::vector<int>& order) {
  std::vector<int> alive(d->concl.hyps.size());
  for (size_t k = 0; k < alive.size(); ++k) alive[k] = static_cast<int>(k);
  Deriv cur = d;
  for (int k = static_cast<int>(dup_of.size()) - 1; k >= 0; --k) {
    if (dup_of[k] < 0) continue;
    auto at = [&](int orig) {
      return static_cast<int>(std::find(alive.begin(), alive.end(), orig) -
                              alive.begin());
    };
    int s = at(k);
    if (cur->concl.hyps[s] != cur->concl.hyps[at(dup_of[k])])
      broken("contracting different formulas");
    DerivNode n;
    n.rule = Rule::kCL;
    n.concl = cur->concl;
    n.concl.hyps.erase(n.concl.hyps.begin() + s);
    alive.erase(alive.begin() + s);
    n.principal = at(dup_of[k]);
    n.premises = {cur};
    cur = make_deriv(std::move(n));
  }
  DerivNode n = *cur;
  n.concl.hyps.clear();
  std::vector<int> where(alive.size(), -1);
  for (size_t j = 0; j < order.size(); ++j) {
    int s = static_cast<int>(std::find(alive.begin(), alive.end(), order[j]) -
                             alive.begin());
    if (s >= static_cast<int>(alive.size())) broken("contract order");
    where[s] = static_cast<int>(j);
    n.concl.hyps.push_back(cur->concl.hyps[s]);
  }
  if (order.size() != alive.size()) broken("contract order");
  if (n.concl.hyps == cur->concl.hyps) return cur;
  if (n.principal >= 0 && is_left_rule(n.rule)) n.principal = where[n.principal];
  return make_deriv(std::move(n));
}

void add_fvars(const Hyps& hs, std::map<uint64_t, Var>* out) {
  for (const Term& h : hs) collect_fvars(h, out);
}

// Renames eigenvariables of n that occur in `avoid`, in all premises.
void freshen_eigen(DerivNode* n, const std::map<uint64_t, Var>& avoid) {
  Subst s;
  for (Var& y : n->eigen) {
    if (!avoid.count(y.id)) continue;
    Var z = fresh_var(y.name, y.type);
    s.bind(y, fv_term(z));
    y = z;
  }
  if (s.empty()) return;
  for (Deriv& p : n->premises) p = deriv_subst(p, s);
}

template <typename T>
std::vector<T> drop(const std::vector<T>& v, int i) {
  std::vector<T> out;
  for (int j = 0; j < static_cast<int>(v.size()); ++j)
    if (j != i) out.push_back(v[j]);
  return out;
}

template <typename T>
std::vector<T> put(std::vector<T> v, int i, T x) {
  v.at(i) = std::move(x);
  return v;
}

const char* detail_name(ReductionDetail d) {
  switch (d) {
    case ReductionDetail::kNone: return "";
    case ReductionDetail::kAnd: return "and";
    case ReductionDetail::kOr: return "or";
    case ReductionDetail::kImp: return "imp";
    case ReductionDetail::kAll: return "all";
    case ReductionDetail::kEx: return "ex";
    case ReductionDetail::kEq: return "eq";
    case ReductionDetail::kInd: return "ind";
    case ReductionDetail::kCoind: return "coind";
    case ReductionDetail::kCL: return "cL";
    case ReductionDetail::kWL: return "wL";
    case ReductionDetail::kInitLeft: return "initLeft";
    case ReductionDetail::kInitRight: return "initRight";
  }
  return "?";
}

const char* tag_name(ReductionTag t) {
  switch (t) {
    case ReductionTag::kAxiom: return "Axiom";
    case ReductionTag::kStructural: return "Structural";
    case ReductionTag::kEmptyMC: return "EmptyMC";
    case ReductionTag::kEssential: return "Essential";
    case ReductionTag::kMulticut: return "Multicut";
    case ReductionTag::kLeftCommutative: return "LeftCommutative";
    case ReductionTag::kRightCommutative: return "RightCommutative";
  }
  return "?";
}

// ------------------------------------------------------------- redexes

struct Redex {
  const DerivNode& xi;
  std::vector<Deriv> L;  // left premises
  std::vector<int> pos;  // cut positions in the major premise
  Deriv M;               // major premise
  const DefTable& table;

  explicit Redex(const Deriv& d, const DefTable& t)
      : xi(*d),
        L(d->premises.begin(), d->premises.end() - 1),
        pos(d->cut_pos),
        M(d->premises.back()),
        table(t) {}

  const Hyps& T() const { return xi.concl.hyps; }
  int n() const { return static_cast<int>(L.size()); }

  // Positions of the cut formulas other than i in premise q of M.
  std::vector<int> carried(const Carry& c, int skip = -1) const {
    std::vector<int> out;
    for (int j = 0; j < n(); ++j) {
      if (j == skip) continue;
      int p = c.at[pos[j]];
      if (p < 0) broken("cut formula dropped by a premise");
      out.push_back(p);
    }
    return out;
  }

  // Same, with cut formula i moved to premise position `at_new`.
  std::vector<int> carried_to(const Carry& c, int i, int at_new) const {
    std::vector<int> out;
    for (int j = 0; j < n(); ++j) {
      if (j == i) {
        out.push_back(at_new);
        continue;
      }
      int p = c.at[pos[j]];
      if (p < 0) broken("cut formula dropped by a premise");
      out.push_back(p);
    }
    return out;
  }

  // The redex's conclusion in canonical order: contexts of the left
  // premises, then the uncut hypotheses of M. `offset` receives where
  // each left's context starts and `rest_at` where each uncut
  // hypothesis of M lands.
  Hyps canonical(std::vector<int>* offset, std::vector<int>* rest_at) const {
    Hyps out;
    for (int j = 0; j < n(); ++j) {
      if (offset) offset->push_back(static_cast<int>(out.size()));
      for (const Term& h : L[j]->concl.hyps) out.push_back(h);
    }
    std::vector<bool> cut(M->concl.hyps.size(), false);
    for (int p : pos) cut[p] = true;
    if (rest_at) rest_at->assign(M->concl.hyps.size(), -1);
    for (size_t j = 0; j < cut.size(); ++j) {
      if (cut[j]) continue;
      if (rest_at) (*rest_at)[j] = static_cast<int>(out.size());
      out.push_back(M->concl.hyps[j]);
    }
    return out;
  }
};

std::vector<Deriv> subst_all(const std::vector<Deriv>& ds, const Subst& s) {
  std::vector<Deriv> out;
  for (const Deriv& d : ds) out.push_back(deriv_subst(d, s));
  return out;
}

// -/o: push the mc above the last rule of M, which does not act on a cut
// formula.
Deriv right_commute(const Redex& r) {
  std::vector<int> rest_at;
  Hyps H = r.canonical(nullptr, &rest_at);
  std::map<uint64_t, Var> avoid;
  for (const Deriv& l : r.L) add_fvars(l->concl.hyps, &avoid);
  DerivNode base = *r.M;
  freshen_eigen(&base, avoid);
  DerivNode n = base;
  if (is_left_rule(n.rule)) n.principal = rest_at.at(r.M->principal);
  for (size_t q = 0; q < n.premises.size(); ++q) {
    auto c = carry(base, q);
    if (!c) continue;
    auto lefts = n.rule == Rule::kEqL ? subst_all(r.L, n.unifiers.at(0)) : r.L;
    n.premises[q] = mk_mc(std::move(lefts), r.carried(*c), n.premises[q]);
  }
  n.concl.hyps = std::move(H);
  return make_deriv(std::move(n));
}

// o/L: the left premise i ends with a left rule; move it below the mc.
Deriv left_commute(const Redex& r, int i) {
  std::vector<int> offset;
  Hyps H = r.canonical(&offset, nullptr);
  const Deriv& li = r.L[i];
  Hyps others;  // everything but the context of li
  size_t lo = offset[i], hi = lo + li->concl.hyps.size();
  for (size_t k = 0; k < H.size(); ++k)
    if (k < lo || k >= hi) others.push_back(H[k]);
  std::map<uint64_t, Var> avoid;
  add_fvars(others, &avoid);
  collect_fvars(r.xi.concl.concl, &avoid);
  DerivNode n = *li;
  freshen_eigen(&n, avoid);
  n.principal = offset[i] + li->principal;
  switch (li->rule) {
    case Rule::kImpL:
      n.premises[0] = weaken(n.premises[0], others);
      n.premises[1] = mk_mc(put(r.L, i, n.premises[1]), r.pos, r.M);
      break;
    case Rule::kIL:
      n.premises[1] = mk_mc(put(r.L, i, n.premises[1]), r.pos, r.M);
      break;
    case Rule::kEqL:
      if (!n.premises.empty()) {
        const Subst& rho = n.unifiers.at(0);
        n.premises[0] = mk_mc(put(subst_all(r.L, rho), i, n.premises[0]),
                              r.pos, deriv_subst(r.M, rho));
      }
      break;
    default:
      for (Deriv& p : n.premises) p = mk_mc(put(r.L, i, p), r.pos, r.M);
      break;
  }
  n.concl = {H, r.xi.concl.concl};
  return make_deriv(std::move(n));
}

// Binds the variables of v rho back to v when rho is a renaming on the
// conclusion's variables; empty when rho is already the identity there.
Subst undo_renaming(const Sequent& s, const Subst& rho) {
  std::vector<std::pair<Term, Term>> eqs;
  std::set<uint64_t> rigid;
  bool moved = false;
  for (const auto& [id, v] : sequent_fvars(s)) {
    Term x = fv_term(v);
    Term y = subst_apply(x, rho);
    if (y != x) moved = true;
    eqs.push_back({y, x});
    rigid.insert(id);
  }
  if (!moved) return {};
  auto u = unify_all(eqs, rigid);
  if (u.status != UnifyStatus::kUnifier)
    broken("eqL unifier of s = s is not a renaming");
  return u.mgu;
}

Deriv essential(const Redex& r, ReductionDetail d, int i) {
  const Deriv& li = r.L[i];
  const DerivNode& m = *r.M;
  switch (d) {
    case ReductionDetail::kAnd: {
      Carry c = carry_or_die(m, 0);
      Deriv part = li->premises.at(m.rule == Rule::kAndL1 ? 0 : 1);
      auto pos = r.carried_to(c, i, c.added.at(0));
      return mk_mc(put(r.L, i, part), pos, m.premises[0]);
    }
    case ReductionDetail::kOr: {
      size_t q = li->rule == Rule::kOrR1 ? 0 : 1;
      Carry c = carry_or_die(m, q);
      auto pos = r.carried_to(c, i, c.added.at(0));
      return mk_mc(put(r.L, i, li->premises[0]), pos, m.premises[q]);
    }
    case ReductionDetail::kImp: {
      Carry c0 = carry_or_die(m, 0), c1 = carry_or_die(m, 1);
      Carry cq = carry_or_die(*li, 0);
      auto rest = drop(r.L, i);
      Deriv inner = mk_mc(rest, r.carried(c0, i), m.premises[0]);
      Deriv xi1 = mk_mc({inner}, {cq.added.at(0)}, li->premises[0]);
      std::vector<Deriv> lefts{xi1};
      lefts.insert(lefts.end(), rest.begin(), rest.end());
      std::vector<int> pos{c1.added.at(0)};
      for (int p : r.carried(c1, i)) pos.push_back(p);
      // Conclusion: [rest contexts, uncut of M, Delta_i] from xi1, then
      // the rest contexts and uncut of M again. The premises of M and
      // li may list their contexts in any order, so positions are
      // found through the carries.
      Deriv out = mk_mc(lefts, pos, m.premises[1]);
      int a = static_cast<int>(li->concl.hyps.size());
      int block = static_cast<int>(inner->concl.hyps.size());
      int R = 0;
      for (const Deriv& l : rest) R += static_cast<int>(l->concl.hyps.size());
      // rank of premise index p among the indices not in `skip`
      auto rank = [](int p, const std::vector<int>& skip) {
        int k = 0;
        for (int j = 0; j < p; ++j)
          if (std::find(skip.begin(), skip.end(), j) == skip.end()) ++k;
        return k;
      };
      std::vector<int> skip0 = r.carried(c0, i), skip1 = pos;
      std::vector<int> skipq{cq.added.at(0)};
      std::vector<int> dup(static_cast<int>(out->concl.hyps.size()), -1);
      for (int k = 0; k < R; ++k) dup[k] = block + a + k;
      std::vector<bool> is_cut(m.concl.hyps.size(), false);
      for (int p : r.pos) is_cut[p] = true;
      std::vector<int> uncut_at;  // in M's conclusion order
      for (int h = 0; h < static_cast<int>(m.concl.hyps.size()); ++h) {
        if (is_cut[h]) continue;
        int there = block + a + R + rank(c1.at[h], skip1);
        dup[R + rank(c0.at[h], skip0)] = there;
        uncut_at.push_back(there);
      }
      std::vector<int> order;
      int tail = block + a;
      for (int j = 0; j < r.n(); ++j) {
        int sz = static_cast<int>(r.L[j]->concl.hyps.size());
        if (j == i) {
          for (int k = 0; k < a; ++k) order.push_back(block + rank(cq.at[k], skipq));
          continue;
        }
        for (int k = 0; k < sz; ++k) order.push_back(tail++);
      }
      order.insert(order.end(), uncut_at.begin(), uncut_at.end());
      return contract_pairs(out, dup, order);
    }
    case ReductionDetail::kAll: {
      Carry c = carry_or_die(m, 0);
      Deriv inst = deriv_subst(li->premises[0],
                               Subst::single(li->eigen.at(0), *m.term));
      auto pos = r.carried_to(c, i, c.added.at(0));
      return mk_mc(put(r.L, i, inst), pos, m.premises[0]);
    }
    case ReductionDetail::kEx: {
      Carry c = carry_or_die(m, 0);
      Deriv inst =
          deriv_subst(m.premises[0], Subst::single(m.eigen.at(0), *li->term));
      auto pos = r.carried_to(c, i, c.added.at(0));
      return mk_mc(put(r.L, i, li->premises[0]), pos, inst);
    }
    case ReductionDetail::kEq: {
      if (m.premises.empty()) broken("eqL on s = s without a premise");
      Carry c = carry_or_die(m, 0);
      Deriv p = m.premises[0];
      Subst back = undo_renaming(m.concl, m.unifiers.at(0));
      if (!back.empty()) p = deriv_subst(p, back);
      Deriv inner = mk_mc(drop(r.L, i), r.carried(c, i), p);
      return weaken(inner, li->concl.hyps);
    }
    case ReductionDetail::kInd: {
      const Term& b = r.M->concl.hyps.at(r.pos[i]);
      auto p = defined_head(b, r.table);
      if (!p) broken("IL on an undefined atom");
      Invariant inv{*m.term, m.eigen, m.premises[0]};
      Deriv mu = inductive_unfold(*p, b, li, inv, r.table);
      Carry c = carry_or_die(m, 1);
      auto pos = r.carried_to(c, i, c.added.at(0));
      return mk_mc(put(r.L, i, mu), pos, m.premises[1]);
    }
    case ReductionDetail::kCoind: {
      const Term& b = r.M->concl.hyps.at(r.pos[i]);
      auto p = defined_head(b, r.table);
      if (!p) broken("CIL on an undefined atom");
      const DefClause* cl = r.table.find(*p);
      Invariant inv{*li->term, li->eigen, li->premises[1]};
      auto ts = b.spine_args();
      Deriv xi1 = mk_mc({li->premises[0]}, {0}, instantiate(inv, ts));
      Term body = unfold_body(*p, ts, Term::Const(*p, cl->type), r.table);
      Deriv nu = coinductive_unfold(*p, body, xi1, inv, r.table);
      Carry c = carry_or_die(m, 0);
      auto pos = r.carried_to(c, i, c.added.at(0));
      return mk_mc(put(r.L, i, nu), pos, m.premises[0]);
    }
    default:
      broken("not an essential case");
  }
}

// -/mc: distribute the outer cuts over the premises of the inner mc.
Deriv push_into_mc(const Redex& r) {
  const DerivNode& inner = *r.M;
  size_t m = inner.cut_pos.size();
  const Deriv& major = inner.premises.back();
  struct Slot {
    size_t prem;  // 0..m-1 for a left premise, m for the major one
    int idx;
  };
  Hyps slots_f;
  std::vector<Slot> slots;
  for (size_t j = 0; j < m; ++j) {
    const Hyps& h = inner.premises[j]->concl.hyps;
    for (size_t k = 0; k < h.size(); ++k) {
      slots_f.push_back(h[k]);
      slots.push_back({j, static_cast<int>(k)});
    }
  }
  std::vector<bool> cut(major->concl.hyps.size(), false);
  for (int p : inner.cut_pos) cut[p] = true;
  for (size_t k = 0; k < cut.size(); ++k) {
    if (cut[k]) continue;
    slots_f.push_back(major->concl.hyps[k]);
    slots.push_back({m, static_cast<int>(k)});
  }
  // slot s holds conclusion hypothesis at[s]
  auto at = match(slots_f, inner.concl.hyps);
  std::vector<int> slot_of(inner.concl.hyps.size(), -1);
  for (size_t s = 0; s < at.size(); ++s) slot_of[at[s]] = static_cast<int>(s);

  std::vector<std::vector<Deriv>> group_l(m + 1);
  std::vector<std::vector<int>> group_p(m + 1);
  for (int i = 0; i < r.n(); ++i) {
    const Slot& s = slots.at(slot_of.at(r.pos[i]));
    group_l[s.prem].push_back(r.L[i]);
    group_p[s.prem].push_back(s.idx);
  }
  std::vector<Deriv> lefts;
  std::vector<int> pos;
  for (size_t j = 0; j < m; ++j) {
    lefts.push_back(mk_mc(group_l[j], group_p[j], inner.premises[j]));
    pos.push_back(inner.cut_pos[j]);
  }
  for (size_t k = 0; k < group_l[m].size(); ++k) {
    lefts.push_back(group_l[m][k]);
    pos.push_back(group_p[m][k]);
  }
  return mk_mc(lefts, pos, major);
}

Deriv reduce_raw(const Redex& r, const ReductionKind& k) {
  int i = k.cut;
  switch (k.tag) {
    case ReductionTag::kEmptyMC:
      return r.M;
    case ReductionTag::kAxiom:
      if (k.detail == ReductionDetail::kInitRight) return r.L.at(0);
      return mk_mc(drop(r.L, i), drop(r.pos, i), r.M);
    case ReductionTag::kStructural: {
      Carry c = carry_or_die(*r.M, 0);
      if (k.detail == ReductionDetail::kWL) {
        Deriv inner = mk_mc(drop(r.L, i), r.carried(c, i), r.M->premises[0]);
        return weaken(inner, r.L[i]->concl.hyps);
      }
      std::vector<Deriv> lefts{r.L[i]};
      lefts.insert(lefts.end(), r.L.begin(), r.L.end());
      std::vector<int> pos{c.added.at(0)};
      for (int p : r.carried(c)) pos.push_back(p);
      // Conclusion: Delta_i, then the redex's canonical hypotheses.
      std::vector<int> offset;
      int size = static_cast<int>(r.canonical(&offset, nullptr).size());
      int a = static_cast<int>(r.L[i]->concl.hyps.size());
      std::vector<int> dup(a + size, -1), order;
      for (int k = 0; k < a; ++k) dup[k] = a + offset[i] + k;
      for (int k = 0; k < size; ++k) order.push_back(a + k);
      return contract_pairs(mk_mc(lefts, pos, r.M->premises[0]), dup, order);
    }
    case ReductionTag::kEssential:
      return essential(r, k.detail, i);
    case ReductionTag::kMulticut: {
      if (i < 0) return push_into_mc(r);
      auto inner = classify_redexes(r.L[i]);
      if (inner.empty()) broken("left premise mc has no reduct");
      Deriv li = reduce_once(r.L[i], inner.front(), r.table);
      return mk_mc(put(r.L, i, li), r.pos, r.M);
    }
    case ReductionTag::kLeftCommutative:
      return left_commute(r, i);
    case ReductionTag::kRightCommutative:
      return right_commute(r);
  }
  broken("unknown reduction");
}

ReductionDetail essential_detail(Rule left, Rule right) {
  switch (left) {
    case Rule::kAndL1:
    case Rule::kAndL2:
      if (right == Rule::kAndR) return ReductionDetail::kAnd;
      break;
    case Rule::kOrL:
      if (right == Rule::kOrR1 || right == Rule::kOrR2)
        return ReductionDetail::kOr;
      break;
    case Rule::kImpL:
      if (right == Rule::kImpR) return ReductionDetail::kImp;
      break;
    case Rule::kAllL:
      if (right == Rule::kAllR) return ReductionDetail::kAll;
      break;
    case Rule::kExL:
      if (right == Rule::kExR) return ReductionDetail::kEx;
      break;
    case Rule::kEqL:
      if (right == Rule::kEqR) return ReductionDetail::kEq;
      break;
    case Rule::kCIL:
      if (right == Rule::kCIR) return ReductionDetail::kCoind;
      break;
    default:
      break;
  }
  return ReductionDetail::kNone;
}

}  // namespace

std::string ReductionKind::name() const {
  std::string s = tag_name(tag);
  if (detail != ReductionDetail::kNone)
    s += std::string("(") + detail_name(detail) + ")";
  return s;
}

std::string ReductionKind::str() const {
  std::string s = name();
  if (cut >= 0) s += "@" + std::to_string(cut);
  return s;
}

std::vector<ReductionKind> classify_redexes(const Deriv& xi) {
  if (!xi || xi->rule != Rule::kMc)
    throw Error(ErrorCode::kNotARedex,
                xi ? std::string("root is ") + rule_name(xi->rule)
                   : std::string("null derivation"));
  if (xi->premises.size() != xi->cut_pos.size() + 1)
    throw Error(ErrorCode::kNotARedex, "malformed mc");
  using T = ReductionTag;
  using D = ReductionDetail;
  std::vector<ReductionKind> out;
  int n = static_cast<int>(xi->cut_pos.size());
  if (n == 0) return {{T::kEmptyMC, D::kNone, -1}};
  const DerivNode& m = *xi->premises.back();
  if (m.rule == Rule::kInit) return {{T::kAxiom, D::kInitRight, -1}};
  if (m.rule == Rule::kMc) return {{T::kMulticut, D::kNone, -1}};
  int i = -1;
  if (is_left_rule(m.rule))
    for (int j = 0; j < n; ++j)
      if (xi->cut_pos[j] == m.principal) i = j;
  if (i < 0) return {{T::kRightCommutative, D::kNone, -1}};

  Rule left = xi->premises[i]->rule;
  if (left == Rule::kInit) out.push_back({T::kAxiom, D::kInitLeft, i});
  if (m.rule == Rule::kCL) {
    out.push_back({T::kStructural, D::kCL, i});
  } else if (m.rule == Rule::kWL) {
    out.push_back({T::kStructural, D::kWL, i});
  } else if (m.rule == Rule::kIL) {
    out.push_back({T::kEssential, D::kInd, i});
  } else if (left == Rule::kMc) {
    out.push_back({T::kMulticut, D::kNone, i});
  } else if (is_right_rule(left)) {
    D d = essential_detail(m.rule, left);
    if (d != D::kNone) out.push_back({T::kEssential, d, i});
  } else if (is_left_rule(left)) {
    out.push_back({T::kLeftCommutative, D::kNone, i});
  }
  return out;
}

Deriv reduce_once(const Deriv& xi, const ReductionKind& choice,
                  const DefTable& table) {
  auto kinds = classify_redexes(xi);
  if (std::find(kinds.begin(), kinds.end(), choice) == kinds.end())
    throw Error(ErrorCode::kNotARedex,
                choice.str() + " does not apply to this mc");
  Redex r(xi, table);
  Deriv out = reduce_raw(r, choice);
  if (out->concl.concl != xi->concl.concl ||
      !same_multiset(out->concl.hyps, xi->concl.hyps))
    broken(choice.str() + " changed the end sequent " + xi->concl.str() +
           " into " + out->concl.str());
  return reorder_conclusion(out, xi->concl.hyps);
}

// ----------------------------------------------------------- normalize

size_t default_fuel() {
  if (const char* e = std::getenv("LINC_FUEL")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(e, &end, 10);
    if (end != e && *end == '\0' && v > 0) return static_cast<size_t>(v);
  }
  return 1000000;
}

size_t Trace::count(ReductionTag tag, ReductionDetail detail) const {
  size_t n = 0;
  for (const auto& s : steps)
    if (s.kind.tag == tag &&
        (detail == ReductionDetail::kNone || s.kind.detail == detail))
      ++n;
  return n;
}

namespace {

bool find_redex(const Deriv& d, std::vector<int>* path) {
  for (int q = static_cast<int>(d->premises.size()) - 1; q >= 0; --q) {
    path->push_back(q);
    if (find_redex(d->premises[q], path)) return true;
    path->pop_back();
  }
  return d->rule == Rule::kMc;
}

Deriv subderiv(const Deriv& d, const std::vector<int>& path) {
  Deriv cur = d;
  for (int q : path) cur = cur->premises.at(q);
  return cur;
}

Deriv replace_at(const Deriv& d, const std::vector<int>& path, size_t k,
                 const Deriv& repl) {
  if (k == path.size()) return repl;
  DerivNode n = *d;
  n.premises.at(path[k]) = replace_at(d->premises[path[k]], path, k + 1, repl);
  return make_deriv(std::move(n));
}

std::string path_str(const std::vector<int>& path) {
  std::string s;
  for (size_t i = 0; i < path.size(); ++i)
    s += (i ? "." : "") + std::to_string(path[i]);
  return s;
}

}  // namespace

std::optional<std::vector<int>> next_redex(const Deriv& d) {
  std::vector<int> path;
  if (find_redex(d, &path)) return path;
  return std::nullopt;
}

NormalizeResult normalize(const Deriv& d, const NormalizeConfig& cfg,
                          const DefTable& table) {
  if (cfg.fuel == 0)
    throw Error(ErrorCode::kFuelExhausted, "fuel must be positive");
  NormalizeResult res{d, {}};
  CheckOptions copts;
  copts.allow_empty_mc = true;
  while (auto path = next_redex(res.deriv)) {
    if (res.trace.steps.size() >= cfg.fuel)
      throw FuelExhausted(res.deriv, res.trace);
    Deriv node = subderiv(res.deriv, *path);
    auto kinds = classify_redexes(node);
    if (kinds.empty()) broken("mc without a reduct at " + path_str(*path));
    Deriv red = reduce_once(node, kinds.front(), table);
    TraceStep st;
    st.step = res.trace.steps.size();
    st.path = path_str(*path);
    st.kind = kinds.front();
    st.measure_before = measure(node);
    st.measure_after = measure(red);
    st.indm_before = ind_measure(node);
    st.indm_after = ind_measure(red);
    res.trace.steps.push_back(st);
    res.deriv = replace_at(res.deriv, *path, 0, red);
    if (cfg.debug_recheck) {
      auto rep = check_derivation(res.deriv, table, copts);
      if (!rep.ok)
        broken("step " + std::to_string(st.step) + " (" + st.kind.str() +
               " at " + st.path + ") broke the derivation:\n" + rep.str());
    }
    if (cfg.on_step) cfg.on_step(res.deriv, res.trace.steps.back());
  }
  return res;
}

// ------------------------------------------------------ bounded search

namespace {

bool is_op(const Term& f, LogicOp op) {
  const Term& h = f.spine_head();
  return h.kind() == Term::Kind::kLogic && h.op() == op;
}

class Searcher {
 public:
  explicit Searcher(const DefTable& table) : table_(table) {
    const Signature& sig = table.sig();
    for (const auto& c : sig.consts()) {
      if (sig.is_predicate(c)) continue;
      const Type& t = sig.const_type(c);
      auto as = t.args();
      if (t.result().is_prop()) continue;
      if (as.empty()) nullary_.push_back(sig.constant(c));
      else if (as.size() == 1 && as[0].args().empty()) unary_.push_back(c);
    }
  }

  std::optional<Deriv> prove(const Sequent& s, int depth) {
    ++visited_;
    if (depth <= 0) return std::nullopt;
    if (auto d = axiom(s)) return d;
    if (auto d = right(s, depth)) return d;
    for (int k = 0; k < static_cast<int>(s.hyps.size()); ++k)
      if (auto d = left(s, k, depth)) return d;
    return std::nullopt;
  }

  size_t visited() const { return visited_; }

 private:
  static Hyps without(const Hyps& h, int k) {
    Hyps out;
    for (int i = 0; i < static_cast<int>(h.size()); ++i)
      if (i != k) out.push_back(h[i]);
    return out;
  }
  static Hyps with(Hyps h, const Term& f) {
    h.push_back(f);
    return h;
  }

  Deriv leaf(const Sequent& s, Rule r, int principal = -1) {
    DerivNode n;
    n.concl = s;
    n.rule = r;
    n.principal = principal;
    return make_deriv(std::move(n));
  }

  std::optional<Deriv> axiom(const Sequent& s) {
    const Term& c = s.concl;
    if (is_op(c, LogicOp::kTop)) return leaf(s, Rule::kTopR);
    if (is_op(c, LogicOp::kEq) && c.args()[0] == c.args()[1])
      return leaf(s, Rule::kEqR);
    for (int k = 0; k < static_cast<int>(s.hyps.size()); ++k)
      if (is_op(s.hyps[k], LogicOp::kBot)) return leaf(s, Rule::kBotL, k);
    if (is_atomic(c) && s.hyps.size() == 1 && s.hyps[0] == c)
      return leaf(s, Rule::kInit);
    return std::nullopt;
  }

  std::vector<Term> witnesses(const Sequent& s, const Type& t) {
    std::vector<Term> out;
    auto add = [&](const Term& x) {
      if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
    };
    for (const auto& [id, v] : sequent_fvars(s))
      if (v.type == t) add(fv_term(v));
    for (const Term& c : nullary_)
      if (c.type() == t) add(c);
    size_t base = out.size();
    const Signature& sig = table_.sig();
    for (const std::string& f : unary_) {
      const Type& ft = sig.const_type(f);
      if (ft.result() != t) continue;
      for (size_t i = 0; i < base; ++i) {
        if (typecheck(out[i], &sig) != ft.args()[0]) continue;
        add(normalize(Term::App(sig.constant(f), {out[i]})));
      }
    }
    return out;
  }

  // One premise; returns the node if the premise is provable.
  std::optional<Deriv> one(DerivNode n, const Sequent& p, int depth) {
    auto d = prove(p, depth - 1);
    if (!d) return std::nullopt;
    n.premises = {*d};
    return make_deriv(std::move(n));
  }

  std::optional<Deriv> right(const Sequent& s, int depth) {
    const Term& c = s.concl;
    DerivNode n;
    n.concl = s;
    if (is_op(c, LogicOp::kAnd)) {
      auto a = prove({s.hyps, c.args()[0]}, depth - 1);
      if (!a) return std::nullopt;
      auto b = prove({s.hyps, c.args()[1]}, depth - 1);
      if (!b) return std::nullopt;
      n.rule = Rule::kAndR;
      n.premises = {*a, *b};
      return make_deriv(std::move(n));
    }
    if (is_op(c, LogicOp::kOr)) {
      n.rule = Rule::kOrR1;
      if (auto d = one(n, {s.hyps, c.args()[0]}, depth)) return d;
      n.rule = Rule::kOrR2;
      return one(n, {s.hyps, c.args()[1]}, depth);
    }
    if (is_op(c, LogicOp::kImp)) {
      n.rule = Rule::kImpR;
      return one(n, {with(s.hyps, c.args()[0]), c.args()[1]}, depth);
    }
    if (is_op(c, LogicOp::kForall)) {
      Var y = fresh_var("y", c.spine_head().type());
      n.rule = Rule::kAllR;
      n.eigen = {y};
      return one(n, {s.hyps, beta_apply(c.args()[0], {fv_term(y)})}, depth);
    }
    if (is_op(c, LogicOp::kExists)) {
      n.rule = Rule::kExR;
      for (const Term& w : witnesses(s, c.spine_head().type())) {
        n.term = w;
        if (auto d = one(n, {s.hyps, beta_apply(c.args()[0], {w})}, depth))
          return d;
      }
      return std::nullopt;
    }
    if (auto p = defined_head(c, table_)) {
      const DefClause* cl = table_.find(*p);
      if (cl->flavor == Flavor::kInductive) {
        n.rule = Rule::kIR;
        Term unf = unfold_body(*p, c.spine_args(),
                               Term::Const(*p, cl->type), table_);
        return one(n, {s.hyps, unf}, depth);
      }
    }
    return std::nullopt;
  }

  std::optional<Deriv> left(const Sequent& s, int k, int depth) {
    const Term& f = s.hyps[k];
    Hyps rest = without(s.hyps, k);
    DerivNode n;
    n.concl = s;
    n.principal = k;
    if (is_op(f, LogicOp::kAnd)) {
      n.rule = Rule::kAndL1;
      if (auto d = one(n, {with(rest, f.args()[0]), s.concl}, depth)) return d;
      n.rule = Rule::kAndL2;
      if (auto d = one(n, {with(rest, f.args()[1]), s.concl}, depth)) return d;
    } else if (is_op(f, LogicOp::kOr)) {
      auto a = prove({with(rest, f.args()[0]), s.concl}, depth - 1);
      if (a) {
        auto b = prove({with(rest, f.args()[1]), s.concl}, depth - 1);
        if (b) {
          n.rule = Rule::kOrL;
          n.premises = {*a, *b};
          return make_deriv(std::move(n));
        }
      }
    } else if (is_op(f, LogicOp::kImp)) {
      auto a = prove({rest, f.args()[0]}, depth - 1);
      if (a) {
        auto b = prove({with(rest, f.args()[1]), s.concl}, depth - 1);
        if (b) {
          n.rule = Rule::kImpL;
          n.premises = {*a, *b};
          return make_deriv(std::move(n));
        }
      }
    } else if (is_op(f, LogicOp::kForall)) {
      n.rule = Rule::kAllL;
      for (const Term& w : witnesses(s, f.spine_head().type())) {
        n.term = w;
        if (auto d = one(n, {with(rest, beta_apply(f.args()[0], {w})),
                             s.concl}, depth))
          return d;
      }
      n.term.reset();
    } else if (is_op(f, LogicOp::kExists)) {
      Var y = fresh_var("y", f.spine_head().type());
      n.rule = Rule::kExL;
      n.eigen = {y};
      if (auto d = one(n, {with(rest, beta_apply(f.args()[0], {fv_term(y)})),
                           s.concl}, depth))
        return d;
      n.eigen.clear();
    } else if (is_op(f, LogicOp::kEq)) {
      std::vector<Subst> us;
      bool pattern = true;
      try {
        us = csu(f.args()[0], f.args()[1]);
      } catch (const Error&) {
        pattern = false;  // eqL is unavailable
      }
      if (pattern) {
        n.rule = Rule::kEqL;
        if (us.empty()) return make_deriv(std::move(n));
        Hyps r2;
        for (const Term& h : rest) r2.push_back(subst_apply(h, us[0]));
        n.unifiers = us;
        if (auto d = one(n, {r2, subst_apply(s.concl, us[0])}, depth))
          return d;
        n.unifiers.clear();
      }
    } else if (auto p = defined_head(f, table_)) {
      const DefClause* cl = table_.find(*p);
      if (cl->flavor == Flavor::kCoinductive) {
        n.rule = Rule::kCIL;
        Term unf = unfold_body(*p, f.spine_args(),
                               Term::Const(*p, cl->type), table_);
        if (auto d = one(n, {with(rest, unf), s.concl}, depth)) return d;
      }
    }
    n.rule = Rule::kWL;
    n.term.reset();
    n.eigen.clear();
    n.unifiers.clear();
    if (auto d = one(n, {rest, s.concl}, depth)) return d;
    n.rule = Rule::kCL;
    return one(n, {with(s.hyps, f), s.concl}, depth);
  }

  const DefTable& table_;
  std::vector<Term> nullary_;
  std::vector<std::string> unary_;
  size_t visited_ = 0;
};

}  // namespace

SearchResult bounded_search(const Sequent& goal, int depth,
                            const DefTable& table) {
  Searcher s(table);
  SearchResult r;
  r.proof = s.prove(goal, depth);
  r.sequents = s.visited();
  return r;
}

ProbeResult consistency_probe(const DefTable& table, int depth) {
  auto r = bounded_search(Sequent{{}, normalize(Term::Bot())}, depth, table);
  return {r.proof.has_value(), r.sequents, depth};
}

}  // namespace linc
