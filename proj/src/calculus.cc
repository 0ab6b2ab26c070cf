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

#include "linc/calculus.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "linc/unify.h"

namespace linc {

std::string Sequent::str() const {
  std::string s;
  for (size_t i = 0; i < hyps.size(); ++i) {
    if (i) s += ", ";
    s += to_string(hyps[i]);
  }
  return s + (hyps.empty() ? "--> " : " --> ") + to_string(concl);
}

bool same_multiset(const std::vector<Term>& a, const std::vector<Term>& b) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const Term& x : a) {
    bool found = false;
    for (size_t j = 0; j < b.size(); ++j) {
      if (!used[j] && b[j] == x) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

bool same_sequent(const Sequent& a, const Sequent& b) {
  return a.concl == b.concl && same_multiset(a.hyps, b.hyps);
}

std::map<uint64_t, Var> sequent_fvars(const Sequent& s) {
  std::map<uint64_t, Var> out;
  for (const Term& h : s.hyps) collect_fvars(h, &out);
  collect_fvars(s.concl, &out);
  return out;
}

namespace {
struct RuleName {
  Rule rule;
  const char* name;
};
constexpr RuleName kRuleNames[] = {
    {Rule::kCL, "cL"},       {Rule::kWL, "wL"},     {Rule::kBotL, "botL"},
    {Rule::kTopR, "topR"},   {Rule::kAndL1, "andL1"}, {Rule::kAndL2, "andL2"},
    {Rule::kAndR, "andR"},   {Rule::kOrL, "orL"},   {Rule::kOrR1, "orR1"},
    {Rule::kOrR2, "orR2"},   {Rule::kAllL, "allL"}, {Rule::kAllR, "allR"},
    {Rule::kExL, "exL"},     {Rule::kExR, "exR"},   {Rule::kImpL, "impL"},
    {Rule::kImpR, "impR"},   {Rule::kInit, "init"}, {Rule::kMc, "mc"},
    {Rule::kEqL, "eqL"},     {Rule::kEqR, "eqR"},   {Rule::kIL, "IL"},
    {Rule::kIR, "IR"},       {Rule::kCIL, "CIL"},   {Rule::kCIR, "CIR"},
};
}  // namespace

const char* rule_name(Rule r) {
  for (const auto& e : kRuleNames)
    if (e.rule == r) return e.name;
  return "?";
}

std::optional<Rule> rule_from_name(const std::string& s) {
  for (const auto& e : kRuleNames)
    if (s == e.name) return e.rule;
  return std::nullopt;
}

bool is_left_rule(Rule r) {
  switch (r) {
    case Rule::kCL: case Rule::kWL: case Rule::kBotL: case Rule::kAndL1:
    case Rule::kAndL2: case Rule::kOrL: case Rule::kAllL: case Rule::kExL:
    case Rule::kImpL: case Rule::kEqL: case Rule::kIL: case Rule::kCIL:
      return true;
    default:
      return false;
  }
}

Deriv make_deriv(DerivNode n) {
  return std::make_shared<const DerivNode>(std::move(n));
}

Deriv reorder_conclusion(const Deriv& d, const std::vector<Term>& target) {
  const auto& h = d->concl.hyps;
  if (h.size() != target.size())
    throw Error(ErrorCode::kInternalInvariantViolation,
                "reorder: hypothesis count differs");
  bool same = true;
  for (size_t i = 0; i < h.size(); ++i) same = same && (h[i] == target[i]);
  if (same) return d;
  // where[i] = new position of old hypothesis i
  std::vector<int> where(h.size(), -1);
  std::vector<bool> taken(h.size(), false);
  for (size_t j = 0; j < target.size(); ++j) {
    bool found = false;
    for (size_t i = 0; i < h.size(); ++i) {
      if (!taken[i] && h[i] == target[j]) {
        taken[i] = true;
        where[i] = static_cast<int>(j);
        found = true;
        break;
      }
    }
    if (!found)
      throw Error(ErrorCode::kInternalInvariantViolation,
                  "reorder: " + to_string(target[j]) + " not in " +
                      d->concl.str());
  }
  DerivNode n = *d;
  n.concl.hyps = target;
  if (n.principal >= 0 && is_left_rule(n.rule)) n.principal = where[n.principal];
  return make_deriv(std::move(n));
}

const char* check_error_name(CheckError e) {
  switch (e) {
    case CheckError::kRuleShape: return "rule-shape";
    case CheckError::kContext: return "context";
    case CheckError::kEigenvariable: return "eigenvariable";
    case CheckError::kWitness: return "witness";
    case CheckError::kEqLCoverage: return "eqL-coverage";
    case CheckError::kEqRMismatch: return "eqR-mismatch";
    case CheckError::kInit: return "init";
    case CheckError::kMulticut: return "multicut";
    case CheckError::kFixpoint: return "fixpoint";
    case CheckError::kNotAPattern: return "not-a-pattern";
    case CheckError::kMalformed: return "malformed";
  }
  return "?";
}

std::optional<CheckError> check_error_from_name(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(CheckError::kMalformed); ++i) {
    auto e = static_cast<CheckError>(i);
    if (s == check_error_name(e)) return e;
  }
  return std::nullopt;
}

std::string CheckReport::str() const {
  if (ok) return "ok";
  std::ostringstream o;
  for (const auto& f : failures) {
    o << "at [" << f.path << "] " << rule_name(f.rule) << " ("
      << check_error_name(f.kind) << "): " << f.message << "\n";
  }
  return o.str();
}

// ------------------------------------------------------------- checking

namespace {

struct Fail {
  CheckError kind;
  std::string msg;
};

bool is_op(const Term& f, LogicOp op, size_t nargs) {
  const Term& h = f.spine_head();
  return h.kind() == Term::Kind::kLogic && h.op() == op &&
         f.spine_args().size() == nargs;
}

std::vector<Term> without(const std::vector<Term>& h, int k) {
  std::vector<Term> out;
  for (int i = 0; i < static_cast<int>(h.size()); ++i)
    if (i != k) out.push_back(h[i]);
  return out;
}

std::vector<Term> with(std::vector<Term> h, const Term& f) {
  h.push_back(f);
  return h;
}

void expect(const DerivNode& n, size_t i, const Sequent& want) {
  const Sequent& got = n.premises[i]->concl;
  if (!same_sequent(got, want))
    throw Fail{CheckError::kContext, "premise " + std::to_string(i) +
                                         " is " + got.str() + ", expected " +
                                         want.str()};
}

void need_premises(const DerivNode& n, size_t k) {
  if (n.premises.size() != k)
    throw Fail{CheckError::kMalformed,
               "expected " + std::to_string(k) + " premises, got " +
                   std::to_string(n.premises.size())};
  for (const auto& p : n.premises)
    if (!p) throw Fail{CheckError::kMalformed, "null premise"};
}

const Term& principal(const DerivNode& n) {
  if (n.principal < 0 ||
      n.principal >= static_cast<int>(n.concl.hyps.size()))
    throw Fail{CheckError::kMalformed, "principal index out of range"};
  return n.concl.hyps[n.principal];
}

void check_formula(const Term& f, const Signature& sig) {
  Type t;
  try {
    t = typecheck(f, &sig);
  } catch (const Error& e) {
    throw Fail{CheckError::kMalformed, e.what()};
  }
  if (!t.is_prop())
    throw Fail{CheckError::kMalformed, to_string(f) + " is not a formula"};
  if (has_loose_bvars(f))
    throw Fail{CheckError::kMalformed, "open formula " + to_string(f)};
  if (!is_normal(f))
    throw Fail{CheckError::kMalformed, to_string(f) + " is not normal"};
}

void check_witness(const DerivNode& n, const Type& want,
                   const Signature& sig) {
  if (!n.term) throw Fail{CheckError::kMalformed, "missing witness"};
  Type t;
  try {
    t = typecheck(*n.term, &sig);
  } catch (const Error& e) {
    throw Fail{CheckError::kWitness, e.what()};
  }
  if (t != want)
    throw Fail{CheckError::kWitness, "witness " + to_string(*n.term) +
                                         " has type " + t.str() +
                                         ", expected " + want.str()};
  if (has_loose_bvars(*n.term) || !is_normal(*n.term))
    throw Fail{CheckError::kWitness, "witness is not a normal closed term"};
}

// The eigenvariables must be distinct, of the given types, and absent
// from the conclusion.
void check_eigen(const DerivNode& n, const std::vector<Type>& types) {
  if (n.eigen.size() != types.size())
    throw Fail{CheckError::kMalformed,
               "expected " + std::to_string(types.size()) +
                   " eigenvariables"};
  auto fv = sequent_fvars(n.concl);
  std::set<uint64_t> seen;
  for (size_t i = 0; i < types.size(); ++i) {
    const Var& y = n.eigen[i];
    if (y.type != types[i])
      throw Fail{CheckError::kEigenvariable,
                 "eigenvariable " + y.name + " has type " + y.type.str() +
                     ", expected " + types[i].str()};
    if (fv.count(y.id))
      throw Fail{CheckError::kEigenvariable,
                 "eigenvariable " + y.name +
                     " is free in the conclusion"};
    if (!seen.insert(y.id).second)
      throw Fail{CheckError::kEigenvariable,
                 "eigenvariable " + y.name + " repeated"};
  }
}

std::vector<Term> as_terms(const std::vector<Var>& vs) {
  std::vector<Term> out;
  for (const Var& v : vs) out.push_back(normalize(Term::FVar(v)));
  return out;
}

const DefClause& fixpoint(const Term& atom, const DefTable& table,
                          Flavor want, const char* rule) {
  auto p = defined_head(atom, table);
  if (!p)
    throw Fail{CheckError::kFixpoint, std::string(rule) + " on " +
                                          to_string(atom) +
                                          ", which is not a defined atom"};
  const DefClause* c = table.find(*p);
  if (c->flavor != want)
    throw Fail{CheckError::kFixpoint,
               std::string(rule) + " on " + *p + ", which is " +
                   (c->flavor == Flavor::kInductive ? "inductive"
                                                    : "co-inductive")};
  return *c;
}

void check_invariant(const DerivNode& n, const DefClause& c,
                     const Signature& sig) {
  if (!n.term) throw Fail{CheckError::kMalformed, "missing invariant"};
  Type t;
  try {
    t = typecheck(*n.term, &sig);
  } catch (const Error& e) {
    throw Fail{CheckError::kWitness, e.what()};
  }
  if (t != c.type)
    throw Fail{CheckError::kWitness, "invariant has type " + t.str() +
                                         ", expected " + c.type.str()};
  if (!fvars(*n.term).empty() || has_loose_bvars(*n.term))
    throw Fail{CheckError::kWitness,
               "invariant " + to_string(*n.term) + " is not closed"};
  if (!is_normal(*n.term))
    throw Fail{CheckError::kWitness, "invariant is not normal"};
}

void check_node_or_throw(const DerivNode& n, const DefTable& table,
                         const CheckOptions& opts) {
  const Signature& sig = table.sig();
  const auto& H = n.concl.hyps;
  const Term& C = n.concl.concl;
  for (const Term& h : H) check_formula(h, sig);
  check_formula(C, sig);

  switch (n.rule) {
    case Rule::kCL: {
      need_premises(n, 1);
      const Term& b = principal(n);
      expect(n, 0, {with(H, b), C});
      return;
    }
    case Rule::kWL: {
      need_premises(n, 1);
      principal(n);
      expect(n, 0, {without(H, n.principal), C});
      return;
    }
    case Rule::kBotL: {
      need_premises(n, 0);
      if (!is_op(principal(n), LogicOp::kBot, 0))
        throw Fail{CheckError::kRuleShape, "principal formula is not ff"};
      return;
    }
    case Rule::kTopR: {
      need_premises(n, 0);
      if (!is_op(C, LogicOp::kTop, 0))
        throw Fail{CheckError::kRuleShape, "conclusion is not tt"};
      return;
    }
    case Rule::kAndL1:
    case Rule::kAndL2: {
      need_premises(n, 1);
      const Term& f = principal(n);
      if (!is_op(f, LogicOp::kAnd, 2))
        throw Fail{CheckError::kRuleShape, "principal formula is not /\\"};
      const Term& part = f.args()[n.rule == Rule::kAndL1 ? 0 : 1];
      expect(n, 0, {with(without(H, n.principal), part), C});
      return;
    }
    case Rule::kAndR: {
      need_premises(n, 2);
      if (!is_op(C, LogicOp::kAnd, 2))
        throw Fail{CheckError::kRuleShape, "conclusion is not /\\"};
      expect(n, 0, {H, C.args()[0]});
      expect(n, 1, {H, C.args()[1]});
      return;
    }
    case Rule::kOrL: {
      need_premises(n, 2);
      const Term& f = principal(n);
      if (!is_op(f, LogicOp::kOr, 2))
        throw Fail{CheckError::kRuleShape, "principal formula is not \\/"};
      auto rest = without(H, n.principal);
      expect(n, 0, {with(rest, f.args()[0]), C});
      expect(n, 1, {with(rest, f.args()[1]), C});
      return;
    }
    case Rule::kOrR1:
    case Rule::kOrR2: {
      need_premises(n, 1);
      if (!is_op(C, LogicOp::kOr, 2))
        throw Fail{CheckError::kRuleShape, "conclusion is not \\/"};
      expect(n, 0, {H, C.args()[n.rule == Rule::kOrR1 ? 0 : 1]});
      return;
    }
    case Rule::kAllL:
    case Rule::kExL: {
      need_premises(n, 1);
      const Term& f = principal(n);
      LogicOp op = n.rule == Rule::kAllL ? LogicOp::kForall : LogicOp::kExists;
      if (!is_op(f, op, 1))
        throw Fail{CheckError::kRuleShape,
                   std::string("principal formula is not ") +
                       logic_op_name(op)};
      const Term& lam = f.args()[0];
      Type tau = f.spine_head().type();
      Term inst;
      if (n.rule == Rule::kAllL) {
        check_witness(n, tau, sig);
        inst = beta_apply(lam, {*n.term});
      } else {
        check_eigen(n, {tau});
        inst = beta_apply(lam, {Term::FVar(n.eigen[0])});
      }
      expect(n, 0, {with(without(H, n.principal), inst), C});
      return;
    }
    case Rule::kAllR:
    case Rule::kExR: {
      need_premises(n, 1);
      LogicOp op = n.rule == Rule::kAllR ? LogicOp::kForall : LogicOp::kExists;
      if (!is_op(C, op, 1))
        throw Fail{CheckError::kRuleShape,
                   std::string("conclusion is not ") + logic_op_name(op)};
      const Term& lam = C.args()[0];
      Type tau = C.spine_head().type();
      Term inst;
      if (n.rule == Rule::kExR) {
        check_witness(n, tau, sig);
        inst = beta_apply(lam, {*n.term});
      } else {
        check_eigen(n, {tau});
        inst = beta_apply(lam, {Term::FVar(n.eigen[0])});
      }
      expect(n, 0, {H, inst});
      return;
    }
    case Rule::kImpL: {
      need_premises(n, 2);
      const Term& f = principal(n);
      if (!is_op(f, LogicOp::kImp, 2))
        throw Fail{CheckError::kRuleShape, "principal formula is not =>"};
      auto rest = without(H, n.principal);
      expect(n, 0, {rest, f.args()[0]});
      expect(n, 1, {with(rest, f.args()[1]), C});
      return;
    }
    case Rule::kImpR: {
      need_premises(n, 1);
      if (!is_op(C, LogicOp::kImp, 2))
        throw Fail{CheckError::kRuleShape, "conclusion is not =>"};
      expect(n, 0, {with(H, C.args()[0]), C.args()[1]});
      return;
    }
    case Rule::kInit: {
      need_premises(n, 0);
      if (!is_atomic(C))
        throw Fail{CheckError::kInit, to_string(C) + " is not atomic"};
      if (H.size() != 1 || H[0] != C)
        throw Fail{CheckError::kInit,
                   "sequent " + n.concl.str() + " is not C --> C"};
      return;
    }
    case Rule::kMc: {
      size_t m = n.cut_pos.size();
      if (n.premises.size() != m + 1)
        throw Fail{CheckError::kMalformed, "mc needs one premise per cut "
                                           "formula plus the major premise"};
      for (const auto& p : n.premises)
        if (!p) throw Fail{CheckError::kMalformed, "null premise"};
      if (m == 0 && !opts.allow_empty_mc)
        throw Fail{CheckError::kMulticut, "mc with no cut formulas"};
      const Sequent& major = n.premises.back()->concl;
      std::vector<bool> cut(major.hyps.size(), false);
      for (size_t i = 0; i < m; ++i) {
        int pos = n.cut_pos[i];
        if (pos < 0 || pos >= static_cast<int>(major.hyps.size()) || cut[pos])
          throw Fail{CheckError::kMulticut, "bad cut position"};
        cut[pos] = true;
        const Term& b = n.premises[i]->concl.concl;
        if (major.hyps[pos] != b)
          throw Fail{CheckError::kMulticut,
                     "cut formula " + std::to_string(i) + " is " +
                         to_string(b) + " but the major premise has " +
                         to_string(major.hyps[pos])};
      }
      std::vector<Term> want;
      for (size_t i = 0; i < m; ++i)
        for (const Term& d : n.premises[i]->concl.hyps) want.push_back(d);
      for (size_t j = 0; j < major.hyps.size(); ++j)
        if (!cut[j]) want.push_back(major.hyps[j]);
      if (!same_multiset(want, H))
        throw Fail{CheckError::kContext,
                   "hypotheses do not split into the premises' contexts"};
      if (major.concl != C)
        throw Fail{CheckError::kContext,
                   "major premise concludes " + to_string(major.concl)};
      return;
    }
    case Rule::kEqL: {
      const Term& f = principal(n);
      if (!is_op(f, LogicOp::kEq, 2))
        throw Fail{CheckError::kRuleShape, "principal formula is not ="};
      const Term& s = f.args()[0];
      const Term& t = f.args()[1];
      std::vector<Subst> want;
      try {
        want = csu(s, t);
      } catch (const Error& e) {
        throw Fail{CheckError::kNotAPattern, e.what()};
      }
      if (n.unifiers.size() != n.premises.size())
        throw Fail{CheckError::kMalformed,
                   "one unifier per premise is required"};
      if (want.size() != n.unifiers.size())
        throw Fail{CheckError::kEqLCoverage,
                   "csu(" + to_string(s) + ", " + to_string(t) + ") has " +
                       std::to_string(want.size()) + " element(s), node has " +
                       std::to_string(n.unifiers.size())};
      if (want.empty()) return;
      need_premises(n, 1);
      const Subst& rho = n.unifiers[0];
      if (subst_apply(s, rho) != subst_apply(t, rho))
        throw Fail{CheckError::kEqLCoverage,
                   rho.str() + " is not a unifier"};
      std::vector<Term> vs;
      for (const auto& [id, v] : sequent_fvars(n.concl))
        vs.push_back(normalize(Term::FVar(v)));
      std::vector<Term> a, b;
      for (const Term& v : vs) {
        a.push_back(subst_apply(v, rho));
        b.push_back(subst_apply(v, want[0]));
      }
      if (!variant_terms(a, b))
        throw Fail{CheckError::kEqLCoverage,
                   rho.str() + " is not the most general unifier " +
                       want[0].str()};
      std::vector<Term> rest;
      for (const Term& h : without(H, n.principal))
        rest.push_back(subst_apply(h, rho));
      expect(n, 0, {rest, subst_apply(C, rho)});
      return;
    }
    case Rule::kEqR: {
      need_premises(n, 0);
      if (!is_op(C, LogicOp::kEq, 2))
        throw Fail{CheckError::kRuleShape, "conclusion is not ="};
      if (C.args()[0] != C.args()[1])
        throw Fail{CheckError::kEqRMismatch,
                   to_string(C.args()[0]) + " and " + to_string(C.args()[1]) +
                       " differ"};
      return;
    }
    case Rule::kIR:
    case Rule::kCIL: {
      need_premises(n, 1);
      bool right = n.rule == Rule::kIR;
      const Term& atom = right ? C : principal(n);
      const DefClause& c =
          fixpoint(atom, table,
                   right ? Flavor::kInductive : Flavor::kCoinductive,
                   rule_name(n.rule));
      Term unf = unfold_body(c.pred, atom.spine_args(),
                             Term::Const(c.pred, c.type), table);
      if (right)
        expect(n, 0, {H, unf});
      else
        expect(n, 0, {with(without(H, n.principal), unf), C});
      return;
    }
    case Rule::kIL: {
      need_premises(n, 2);
      const Term& atom = principal(n);
      const DefClause& c = fixpoint(atom, table, Flavor::kInductive, "IL");
      check_invariant(n, c, sig);
      check_eigen(n, c.type.args());
      auto ys = as_terms(n.eigen);
      const Term& S = *n.term;
      expect(n, 0, Sequent{std::vector<Term>{unfold_body(c.pred, ys, S, table)},
                         beta_apply(S, ys)});
      expect(n, 1,
             Sequent{with(without(H, n.principal), beta_apply(S, atom.spine_args())),
                     C});
      return;
    }
    case Rule::kCIR: {
      need_premises(n, 2);
      const DefClause& c = fixpoint(C, table, Flavor::kCoinductive, "CIR");
      check_invariant(n, c, sig);
      check_eigen(n, c.type.args());
      auto ys = as_terms(n.eigen);
      const Term& S = *n.term;
      expect(n, 0, Sequent{H, beta_apply(S, C.spine_args())});
      expect(n, 1, Sequent{std::vector<Term>{beta_apply(S, ys)},
                         unfold_body(c.pred, ys, S, table)});
      return;
    }
  }
  throw Fail{CheckError::kMalformed, "unknown rule"};
}

void check_rec(const Deriv& d, const DefTable& table,
               const CheckOptions& opts, const std::string& path,
               CheckReport* rep) {
  if (rep->failures.size() >= opts.max_failures) return;
  if (!d) {
    rep->ok = false;
    rep->failures.push_back(
        {path, Rule::kInit, CheckError::kMalformed, "null derivation"});
    return;
  }
  if (auto f = check_node(*d, table, opts)) {
    f->path = path;
    rep->ok = false;
    rep->failures.push_back(*f);
  }
  for (size_t i = 0; i < d->premises.size(); ++i) {
    if (!d->premises[i]) continue;
    check_rec(d->premises[i], table, opts,
              path.empty() ? std::to_string(i)
                           : path + "." + std::to_string(i),
              rep);
  }
}

}  // namespace

std::optional<CheckFailure> check_node(const DerivNode& n,
                                       const DefTable& table,
                                       const CheckOptions& opts) {
  try {
    check_node_or_throw(n, table, opts);
  } catch (const Fail& f) {
    return CheckFailure{"", n.rule, f.kind, f.msg};
  } catch (const Error& e) {
    return CheckFailure{"", n.rule, CheckError::kMalformed, e.what()};
  } catch (const std::exception& e) {
    return CheckFailure{"", n.rule, CheckError::kMalformed, e.what()};
  }
  return std::nullopt;
}

CheckReport check_derivation(const Deriv& d, const DefTable& table,
                             const CheckOptions& opts) {
  CheckReport rep;
  check_rec(d, table, opts, "", &rep);
  return rep;
}

bool is_cut_free(const Deriv& d) {
  if (d->rule == Rule::kMc) return false;
  for (const auto& p : d->premises)
    if (!is_cut_free(p)) return false;
  return true;
}

const Sequent& end_sequent(const Deriv& d) { return d->concl; }

size_t deriv_size(const Deriv& d) {
  size_t n = 1;
  for (const auto& p : d->premises) n += deriv_size(p);
  return n;
}

namespace {
void deriv_str_rec(const Deriv& d, int depth, std::string* out) {
  out->append(2 * depth, ' ');
  out->append(rule_name(d->rule));
  if (is_left_rule(d->rule)) out->append(" @" + std::to_string(d->principal));
  if (d->term) out->append(" (" + to_string(*d->term) + ")");
  for (const Var& v : d->eigen)
    out->append(" " + v.name + "#" + std::to_string(v.id));
  if (!d->cut_pos.empty()) {
    out->append(" [");
    for (size_t i = 0; i < d->cut_pos.size(); ++i)
      out->append((i ? " " : "") + std::to_string(d->cut_pos[i]));
    out->append("]");
  }
  for (const Subst& s : d->unifiers) out->append(" " + s.str());
  out->append("  :  " + d->concl.str() + "\n");
  for (const auto& p : d->premises) deriv_str_rec(p, depth + 1, out);
}
}  // namespace

std::string deriv_str(const Deriv& d) {
  std::string out;
  deriv_str_rec(d, 0, &out);
  return out;
}

size_t count_rule(const Deriv& d, Rule r) {
  size_t n = d->rule == r ? 1 : 0;
  for (const auto& p : d->premises) n += count_rule(p, r);
  return n;
}

std::map<uint64_t, Var> internal_vars(const DerivNode& n) {
  std::map<uint64_t, Var> all;
  for (const auto& p : n.premises) {
    for (const Term& h : p->concl.hyps) collect_fvars(h, &all);
    collect_fvars(p->concl.concl, &all);
  }
  if (n.term) collect_fvars(*n.term, &all);
  for (const Var& v : n.eigen) all.emplace(v.id, v);
  for (const Subst& s : n.unifiers)
    for (const auto& [id, v] : s.range_vars()) all.emplace(id, v);
  auto outer = sequent_fvars(n.concl);
  for (const auto& [id, v] : outer) all.erase(id);
  return all;
}

// ------------------------------------------------------- alpha equality

namespace {

struct Bij {
  std::map<uint64_t, uint64_t> fwd, bwd;

  bool var(const Var& a, const Var& b) {
    auto f = fwd.find(a.id);
    if (f != fwd.end()) return f->second == b.id;
    if (bwd.count(b.id)) return false;
    if (a.type != b.type) return false;
    fwd[a.id] = b.id;
    bwd[b.id] = a.id;
    return true;
  }
};

bool teq(const Term& a, const Term& b, Bij& m) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Term::Kind::kFVar: return m.var(a.var(), b.var());
    case Term::Kind::kLam:
      return a.type() == b.type() && teq(a.body(), b.body(), m);
    case Term::Kind::kApp: {
      if (a.args().size() != b.args().size()) return false;
      if (!teq(a.head(), b.head(), m)) return false;
      for (size_t i = 0; i < a.args().size(); ++i)
        if (!teq(a.args()[i], b.args()[i], m)) return false;
      return true;
    }
    default: return a == b;
  }
}

bool seq_eq(const Sequent& a, const Sequent& b, Bij& m) {
  if (a.hyps.size() != b.hyps.size()) return false;
  for (size_t i = 0; i < a.hyps.size(); ++i)
    if (!teq(a.hyps[i], b.hyps[i], m)) return false;
  return teq(a.concl, b.concl, m);
}

bool deq(const Deriv& a, const Deriv& b, Bij m) {
  if (a->rule != b->rule) return false;
  if (!seq_eq(a->concl, b->concl, m)) return false;
  if (is_left_rule(a->rule) && a->principal != b->principal) return false;
  if (a->term.has_value() != b->term.has_value()) return false;
  if (a->term && !teq(*a->term, *b->term, m)) return false;
  if (a->eigen.size() != b->eigen.size()) return false;
  for (size_t i = 0; i < a->eigen.size(); ++i)
    if (!m.var(a->eigen[i], b->eigen[i])) return false;
  if (a->cut_pos != b->cut_pos) return false;
  if (a->unifiers.size() != b->unifiers.size()) return false;
  for (size_t i = 0; i < a->unifiers.size(); ++i) {
    const Subst& x = a->unifiers[i];
    const Subst& y = b->unifiers[i];
    if (x.size() != y.size()) return false;
    for (const auto& [id, e] : x.entries()) {
      auto f = m.fwd.find(id);
      uint64_t other = f != m.fwd.end() ? f->second : id;
      const Term* r = y.lookup(other);
      if (!r || !teq(e.second, *r, m)) return false;
    }
  }
  if (a->premises.size() != b->premises.size()) return false;
  for (size_t i = 0; i < a->premises.size(); ++i)
    if (!deq(a->premises[i], b->premises[i], m)) return false;
  return true;
}

// Hypotheses as multisets: each of a's is matched greedily with an
// unused equal one of b's. Greedy matching can only miss a match, never
// invent one.
bool multiset_eq(const std::vector<Term>& a, const std::vector<Term>& b, Bij& m) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const Term& h : a) {
    bool found = false;
    for (size_t j = 0; j < b.size() && !found; ++j) {
      if (used[j]) continue;
      Bij trial = m;
      if (teq(h, b[j], trial)) {
        m = std::move(trial);
        used[j] = true;
        found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

const Term* hyp_at(const Deriv& d, int i) {
  const auto& hs = d->concl.hyps;
  return i >= 0 && i < static_cast<int>(hs.size()) ? &hs[i] : nullptr;
}

bool meq(const Deriv& a, const Deriv& b, Bij m) {
  if (a->rule != b->rule) return false;
  if (!multiset_eq(a->concl.hyps, b->concl.hyps, m)) return false;
  if (!teq(a->concl.concl, b->concl.concl, m)) return false;
  if (is_left_rule(a->rule)) {
    const Term* x = hyp_at(a, a->principal);
    const Term* y = hyp_at(b, b->principal);
    if (!x || !y || !teq(*x, *y, m)) return false;
  }
  if (a->term.has_value() != b->term.has_value()) return false;
  if (a->term && !teq(*a->term, *b->term, m)) return false;
  if (a->eigen.size() != b->eigen.size()) return false;
  for (size_t i = 0; i < a->eigen.size(); ++i)
    if (!m.var(a->eigen[i], b->eigen[i])) return false;
  if (a->premises.size() != b->premises.size()) return false;
  if (a->cut_pos.size() != b->cut_pos.size()) return false;
  for (size_t i = 0; i < a->cut_pos.size(); ++i) {
    const Term* x = hyp_at(a->premises.back(), a->cut_pos[i]);
    const Term* y = hyp_at(b->premises.back(), b->cut_pos[i]);
    if (!x || !y || !teq(*x, *y, m)) return false;
  }
  if (a->unifiers.size() != b->unifiers.size()) return false;
  for (size_t i = 0; i < a->unifiers.size(); ++i) {
    const Subst& x = a->unifiers[i];
    const Subst& y = b->unifiers[i];
    if (x.size() != y.size()) return false;
    for (const auto& [id, e] : x.entries()) {
      auto f = m.fwd.find(id);
      uint64_t other = f != m.fwd.end() ? f->second : id;
      const Term* r = y.lookup(other);
      if (!r || !teq(e.second, *r, m)) return false;
    }
  }
  for (size_t i = 0; i < a->premises.size(); ++i)
    if (!meq(a->premises[i], b->premises[i], m)) return false;
  return true;
}

Bij fixed_free(const Deriv& a, const Deriv& b) {
  Bij m;
  for (const Deriv& d : {a, b}) {
    for (const auto& [id, v] : sequent_fvars(d->concl)) {
      m.fwd[id] = id;
      m.bwd[id] = id;
    }
  }
  return m;
}

}  // namespace

bool deriv_multiset_eq(const Deriv& a, const Deriv& b) {
  return meq(a, b, fixed_free(a, b));
}

bool deriv_alpha_eq(const Deriv& a, const Deriv& b, bool rename_free) {
  Bij m;
  if (!rename_free) {
    for (const Deriv& d : {a, b}) {
      for (const auto& [id, v] : sequent_fvars(d->concl)) {
        m.fwd[id] = id;
        m.bwd[id] = id;
      }
    }
  }
  return deq(a, b, m);
}

bool variant_terms(const std::vector<Term>& a, const std::vector<Term>& b) {
  if (a.size() != b.size()) return false;
  Bij m;
  for (size_t i = 0; i < a.size(); ++i)
    if (!teq(a[i], b[i], m)) return false;
  return true;
}

}  // namespace linc
