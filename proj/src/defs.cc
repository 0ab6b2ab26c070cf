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

#include "linc/defs.h"

#include <algorithm>
#include <functional>
#include <set>

namespace linc {

void DefTable::add_clause(const std::string& pred, Flavor flavor,
                          const Term& open_body) {
  if (index_.count(pred))
    throw Error(ErrorCode::kDuplicateName, "second clause for " + pred);
  if (!sig_.is_predicate(pred))
    throw Error(ErrorCode::kUnknownPredicate, pred);
  Type pt = sig_.const_type(pred);
  Type bt = typecheck(open_body, &sig_);
  if (bt != pt)
    throw Error(ErrorCode::kTypeMismatch, "body of " + pred + " has type " +
                                              bt.str() + ", expected " +
                                              pt.str());
  if (!fvars(open_body).empty() || has_loose_bvars(open_body))
    throw Error(ErrorCode::kTypeMismatch, "body of " + pred + " is not closed");
  Var self = fresh_var(pred, pt);
  Term body = abstract({self}, replace_const(normalize(open_body), pred,
                                             Term::FVar(self)));
  index_[pred] = clauses_.size();
  clauses_.push_back({pred, pt, flavor, normalize(body)});
}

const DefClause* DefTable::find(const std::string& pred) const {
  auto it = index_.find(pred);
  return it == index_.end() ? nullptr : &clauses_[it->second];
}

std::optional<int> DefTable::level(const std::string& pred) const {
  auto it = levels_.find(pred);
  if (it != levels_.end()) return it->second;
  if (!find(pred)) return 0;
  return std::nullopt;
}

LevelMap DefTable::level_map() const {
  LevelMap lm;
  for (const auto& c : sig_.consts()) {
    if (!sig_.is_predicate(c)) continue;
    if (auto l = level(c)) lm[c] = *l;
  }
  return lm;
}

namespace {

Term open_quant_body(const Term& lam) {
  Var y = fresh_var(lam.name().empty() ? "y" : lam.name(), lam.type());
  return normalize(instantiate_bvar(lam.body(), Term::FVar(y)));
}

std::optional<Type> const_type_in(const Term& t, const std::string& name) {
  switch (t.kind()) {
    case Term::Kind::kConst:
      if (t.name() == name) return t.type();
      return std::nullopt;
    case Term::Kind::kLam: return const_type_in(t.body(), name);
    case Term::Kind::kApp: {
      if (auto r = const_type_in(t.head(), name)) return r;
      for (const Term& a : t.args())
        if (auto r = const_type_in(a, name)) return r;
      return std::nullopt;
    }
    default: return std::nullopt;
  }
}

Term vacuous_predicate(const Type& t) {
  Term body = Term::Top();
  std::vector<Type> as = t.args();
  for (auto it = as.rbegin(); it != as.rend(); ++it)
    body = Term::Lam(*it, "", body);
  return body;
}

}  // namespace

int compute_level(const Term& f, const LevelMap& lm) {
  const Term& h = f.spine_head();
  const auto args = f.spine_args();
  switch (h.kind()) {
    case Term::Kind::kConst: {
      auto it = lm.find(h.name());
      if (it == lm.end())
        throw Error(ErrorCode::kUnknownPredicate,
                    "no level for " + h.name());
      return it->second;
    }
    case Term::Kind::kLogic:
      switch (h.op()) {
        case LogicOp::kTop:
        case LogicOp::kBot:
        case LogicOp::kEq: return 0;
        case LogicOp::kAnd:
        case LogicOp::kOr:
          return std::max(compute_level(args.at(0), lm),
                          compute_level(args.at(1), lm));
        case LogicOp::kImp:
          return std::max(compute_level(args.at(0), lm) + 1,
                          compute_level(args.at(1), lm));
        case LogicOp::kForall:
        case LogicOp::kExists:
          return compute_level(open_quant_body(args.at(0)), lm);
      }
      break;
    default: break;
  }
  throw Error(ErrorCode::kUnknownPredicate,
              "formula without a predicate head: " + to_string(f));
}

Term vacuous_instance(const Term& f, const std::string& pred) {
  auto ty = const_type_in(f, pred);
  if (!ty) return f;
  return replace_const(f, pred, vacuous_predicate(*ty));
}

bool dominated_by(const Term& f, const std::string& pred,
                  const LevelMap& lm) {
  auto it = lm.find(pred);
  if (it == lm.end())
    throw Error(ErrorCode::kUnknownPredicate, "no level for " + pred);
  int lp = it->second;
  return compute_level(f, lm) <= lp &&
         compute_level(vacuous_instance(f, pred), lm) < lp;
}

namespace {
Term instantiated_body(const DefClause& c) {
  std::vector<Term> xs;
  for (const Type& a : c.type.args())
    xs.push_back(Term::FVar(fresh_var("x", a)));
  std::vector<Term> args{Term::Const(c.pred, c.type)};
  args.insert(args.end(), xs.begin(), xs.end());
  return beta_apply(c.body, args);
}
}  // namespace

std::vector<StratIssue> check_stratified(const DefTable& table) {
  std::vector<StratIssue> out;
  LevelMap lm = table.level_map();
  for (const DefClause& c : table.clauses()) {
    auto lp = lm.find(c.pred);
    if (lp == lm.end()) {
      out.push_back({c.pred, "level", "no level declared for " + c.pred});
      continue;
    }
    Term b = instantiated_body(c);
    int lb, lv;
    try {
      lb = compute_level(b, lm);
      lv = compute_level(vacuous_instance(b, c.pred), lm);
    } catch (const Error& e) {
      out.push_back({c.pred, "level", e.what()});
      continue;
    }
    if (lb > lp->second) {
      out.push_back({c.pred, "lvl B <= lvl p",
                     "body of " + c.pred + " has level " +
                         std::to_string(lb) + " > " +
                         std::to_string(lp->second)});
    } else if (lv >= lp->second) {
      out.push_back({c.pred, "lvl B[tt/p] < lvl p",
                     "body of " + c.pred + " with " + c.pred +
                         " replaced by tt has level " + std::to_string(lv) +
                         " >= " + std::to_string(lp->second)});
    }
  }
  return out;
}

LevelMap infer_levels(const DefTable& table) {
  LevelMap lm;
  for (const auto& c : table.sig().consts())
    if (table.sig().is_predicate(c) && !table.find(c)) lm[c] = 0;
  // Depth-first over the call graph; a back edge is mutual recursion.
  std::map<std::string, int> state;  // 1 visiting, 2 done
  std::function<void(const DefClause&)> visit = [&](const DefClause& c) {
    if (auto fixed = table.level(c.pred)) {  // declared levels are kept
      lm[c.pred] = *fixed;
      state[c.pred] = 2;
      return;
    }
    state[c.pred] = 1;
    Term b = instantiated_body(c);
    for (const DefClause& d : table.clauses()) {
      if (d.pred == c.pred || !mentions_const(b, d.pred)) continue;
      if (state[d.pred] == 1)
        throw Error(ErrorCode::kNotStratified,
                    "mutual recursion between " + c.pred + " and " + d.pred);
      if (state[d.pred] == 0) visit(d);
    }
    int lv = compute_level(vacuous_instance(b, c.pred), lm);
    lm[c.pred] = lv + 1;
    int lb = compute_level(b, lm);
    if (lb > lm[c.pred])
      throw Error(ErrorCode::kNotStratified,
                  c.pred + " occurs to the left of an implication in its body");
    state[c.pred] = 2;
  };
  for (const DefClause& c : table.clauses())
    if (state[c.pred] == 0) visit(c);
  return lm;
}

Term unfold_body(const std::string& pred, const std::vector<Term>& args,
                 const Term& replacement, const DefTable& table) {
  const DefClause* c = table.find(pred);
  if (!c) throw Error(ErrorCode::kUndefinedPredicate, pred);
  std::vector<Term> all{replacement};
  all.insert(all.end(), args.begin(), args.end());
  return beta_apply(c->body, all);
}

std::optional<std::string> defined_head(const Term& f, const DefTable& t) {
  const Term& h = f.spine_head();
  if (h.is_const() && t.find(h.name())) return h.name();
  return std::nullopt;
}

}  // namespace linc
