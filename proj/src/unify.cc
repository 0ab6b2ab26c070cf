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

#include "linc/unify.h"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>

namespace linc {

std::optional<int> eta_bvar(const Term& t) {
  int k = 0;
  const Term* b = &t;
  while (b->is_lam()) {
    b = &b->body();
    ++k;
  }
  const Term& h = b->spine_head();
  if (h.kind() != Term::Kind::kBVar) return std::nullopt;
  const auto args = b->spine_args();
  if (static_cast<int>(args.size()) != k) return std::nullopt;
  for (int m = 0; m < k; ++m) {
    auto r = eta_bvar(args[m]);
    if (!r || *r != k - 1 - m) return std::nullopt;
  }
  if (h.index() < k) return std::nullopt;
  return h.index() - k;
}

namespace {

struct Equation {
  std::vector<Type> ctx;  // innermost last
  Term a, b;
};

enum class Step { kOk, kFail, kStuck };

class Unifier {
 public:
  explicit Unifier(const std::set<uint64_t>& rigid) : rigid_(rigid) {}

  void add(std::vector<Type> ctx, Term a, Term b) {
    while (a.is_lam() && b.is_lam()) {
      ctx.push_back(a.type());
      Term na = a.body(), nb = b.body();
      a = na;
      b = nb;
    }
    work_.push_back({std::move(ctx), std::move(a), std::move(b)});
  }

  UnifyOutcome run() {
    std::deque<Equation> stuck;
    while (true) {
      bool progress = false;
      while (!work_.empty()) {
        Equation e = std::move(work_.front());
        work_.pop_front();
        Step r = solve(e);
        if (r == Step::kFail) {
          UnifyOutcome out;
          out.status = UnifyStatus::kNoUnifier;
          out.detail = detail_;
          return out;
        }
        if (r == Step::kStuck) {
          stuck.push_back(std::move(e));
        } else {
          progress = true;
        }
      }
      if (stuck.empty() || !progress) break;
      for (auto& e : stuck) work_.push_back(std::move(e));
      stuck.clear();
    }
    UnifyOutcome out;
    if (!stuck.empty()) {
      out.status = UnifyStatus::kNotAPattern;
      out.detail = "outside the pattern fragment: " + to_string(stuck[0].a) +
                   " = " + to_string(stuck[0].b);
      return out;
    }
    out.status = UnifyStatus::kUnifier;
    out.mgu = theta_;
    return out;
  }

 private:
  bool is_flex(const Term& h) const {
    return h.is_fvar() && !rigid_.count(h.var().id);
  }

  // Context indices of pattern arguments, relative to depth `d` (indices
  // below d are local). Requires distinctness.
  static std::optional<std::vector<int>> pattern_args(
      const std::vector<Term>& args) {
    std::vector<int> out;
    for (const Term& a : args) {
      auto r = eta_bvar(a);
      if (!r) return std::nullopt;
      if (std::find(out.begin(), out.end(), *r) != out.end())
        return std::nullopt;
      out.push_back(*r);
    }
    return out;
  }

  void bind(const Var& v, const Term& t) {
    theta_ = subst_compose(theta_, Subst::single(v, t));
  }

  static bool same_rigid_head(const Term& x, const Term& y) {
    if (x.kind() != y.kind()) return false;
    switch (x.kind()) {
      case Term::Kind::kConst: return x.name() == y.name();
      case Term::Kind::kLogic: return x.op() == y.op() && x.type() == y.type();
      case Term::Kind::kBVar: return x.index() == y.index();
      case Term::Kind::kFVar: return x.var().id == y.var().id;
      default: return false;
    }
  }

  Step solve(Equation& e) {
    e.a = subst_apply_in(e.a, theta_, e.ctx);
    e.b = subst_apply_in(e.b, theta_, e.ctx);
    if (e.a == e.b) return Step::kOk;
    // Substitution may expose new leading lambdas only if the equation
    // was at arrow type, which add() already strips.
    const Term& ha = e.a.spine_head();
    const Term& hb = e.b.spine_head();
    const auto aa = e.a.spine_args();
    const auto ab = e.b.spine_args();
    bool fa = is_flex(ha), fb = is_flex(hb);
    if (!fa && !fb) {
      if (!same_rigid_head(ha, hb) || aa.size() != ab.size()) {
        detail_ = "clash: " + to_string(e.a) + " vs " + to_string(e.b);
        return Step::kFail;
      }
      for (size_t i = 0; i < aa.size(); ++i) add(e.ctx, aa[i], ab[i]);
      return Step::kOk;
    }
    auto pa = fa ? pattern_args(aa) : std::nullopt;
    auto pb = fb ? pattern_args(ab) : std::nullopt;
    if (fa && fb && pa && pb) {
      if (ha.var().id == hb.var().id) return same_head(ha.var(), *pa, *pb);
      return flex_flex(ha.var(), *pa, hb.var(), *pb, e);
    }
    Step r = Step::kStuck;
    if (pa) {
      r = flex_term(ha.var(), *pa, e.b, e.ctx);
      if (r != Step::kStuck) return r;
    }
    if (pb) {
      r = flex_term(hb.var(), *pb, e.a, e.ctx);
      if (r != Step::kStuck) return r;
    }
    return Step::kStuck;
  }

  // F u = F v: keep the positions where the arguments agree.
  Step same_head(const Var& f, const std::vector<int>& us,
                 const std::vector<int>& vs) {
    if (us == vs) return Step::kOk;
    std::vector<Type> at = f.type.args();
    Type res = f.type.result();
    int n = static_cast<int>(us.size());
    std::vector<Type> kept_types;
    std::vector<Term> kept_args;
    for (int i = 0; i < n; ++i) {
      if (us[i] == vs[i]) {
        kept_types.push_back(at[i]);
        kept_args.push_back(Term::BVar(n - 1 - i));
      }
    }
    Var h = fresh_var(f.name.empty() ? "H" : f.name, Type::Arrows(kept_types, res));
    Term body = Term::App(Term::FVar(h), kept_args);
    for (int i = n - 1; i >= 0; --i) body = Term::Lam(at[i], "", body);
    bind(f, body);
    return Step::kOk;
  }

  // Bind x (args xs) to an abstraction of y (args ys); needs ys within xs.
  bool bind_var_to_var(const Var& x, const std::vector<int>& xs, const Var& y,
                       const std::vector<int>& ys) {
    std::vector<Term> yargs;
    int n = static_cast<int>(xs.size());
    for (int c : ys) {
      auto it = std::find(xs.begin(), xs.end(), c);
      if (it == xs.end()) return false;
      int i = static_cast<int>(it - xs.begin());
      yargs.push_back(Term::BVar(n - 1 - i));
    }
    std::vector<Type> at = x.type.args();
    Term body = Term::App(Term::FVar(y), yargs);
    for (int i = n - 1; i >= 0; --i) body = Term::Lam(at[i], "", body);
    bind(x, body);
    return true;
  }

  Step flex_flex(const Var& f, const std::vector<int>& us, const Var& g,
                 const std::vector<int>& vs, const Equation&) {
    const Var& later = f.id > g.id ? f : g;
    const Var& earlier = f.id > g.id ? g : f;
    const auto& ls = f.id > g.id ? us : vs;
    const auto& es = f.id > g.id ? vs : us;
    if (bind_var_to_var(later, ls, earlier, es)) return Step::kOk;
    if (bind_var_to_var(earlier, es, later, ls)) return Step::kOk;
    // Fresh head over the shared variables, in the order of us.
    std::vector<int> common;
    for (int c : us)
      if (std::find(vs.begin(), vs.end(), c) != vs.end()) common.push_back(c);
    std::vector<Type> ft = f.type.args();
    std::vector<Type> ht;
    for (int c : common) {
      int i = static_cast<int>(std::find(us.begin(), us.end(), c) - us.begin());
      ht.push_back(ft[i]);
    }
    Var h = fresh_var("H", Type::Arrows(ht, f.type.result()));
    bind_var_to_var(f, us, h, common);
    bind_var_to_var(g, vs, h, common);
    return Step::kOk;
  }

  // Scan t for what blocks F u := t. `allowed` maps context index to the
  // position in u. Records at most one pruning.
  Step scan(const Term& t, int d, bool under_flex, const Var& f,
            const std::map<int, int>& allowed,
            std::optional<std::pair<Var, Term>>* prune) {
    if (t.is_lam()) return scan(t.body(), d + 1, under_flex, f, allowed, prune);
    const Term& h = t.spine_head();
    const auto args = t.spine_args();
    if (h.kind() == Term::Kind::kBVar && h.index() >= d &&
        !allowed.count(h.index() - d)) {
      detail_ = "variable escapes its scope";
      return under_flex ? Step::kStuck : Step::kFail;
    }
    if (is_flex(h)) {
      if (h.var().id == f.id) {
        detail_ = "occurs check: " + (f.name.empty() ? "_" : f.name);
        return under_flex ? Step::kStuck : Step::kFail;
      }
      auto pa = pattern_args(args);
      if (pa) {
        std::vector<int> keep;
        for (int j = 0; j < static_cast<int>(pa->size()); ++j) {
          int idx = (*pa)[j];
          if (idx < d || allowed.count(idx - d)) keep.push_back(j);
        }
        if (keep.size() < pa->size() && !prune->has_value()) {
          const Var& g = h.var();
          std::vector<Type> gt = g.type.args();
          int m = static_cast<int>(gt.size());
          std::vector<Type> ht;
          std::vector<Term> hargs;
          for (int j : keep) {
            ht.push_back(gt[j]);
            hargs.push_back(Term::BVar(m - 1 - j));
          }
          Var nh = fresh_var(g.name.empty() ? "H" : g.name,
                             Type::Arrows(ht, g.type.result()));
          Term body = Term::App(Term::FVar(nh), hargs);
          for (int j = m - 1; j >= 0; --j) body = Term::Lam(gt[j], "", body);
          *prune = std::make_pair(g, body);
        }
        return Step::kOk;
      }
      Step worst = Step::kOk;
      for (const Term& a : args) {
        Step r = scan(a, d, true, f, allowed, prune);
        if (r == Step::kFail) return r;
        if (r == Step::kStuck) worst = r;
      }
      return worst;
    }
    Step worst = Step::kOk;
    for (const Term& a : args) {
      Step r = scan(a, d, under_flex, f, allowed, prune);
      if (r == Step::kFail) return r;
      if (r == Step::kStuck) worst = r;
    }
    return worst;
  }

  // Rename context variables of t to the abstraction over u.
  static Term rebuild(const Term& t, int d, int n,
                      const std::map<int, int>& allowed) {
    switch (t.kind()) {
      case Term::Kind::kBVar:
        if (t.index() >= d) {
          int i = allowed.at(t.index() - d);
          return Term::BVar(d + (n - 1 - i));
        }
        return t;
      case Term::Kind::kLam:
        return Term::Lam(t.type(), t.name(),
                         rebuild(t.body(), d + 1, n, allowed));
      case Term::Kind::kApp: {
        std::vector<Term> as;
        for (const Term& a : t.args()) as.push_back(rebuild(a, d, n, allowed));
        return Term::App(rebuild(t.head(), d, n, allowed), std::move(as));
      }
      default: return t;
    }
  }

  Step flex_term(const Var& f, const std::vector<int>& us, Term t,
                 const std::vector<Type>& ctx) {
    std::map<int, int> allowed;
    for (int i = 0; i < static_cast<int>(us.size()); ++i) allowed[us[i]] = i;
    while (true) {
      std::optional<std::pair<Var, Term>> prune;
      Step r = scan(t, 0, false, f, allowed, &prune);
      if (r == Step::kFail) return r;
      if (prune) {
        bind(prune->first, prune->second);
        t = subst_apply_in(t, theta_, ctx);
        continue;
      }
      if (r == Step::kStuck) return r;
      break;
    }
    int n = static_cast<int>(us.size());
    std::vector<Type> at = f.type.args();
    Term body = rebuild(t, 0, n, allowed);
    for (int i = n - 1; i >= 0; --i) body = Term::Lam(at[i], "", body);
    bind(f, body);
    return Step::kOk;
  }

  std::set<uint64_t> rigid_;
  Subst theta_;
  std::deque<Equation> work_;
  std::string detail_;
};

}  // namespace

UnifyOutcome unify_all(const std::vector<std::pair<Term, Term>>& eqs,
                       const std::set<uint64_t>& rigid) {
  Unifier u(rigid);
  for (const auto& [a, b] : eqs) u.add({}, a, b);
  return u.run();
}

UnifyOutcome pattern_unify(const Term& s, const Term& t,
                           const std::set<uint64_t>& rigid) {
  return unify_all({{s, t}}, rigid);
}

std::vector<Subst> csu(const Term& s, const Term& t) {
  if (s == t) return {Subst()};
  UnifyOutcome out = pattern_unify(s, t);
  switch (out.status) {
    case UnifyStatus::kUnifier: return {out.mgu};
    case UnifyStatus::kNoUnifier: return {};
    case UnifyStatus::kNotAPattern:
      throw Error(ErrorCode::kNotAPattern, out.detail);
  }
  return {};
}

}  // namespace linc
