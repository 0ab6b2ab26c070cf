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

#include "linc/elab.h"

#include <algorithm>
#include <functional>
#include <set>
#include <utility>

#include "linc/transform.h"
#include "linc/unify.h"

namespace linc {

// ------------------------------------------------------- type inference

namespace {

// Types with metavariables, in an arena. Metas are bound destructively.
class TypeInference {
 public:
  enum Kind { kMeta, kBase, kProp, kArrow };
  struct Node {
    Kind kind = kMeta;
    std::string base;
    int a = -1, b = -1;  // arrow parts
    int bound = -1;      // meta binding
  };

  int meta() { return add(Node{}); }
  int prop() {
    Node n;
    n.kind = kProp;
    return add(n);
  }
  int arrow(int a, int b) {
    Node n;
    n.kind = kArrow;
    n.a = a;
    n.b = b;
    return add(n);
  }
  int of(const Type& t) {
    switch (t.kind()) {
      case Type::Kind::kProp: return prop();
      case Type::Kind::kBase: {
        Node n;
        n.kind = kBase;
        n.base = t.name();
        return add(n);
      }
      case Type::Kind::kArrow: return arrow(of(t.dom()), of(t.cod()));
    }
    return prop();
  }

  int find(int n) const {
    while (nodes_[n].kind == kMeta && nodes_[n].bound >= 0) n = nodes_[n].bound;
    return n;
  }

  bool unify(int x, int y) {
    x = find(x);
    y = find(y);
    if (x == y) return true;
    Node& a = nodes_[x];
    Node& b = nodes_[y];
    if (a.kind == kMeta) {
      if (occurs(x, y)) return false;
      a.bound = y;
      return true;
    }
    if (b.kind == kMeta) return unify(y, x);
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case kBase: return a.base == b.base;
      case kProp: return true;
      case kArrow: {
        int a1 = a.a, a2 = a.b, b1 = b.a, b2 = b.b;
        return unify(a1, b1) && unify(a2, b2);
      }
      default: return false;
    }
  }

  std::optional<Type> resolve(int n) const {
    n = find(n);
    const Node& x = nodes_[n];
    switch (x.kind) {
      case kMeta: return std::nullopt;
      case kBase: return Type::Base(x.base);
      case kProp: return Type::Prop();
      case kArrow: {
        auto d = resolve(x.a);
        auto c = resolve(x.b);
        if (!d || !c) return std::nullopt;
        return Type::Arrow(*d, *c);
      }
    }
    return std::nullopt;
  }

  std::string str(int n) const {
    n = find(n);
    const Node& x = nodes_[n];
    switch (x.kind) {
      case kMeta: return "?" + std::to_string(n);
      case kBase: return x.base;
      case kProp: return "o";
      case kArrow: {
        std::string d = str(x.a);
        if (nodes_[find(x.a)].kind == kArrow) d = "(" + d + ")";
        return d + " -> " + str(x.b);
      }
    }
    return "?";
  }

 private:
  int add(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }
  bool occurs(int m, int n) const {
    n = find(n);
    if (n == m) return true;
    const Node& x = nodes_[n];
    return x.kind == kArrow && (occurs(m, x.a) || occurs(m, x.b));
  }

  std::vector<Node> nodes_;
};

[[noreturn]] void fail_at(ErrorCode c, const SrcPos& p, const std::string& m) {
  throw Error(c, p.str() + ": " + m);
}

// Two passes over an expression: collect type constraints, then build
// the kernel term once every binder type is known.
class TermBuilder {
 public:
  TermBuilder(const Signature& sig, const Env& env) : sig_(sig), env_(env) {}

  Term build(const Expr& e, std::optional<Type> expected) {
    std::vector<std::pair<std::string, int>> ctx;
    int t = infer(e, &ctx);
    if (expected && !ti_.unify(t, ti_.of(*expected)))
      fail_at(ErrorCode::kTypeMismatch, e.pos,
              "expected type " + expected->str() + ", got " + ti_.str(t));
    std::vector<std::string> names;
    Term raw = emit(e, &names);
    typecheck(raw, &sig_);
    return normalize(raw);
  }

 private:
  enum class Res { kBound, kEnv, kConst };

  void mismatch(const Expr& e, int want, int got) {
    fail_at(ErrorCode::kTypeMismatch, e.pos,
            "type mismatch at " + print_expr(e) + ": " + ti_.str(want) +
                " vs " + ti_.str(got));
  }
  void unify_or_fail(const Expr& e, int want, int got) {
    if (!ti_.unify(want, got)) mismatch(e, want, got);
  }

  int infer(const Expr& e, std::vector<std::pair<std::string, int>>* ctx) {
    switch (e.kind) {
      case ExprKind::kName: {
        for (auto it = ctx->rbegin(); it != ctx->rend(); ++it)
          if (it->first == e.name) {
            res_[&e] = Res::kBound;
            return it->second;
          }
        if (auto it = env_.find(e.name); it != env_.end()) {
          res_[&e] = Res::kEnv;
          return ti_.of(typecheck(it->second, nullptr));
        }
        if (sig_.has_const(e.name)) {
          res_[&e] = Res::kConst;
          return ti_.of(sig_.const_type(e.name));
        }
        fail_at(ErrorCode::kUnknownConstant, e.pos, "unknown name " + e.name);
      }
      case ExprKind::kApp: {
        int f = infer(e.kids[0], ctx);
        int a = infer(e.kids[1], ctx);
        int r = ti_.meta();
        unify_or_fail(e, f, ti_.arrow(a, r));
        return r;
      }
      case ExprKind::kAbs: case ExprKind::kForall: case ExprKind::kExists: {
        int d = e.type ? ti_.of(annot(*e.type, e.pos)) : ti_.meta();
        binder_[&e] = d;
        ctx->push_back({e.name, d});
        int b = infer(e.kids[0], ctx);
        ctx->pop_back();
        if (e.kind == ExprKind::kAbs) return ti_.arrow(d, b);
        unify_or_fail(e.kids[0], ti_.prop(), b);
        return ti_.prop();
      }
      case ExprKind::kEq: {
        int l = infer(e.kids[0], ctx);
        int r = infer(e.kids[1], ctx);
        unify_or_fail(e, l, r);
        binder_[&e] = l;
        return ti_.prop();
      }
      case ExprKind::kAnd: case ExprKind::kOr: case ExprKind::kImp:
        for (const Expr& k : e.kids) unify_or_fail(k, ti_.prop(), infer(k, ctx));
        return ti_.prop();
      case ExprKind::kTop: case ExprKind::kBot:
        return ti_.prop();
    }
    return ti_.prop();
  }

  Type annot(const TypeExpr& t, const SrcPos& pos) const {
    if (!t.arrow.empty())
      return Type::Arrow(annot(t.arrow[0], pos), annot(t.arrow[1], pos));
    if (t.base == "o") return Type::Prop();
    if (!sig_.has_type(t.base))
      fail_at(ErrorCode::kUnknownConstant, pos, "unknown type " + t.base);
    return Type::Base(t.base);
  }

  Type binder_type(const Expr& e, bool quantified) {
    auto t = ti_.resolve(binder_.at(&e));
    std::string what = e.kind == ExprKind::kEq ? "the equation " + print_expr(e)
                                                : e.name;
    if (!t)
      fail_at(ErrorCode::kTypeMismatch, e.pos,
              "cannot infer the type of " + what);
    if (quantified && !t->quantifiable())
      fail_at(ErrorCode::kIllegalOInQuantifier, e.pos,
              "type " + t->str() + " of " + what + " mentions o");
    return *t;
  }

  Term emit(const Expr& e, std::vector<std::string>* names) {
    switch (e.kind) {
      case ExprKind::kName:
        switch (res_.at(&e)) {
          case Res::kBound: {
            for (int i = static_cast<int>(names->size()) - 1; i >= 0; --i)
              if ((*names)[i] == e.name)
                return Term::BVar(static_cast<int>(names->size()) - 1 - i);
            break;
          }
          case Res::kEnv: return env_.at(e.name);
          case Res::kConst: return sig_.constant(e.name);
        }
        fail_at(ErrorCode::kInternalInvariantViolation, e.pos, "lost binder");
      case ExprKind::kApp:
        return Term::App(emit(e.kids[0], names), {emit(e.kids[1], names)});
      case ExprKind::kAbs: case ExprKind::kForall: case ExprKind::kExists: {
        Type t = binder_type(e, e.kind != ExprKind::kAbs);
        names->push_back(e.name);
        Term b = emit(e.kids[0], names);
        names->pop_back();
        if (e.kind == ExprKind::kAbs) return Term::Lam(t, e.name, b);
        if (e.kind == ExprKind::kForall) return Term::Forall(t, e.name, b);
        return Term::Exists(t, e.name, b);
      }
      case ExprKind::kEq: {
        Type t = binder_type(e, true);
        return Term::Eq(t, emit(e.kids[0], names), emit(e.kids[1], names));
      }
      case ExprKind::kAnd:
        return Term::And(emit(e.kids[0], names), emit(e.kids[1], names));
      case ExprKind::kOr:
        return Term::Or(emit(e.kids[0], names), emit(e.kids[1], names));
      case ExprKind::kImp:
        return Term::Imp(emit(e.kids[0], names), emit(e.kids[1], names));
      case ExprKind::kTop: return Term::Top();
      case ExprKind::kBot: return Term::Bot();
    }
    return Term::Top();
  }

  const Signature& sig_;
  const Env& env_;
  TypeInference ti_;
  std::map<const Expr*, int> binder_;  // binder domain or equation type
  std::map<const Expr*, Res> res_;
};

}  // namespace

Type Elaborator::type(const TypeExpr& t) const {
  if (!t.arrow.empty()) return Type::Arrow(type(t.arrow[0]), type(t.arrow[1]));
  if (t.base == "o") return Type::Prop();
  if (!table_.sig().has_type(t.base))
    throw Error(ErrorCode::kUnknownConstant, "unknown type " + t.base);
  return Type::Base(t.base);
}

Term Elaborator::term(const Expr& e, const Env& env,
                      std::optional<Type> expected) const {
  return TermBuilder(table_.sig(), env).build(e, expected);
}

// ---------------------------------------------------------- declarations

void Elaborator::declare(const Decl& d) {
  if (sealed_)
    throw Error(ErrorCode::kSyntaxError,
                d.pos.str() + ": declarations must precede the first theorem");
  Signature& sig = table_.mutable_sig();
  auto name_clash = [&](const std::string& n) {
    if (sig.has_const(n) || n == "tt" || n == "ff")
      throw Error(ErrorCode::kDuplicateName, d.pos.str() + ": " + n);
  };
  switch (d.kind) {
    case DeclKind::kType:
      if (sig.has_type(d.name) || d.name == "o")
        throw Error(ErrorCode::kDuplicateName, d.pos.str() + ": type " + d.name);
      sig.add_type(d.name);
      return;
    case DeclKind::kConst: {
      Type t = type(d.type);
      for (const auto& n : d.names) {
        name_clash(n);
        sig.add_const(n, t);
      }
      return;
    }
    case DeclKind::kDefine: {
      name_clash(d.name);
      Type t = type(d.type);
      if (!t.result().is_prop())
        throw Error(ErrorCode::kTypeMismatch,
                    d.pos.str() + ": " + d.name + " must have result type o");
      sig.add_const(d.name, t);
      // Bodies wait for seal() so they can mention later predicates.
      pending_.push_back(&d);
      return;
    }
    case DeclKind::kLevel:
      levels_.push_back(&d);
      return;
    default:
      throw Error(ErrorCode::kInternalInvariantViolation,
                  d.pos.str() + ": not a declaration");
  }
}

void Elaborator::seal() {
  if (sealed_) return;
  for (const Decl* d : pending_) {
    Term body = term(d->body, {}, table_.sig().const_type(d->name));
    try {
      table_.add_clause(d->name, d->flavor, body);
    } catch (const Error& e) {
      throw Error(e.code(), d->pos.str() + ": " + e.what());
    }
  }
  for (const Decl* d : levels_) {
    if (!table_.sig().is_predicate(d->name))
      throw Error(ErrorCode::kUnknownPredicate,
                  d->pos.str() + ": level for " + d->name);
    table_.set_level(d->name, d->level);
  }
  if (opts_.infer_levels) {
    LevelMap inferred = infer_levels(table_);
    for (const DefClause& c : table_.clauses())
      if (!table_.level(c.pred)) table_.set_level(c.pred, inferred.at(c.pred));
  }
  for (const DefClause& c : table_.clauses())
    if (!table_.level(c.pred))
      throw Error(ErrorCode::kNotStratified,
                  "no level for " + c.pred +
                      " (declare one or use --infer-levels)");
  auto issues = check_stratified(table_);
  if (!issues.empty()) {
    std::string msg;
    for (const auto& i : issues) {
      if (!msg.empty()) msg += "; ";
      msg += i.clause + ": " + i.message;
    }
    throw Error(ErrorCode::kNotStratified, msg);
  }
  sealed_ = true;
}

Statement Elaborator::statement(const Decl& d) const {
  Statement st;
  for (const Binder& b : d.params) {
    Var v = fresh_var(b.name, type(b.type));
    st.params.push_back(v);
    st.goal.env[b.name] = normalize(Term::FVar(v));
  }
  std::set<std::string> labels;
  for (size_t i = 0; i < d.goal.hyps.size(); ++i) {
    const HypExpr& h = d.goal.hyps[i];
    std::string l = h.label.empty() ? "h" + std::to_string(i + 1) : h.label;
    if (!labels.insert(l).second)
      throw Error(ErrorCode::kDuplicateName,
                  d.pos.str() + ": hypothesis label " + l);
    st.goal.seq.hyps.push_back(formula(h.formula, st.goal.env));
    st.goal.labels.push_back(l);
  }
  st.goal.seq.concl = formula(d.goal.concl, st.goal.env);
  return st;
}

void Elaborator::add_theorem(const std::string& name, const Statement& st,
                             Deriv d) {
  theorems_[name] = Known{st, std::move(d)};
}

// ------------------------------------------------------------- proofs

namespace {

bool is_op(const Term& f, LogicOp op, size_t arity) {
  const Term& h = f.spine_head();
  return h.kind() == Term::Kind::kLogic && h.op() == op &&
         f.spine_args().size() == arity;
}

// Cursor over a step's arguments.
class Args {
 public:
  explicit Args(const ProofStep& s) : s_(s) {}

  bool done() const { return i_ >= s_.args.size(); }
  bool next_is_word(const std::string& w) const {
    return !done() && !s_.args[i_].term && s_.args[i_].word == w;
  }
  bool next_is_term() const { return !done() && s_.args[i_].term.has_value(); }

  std::string word(const char* what) {
    if (done() || s_.args[i_].term)
      throw ProofError(CheckError::kMalformed, pos(),
                       s_.rule + ": expected " + what);
    return s_.args[i_++].word;
  }
  // A parenthesised term, or a bare word read as a name.
  Expr term(const char* what) {
    if (done())
      throw ProofError(CheckError::kMalformed, pos(),
                       s_.rule + ": expected " + what);
    const ProofArg& a = s_.args[i_++];
    if (a.term) return *a.term;
    Expr e;
    e.kind = a.word == "tt"   ? ExprKind::kTop
             : a.word == "ff" ? ExprKind::kBot
                              : ExprKind::kName;
    e.name = a.word;
    e.pos = a.pos;
    return e;
  }
  std::optional<std::string> as_label() {
    if (!next_is_word("as")) return std::nullopt;
    ++i_;
    return word("a label after as");
  }
  void end() {
    if (!done())
      throw ProofError(CheckError::kMalformed, pos(),
                       s_.rule + ": unexpected argument");
  }
  SrcPos pos() const { return done() ? s_.pos : s_.args[i_].pos; }

 private:
  const ProofStep& s_;
  size_t i_ = 0;
};

}  // namespace

class ProofBuilder {
 public:
  explicit ProofBuilder(const Elaborator& el) : el_(el) {}

  Deriv prove(const Goal& g, const ProofStep& s) const {
    const std::string& r = s.rule;
    if (r == "init") return leaf(g, s, Rule::kInit);
    if (r == "topR") return leaf(g, s, Rule::kTopR);
    if (r == "eqR") return leaf(g, s, Rule::kEqR);
    if (r == "id") return id(g, s);
    if (r == "use") return use(g, s);
    if (r == "wL") return weaken(g, s);
    if (r == "cL") return contract(g, s);
    if (r == "botL") return bot_left(g, s);
    if (r == "andL1" || r == "andL2") return and_left(g, s, r == "andL1");
    if (r == "andR") return and_right(g, s);
    if (r == "orL") return or_left(g, s);
    if (r == "orR1" || r == "orR2") return or_right(g, s, r == "orR1");
    if (r == "impL") return imp_left(g, s);
    if (r == "impR") return imp_right(g, s);
    if (r == "allL") return quant_left(g, s, LogicOp::kForall);
    if (r == "exL") return quant_left(g, s, LogicOp::kExists);
    if (r == "allR") return quant_right(g, s, LogicOp::kForall);
    if (r == "exR") return quant_right(g, s, LogicOp::kExists);
    if (r == "eqL") return eq_left(g, s);
    if (r == "IR") return unfold_right(g, s);
    if (r == "CIL") return unfold_left(g, s);
    if (r == "IL") return induction(g, s);
    if (r == "CIR") return coinduction(g, s);
    if (r == "cut") return cut(g, s);
    throw ProofError(CheckError::kMalformed, s.pos, "unknown rule " + r);
  }

 private:
  [[noreturn]] static void fail(CheckError k, const SrcPos& p,
                                const std::string& m) {
    throw ProofError(k, p, m);
  }

  static void need(const ProofStep& s, size_t n) {
    if (s.premises.size() != n)
      fail(CheckError::kMalformed, s.pos,
           s.rule + " takes " + std::to_string(n) + " premise(s), got " +
               std::to_string(s.premises.size()));
  }

  static int find(const Goal& g, const std::string& label, const SrcPos& p) {
    for (size_t i = 0; i < g.labels.size(); ++i)
      if (g.labels[i] == label) return static_cast<int>(i);
    fail(CheckError::kMalformed, p, "no hypothesis labelled " + label);
  }

  static Goal without(const Goal& g, int k) {
    Goal r = g;
    r.seq.hyps.erase(r.seq.hyps.begin() + k);
    r.labels.erase(r.labels.begin() + k);
    return r;
  }

  static Goal with(const Goal& g, const Term& f, const std::string& label,
                   const SrcPos& p) {
    if (std::count(g.labels.begin(), g.labels.end(), label))
      fail(CheckError::kMalformed, p, "label " + label + " is already in use");
    Goal r = g;
    r.seq.hyps.push_back(f);
    r.labels.push_back(label);
    return r;
  }

  static Goal with_concl(const Goal& g, const Term& c) {
    Goal r = g;
    r.seq.concl = c;
    return r;
  }

  // Step environment plus the unambiguous free variables of the goal.
  static Env scope(const Goal& g) {
    Env env = g.env;
    std::map<std::string, int> seen;
    std::map<std::string, Var> pick;
    for (const auto& [id, v] : sequent_fvars(g.seq)) {
      ++seen[v.name];
      pick[v.name] = v;
    }
    for (const auto& [name, n] : seen)
      if (n == 1 && !env.count(name))
        env[name] = normalize(Term::FVar(pick[name]));
    return env;
  }

  Term elab(const Goal& g, const Expr& e, std::optional<Type> want,
            CheckError kind) const {
    try {
      return el_.term(e, scope(g), want);
    } catch (const ProofError&) {
      throw;
    } catch (const Error& err) {
      fail(kind, e.pos, err.what());
    }
  }

  // Reuses the variable a name is bound to when it occurs in the goal,
  // so a proof can (wrongly) pick a non-fresh eigenvariable.
  static Var eigen(Goal* g, const std::string& name, const Type& t) {
    auto it = g->env.find(name);
    if (it != g->env.end() && it->second.is_fvar() &&
        it->second.var().type == t &&
        sequent_fvars(g->seq).count(it->second.var().id))
      return it->second.var();
    Var v = fresh_var(name, t);
    g->env[name] = normalize(Term::FVar(v));
    return v;
  }

  Deriv node(const Goal& g, Rule r, std::vector<Deriv> prem, int principal = -1,
             std::optional<Term> term = std::nullopt,
             std::vector<Var> eig = {}) const {
    DerivNode n;
    n.concl = g.seq;
    n.rule = r;
    n.principal = principal;
    n.term = std::move(term);
    n.eigen = std::move(eig);
    n.premises = std::move(prem);
    return make_deriv(std::move(n));
  }

  Deriv leaf(const Goal& g, const ProofStep& s, Rule r) const {
    Args(s).end();
    need(s, 0);
    return node(g, r, {});
  }

  Deriv id(const Goal& g, const ProofStep& s) const {
    Args a(s);
    int k = -1;
    if (!a.done()) {
      k = find(g, a.word("a label"), s.pos);
    } else {
      for (size_t i = 0; i < g.seq.hyps.size() && k < 0; ++i)
        if (g.seq.hyps[i] == g.seq.concl) k = static_cast<int>(i);
    }
    a.end();
    need(s, 0);
    if (k < 0 || g.seq.hyps[k] != g.seq.concl)
      fail(CheckError::kInit, s.pos,
           "id: no hypothesis is " + to_string(g.seq.concl));
    Deriv d;
    try {
      d = identity_derivation(g.seq.concl);
    } catch (const Error& e) {
      fail(CheckError::kNotAPattern, s.pos, e.what());
    }
    std::vector<Term> rest = without(g, k).seq.hyps;
    return reorder_conclusion(linc::weaken(d, rest), g.seq.hyps);
  }

  Deriv weaken(const Goal& g, const ProofStep& s) const {
    Args a(s);
    std::vector<std::string> labels;
    while (!a.done()) labels.push_back(a.word("a label"));
    if (labels.empty()) fail(CheckError::kMalformed, s.pos, "wL needs a label");
    need(s, 1);
    std::function<Deriv(const Goal&, size_t)> go = [&](const Goal& cur,
                                                       size_t i) -> Deriv {
      if (i == labels.size()) return prove(cur, s.premises[0]);
      int k = find(cur, labels[i], s.pos);
      return node(cur, Rule::kWL, {go(without(cur, k), i + 1)}, k);
    };
    return go(g, 0);
  }

  Deriv contract(const Goal& g, const ProofStep& s) const {
    Args a(s);
    std::string h = a.word("a label");
    int k = find(g, h, s.pos);
    std::string l = a.as_label().value_or("");
    a.end();
    need(s, 1);
    if (l.empty()) {
      l = h + "'";
      while (std::count(g.labels.begin(), g.labels.end(), l)) l += "'";
    }
    return node(g, Rule::kCL,
                {prove(with(g, g.seq.hyps[k], l, s.pos), s.premises[0])}, k);
  }

  Deriv bot_left(const Goal& g, const ProofStep& s) const {
    Args a(s);
    int k = find(g, a.word("a label"), s.pos);
    a.end();
    need(s, 0);
    return node(g, Rule::kBotL, {}, k);
  }

  // Principal hypothesis `h`, checked against op/arity.
  std::pair<int, Term> principal(const Goal& g, Args* a, const ProofStep& s,
                                 LogicOp op, size_t arity) const {
    int k = find(g, a->word("a label"), s.pos);
    const Term& f = g.seq.hyps[k];
    if (!is_op(f, op, arity))
      fail(CheckError::kRuleShape, s.pos,
           s.rule + ": " + to_string(f) + " is not " + logic_op_name(op));
    return {k, f};
  }

  void concl_is(const Goal& g, const ProofStep& s, LogicOp op,
                size_t arity) const {
    if (!is_op(g.seq.concl, op, arity))
      fail(CheckError::kRuleShape, s.pos,
           s.rule + ": conclusion " + to_string(g.seq.concl) + " is not " +
               logic_op_name(op));
  }

  Deriv and_left(const Goal& g, const ProofStep& s, bool first) const {
    Args a(s);
    std::string h = s.args.empty() || s.args[0].term ? "" : s.args[0].word;
    auto [k, f] = principal(g, &a, s, LogicOp::kAnd, 2);
    std::string l = a.as_label().value_or(h);
    a.end();
    need(s, 1);
    Term part = f.spine_args()[first ? 0 : 1];
    Rule r = first ? Rule::kAndL1 : Rule::kAndL2;
    return node(g, r, {prove(with(without(g, k), part, l, s.pos), s.premises[0])},
                k);
  }

  Deriv and_right(const Goal& g, const ProofStep& s) const {
    Args(s).end();
    need(s, 2);
    concl_is(g, s, LogicOp::kAnd, 2);
    auto args = g.seq.concl.spine_args();
    return node(g, Rule::kAndR,
                {prove(with_concl(g, args[0]), s.premises[0]),
                 prove(with_concl(g, args[1]), s.premises[1])});
  }

  Deriv or_left(const Goal& g, const ProofStep& s) const {
    Args a(s);
    std::string h = s.args.empty() || s.args[0].term ? "" : s.args[0].word;
    auto [k, f] = principal(g, &a, s, LogicOp::kOr, 2);
    std::string l = a.as_label().value_or(h);
    a.end();
    need(s, 2);
    Goal rest = without(g, k);
    auto args = f.spine_args();
    return node(g, Rule::kOrL,
                {prove(with(rest, args[0], l, s.pos), s.premises[0]),
                 prove(with(rest, args[1], l, s.pos), s.premises[1])},
                k);
  }

  Deriv or_right(const Goal& g, const ProofStep& s, bool first) const {
    Args(s).end();
    need(s, 1);
    concl_is(g, s, LogicOp::kOr, 2);
    Term part = g.seq.concl.spine_args()[first ? 0 : 1];
    return node(g, first ? Rule::kOrR1 : Rule::kOrR2,
                {prove(with_concl(g, part), s.premises[0])});
  }

  Deriv imp_left(const Goal& g, const ProofStep& s) const {
    Args a(s);
    std::string h = s.args.empty() || s.args[0].term ? "" : s.args[0].word;
    auto [k, f] = principal(g, &a, s, LogicOp::kImp, 2);
    std::string l = a.as_label().value_or(h);
    a.end();
    need(s, 2);
    Goal rest = without(g, k);
    auto args = f.spine_args();
    return node(g, Rule::kImpL,
                {prove(with_concl(rest, args[0]), s.premises[0]),
                 prove(with(rest, args[1], l, s.pos), s.premises[1])},
                k);
  }

  Deriv imp_right(const Goal& g, const ProofStep& s) const {
    Args a(s);
    std::string l;
    if (!a.done()) l = a.word("a label");
    a.end();
    need(s, 1);
    concl_is(g, s, LogicOp::kImp, 2);
    if (l.empty()) {
      int i = static_cast<int>(g.labels.size()) + 1;
      do {
        l = "h" + std::to_string(i++);
      } while (std::count(g.labels.begin(), g.labels.end(), l));
    }
    auto args = g.seq.concl.spine_args();
    Goal p = with_concl(with(g, args[0], l, s.pos), args[1]);
    return node(g, Rule::kImpR, {prove(p, s.premises[0])});
  }

  // allL h (t) [as l]  /  exL h x [as l]
  Deriv quant_left(const Goal& g, const ProofStep& s, LogicOp op) const {
    Args a(s);
    std::string h = s.args.empty() || s.args[0].term ? "" : s.args[0].word;
    auto [k, f] = principal(g, &a, s, op, 1);
    Type tau = f.spine_head().type();
    const Term lam = f.spine_args()[0];
    Goal rest = without(g, k);
    if (op == LogicOp::kForall) {
      Term t = elab(g, a.term("a witness"), tau, CheckError::kWitness);
      std::string l = a.as_label().value_or(h);
      a.end();
      need(s, 1);
      Deriv p = prove(with(rest, beta_apply(lam, {t}), l, s.pos), s.premises[0]);
      return node(g, Rule::kAllL, {p}, k, t);
    }
    std::string x = a.word("an eigenvariable name");
    std::string l = a.as_label().value_or(h);
    a.end();
    need(s, 1);
    Goal inner = g;
    Var y = eigen(&inner, x, tau);
    rest.env = inner.env;
    Term body = beta_apply(lam, {normalize(Term::FVar(y))});
    Deriv p = prove(with(rest, body, l, s.pos), s.premises[0]);
    return node(g, Rule::kExL, {p}, k, std::nullopt, {y});
  }

  // allR x  /  exR (t)
  Deriv quant_right(const Goal& g, const ProofStep& s, LogicOp op) const {
    Args a(s);
    concl_is(g, s, op, 1);
    const Term& c = g.seq.concl;
    Type tau = c.spine_head().type();
    const Term lam = c.spine_args()[0];
    if (op == LogicOp::kExists) {
      Term t = elab(g, a.term("a witness"), tau, CheckError::kWitness);
      a.end();
      need(s, 1);
      return node(g, Rule::kExR,
                  {prove(with_concl(g, beta_apply(lam, {t})), s.premises[0])},
                  -1, t);
    }
    std::string x = a.done() ? lam.name() : a.word("an eigenvariable name");
    a.end();
    need(s, 1);
    Goal p = g;
    Var y = eigen(&p, x, tau);
    p.seq.concl = beta_apply(lam, {normalize(Term::FVar(y))});
    return node(g, Rule::kAllR, {prove(p, s.premises[0])}, -1, std::nullopt,
                {y});
  }

  Deriv eq_left(const Goal& g, const ProofStep& s) const {
    Args a(s);
    auto [k, f] = principal(g, &a, s, LogicOp::kEq, 2);
    a.end();
    auto sides = f.spine_args();
    std::vector<Subst> us;
    try {
      us = csu(sides[0], sides[1]);
    } catch (const Error& e) {
      fail(CheckError::kNotAPattern, s.pos, e.what());
    }
    if (us.size() != s.premises.size())
      fail(CheckError::kEqLCoverage, s.pos,
           "eqL: " + std::to_string(us.size()) + " unifier(s) but " +
               std::to_string(s.premises.size()) + " premise(s)");
    std::vector<Deriv> prem;
    if (!us.empty()) {
      const Subst& rho = us[0];
      Goal p = without(g, k);
      for (Term& h : p.seq.hyps) h = subst_apply(h, rho);
      p.seq.concl = subst_apply(p.seq.concl, rho);
      for (auto& [name, t] : p.env) t = subst_apply(t, rho);
      prem.push_back(prove(p, s.premises[0]));
    }
    DerivNode n;
    n.concl = g.seq;
    n.rule = Rule::kEqL;
    n.principal = k;
    n.unifiers = us;
    n.premises = std::move(prem);
    return make_deriv(std::move(n));
  }

  const DefClause& clause(const Term& atom, const ProofStep& s) const {
    auto p = defined_head(atom, el_.table());
    if (!p)
      fail(CheckError::kRuleShape, s.pos,
           s.rule + ": " + to_string(atom) + " is not a defined atom");
    return *el_.table().find(*p);
  }

  Term self(const DefClause& c) const { return el_.table().sig().constant(c.pred); }

  Deriv unfold_right(const Goal& g, const ProofStep& s) const {
    Args(s).end();
    need(s, 1);
    const DefClause& c = clause(g.seq.concl, s);
    Term b = unfold_body(c.pred, g.seq.concl.spine_args(), self(c), el_.table());
    return node(g, Rule::kIR, {prove(with_concl(g, b), s.premises[0])});
  }

  Deriv unfold_left(const Goal& g, const ProofStep& s) const {
    Args a(s);
    std::string h = s.args.empty() || s.args[0].term ? "" : s.args[0].word;
    int k = find(g, a.word("a label"), s.pos);
    std::string l = a.as_label().value_or(h);
    a.end();
    need(s, 1);
    const Term& atom = g.seq.hyps[k];
    const DefClause& c = clause(atom, s);
    Term b = unfold_body(c.pred, atom.spine_args(), self(c), el_.table());
    return node(g, Rule::kCIL,
                {prove(with(without(g, k), b, l, s.pos), s.premises[0])}, k);
  }

  // The invariant and its parameters, shared by IL and CIR.
  std::pair<Term, std::vector<Var>> invariant(Goal* g, Args* a,
                                              const DefClause& c,
                                              const ProofStep& s) const {
    Term S = elab(*g, a->term("an invariant"), c.type, CheckError::kWitness);
    std::vector<Var> ys;
    for (const Type& t : c.type.args()) {
      std::string y = a->word("a parameter name");
      if (y == "as")
        fail(CheckError::kMalformed, s.pos, s.rule + ": too few parameters");
      ys.push_back(eigen(g, y, t));
    }
    return {S, ys};
  }

  static std::vector<Term> terms(const std::vector<Var>& vs) {
    std::vector<Term> r;
    for (const Var& v : vs) r.push_back(normalize(Term::FVar(v)));
    return r;
  }

  // IL h (S) y1..yn [as l] {invariant proof} {major proof}
  Deriv induction(const Goal& g, const ProofStep& s) const {
    Args a(s);
    std::string h = s.args.empty() || s.args[0].term ? "" : s.args[0].word;
    int k = find(g, a.word("a label"), s.pos);
    const Term& atom = g.seq.hyps[k];
    const DefClause& c = clause(atom, s);
    Goal inner = g;
    auto [S, ys] = invariant(&inner, &a, c, s);
    std::string l = a.as_label().value_or(h);
    a.end();
    need(s, 2);
    Goal inv;
    inv.env = inner.env;
    inv.seq.hyps = {unfold_body(c.pred, terms(ys), S, el_.table())};
    inv.labels = {"inv"};
    inv.seq.concl = beta_apply(S, terms(ys));
    Goal major = with(without(g, k), beta_apply(S, atom.spine_args()), l, s.pos);
    return node(g, Rule::kIL,
                {prove(inv, s.premises[0]), prove(major, s.premises[1])}, k, S,
                ys);
  }

  // CIR (S) y1..yn {major proof} {invariant proof}
  Deriv coinduction(const Goal& g, const ProofStep& s) const {
    Args a(s);
    const DefClause& c = clause(g.seq.concl, s);
    Goal inner = g;
    auto [S, ys] = invariant(&inner, &a, c, s);
    a.end();
    need(s, 2);
    Goal major = with_concl(g, beta_apply(S, g.seq.concl.spine_args()));
    Goal inv;
    inv.env = inner.env;
    inv.seq.hyps = {beta_apply(S, terms(ys))};
    inv.labels = {"inv"};
    inv.seq.concl = unfold_body(c.pred, terms(ys), S, el_.table());
    return node(g, Rule::kCIR,
                {prove(major, s.premises[0]), prove(inv, s.premises[1])}, -1, S,
                ys);
  }

  // cut (F1) as l1 [using h...] (F2) as l2 ... {left1} ... {major}
  Deriv cut(const Goal& g, const ProofStep& s) const {
    Args a(s);
    struct Spec {
      Term f;
      std::string label;
      std::vector<std::string> using_;
    };
    std::vector<Spec> specs;
    while (!a.done()) {
      Spec sp;
      sp.f = elab(g, a.term("a cut formula"), Type::Prop(), CheckError::kMalformed);
      auto l = a.as_label();
      if (!l) fail(CheckError::kMalformed, s.pos, "cut: `as LABEL` is required");
      sp.label = *l;
      if (a.next_is_word("using")) {
        a.word("using");
        while (!a.done() && !a.next_is_term()) sp.using_.push_back(a.word("a label"));
      }
      specs.push_back(std::move(sp));
    }
    need(s, specs.size() + 1);
    Goal rest = g;
    std::vector<Deriv> prem;
    for (size_t i = 0; i < specs.size(); ++i) {
      Goal left;
      left.env = g.env;
      for (const std::string& u : specs[i].using_) {
        int k = find(rest, u, s.pos);
        left.seq.hyps.push_back(rest.seq.hyps[k]);
        left.labels.push_back(u);
        rest = without(rest, k);
      }
      left.seq.concl = specs[i].f;
      prem.push_back(prove(left, s.premises[i]));
    }
    Goal major = rest;
    DerivNode n;
    for (const Spec& sp : specs) {
      n.cut_pos.push_back(static_cast<int>(major.seq.hyps.size()));
      major = with(major, sp.f, sp.label, s.pos);
    }
    prem.push_back(prove(major, s.premises.back()));
    n.concl = g.seq;
    n.rule = Rule::kMc;
    n.premises = std::move(prem);
    return make_deriv(std::move(n));
  }

  // use NAME: an earlier theorem, instantiated to fit the goal. Extra
  // hypotheses of the goal are weakened in.
  Deriv use(const Goal& g, const ProofStep& s) const {
    Args a(s);
    std::string name = a.word("a theorem name");
    a.end();
    need(s, 0);
    auto it = el_.theorems_.find(name);
    if (it == el_.theorems_.end() || !it->second.deriv)
      fail(CheckError::kMalformed, s.pos, "use: no checked theorem " + name);
    const Statement& st = it->second.st;
    const auto& th = st.goal.seq.hyps;
    const auto& gh = g.seq.hyps;
    std::set<uint64_t> rigid;
    for (const auto& [id, v] : sequent_fvars(g.seq)) rigid.insert(id);

    std::vector<int> pick(th.size(), -1);
    std::vector<bool> taken(gh.size(), false);
    std::optional<Subst> found;
    std::function<void(size_t)> search = [&](size_t i) {
      if (found) return;
      if (i == th.size()) {
        std::vector<std::pair<Term, Term>> eqs{{st.goal.seq.concl, g.seq.concl}};
        for (size_t j = 0; j < th.size(); ++j) eqs.push_back({th[j], gh[pick[j]]});
        UnifyOutcome u = unify_all(eqs, rigid);
        if (u.status == UnifyStatus::kUnifier) found = u.mgu;
        return;
      }
      for (size_t j = 0; j < gh.size() && !found; ++j) {
        if (taken[j]) continue;
        taken[j] = true;
        pick[i] = static_cast<int>(j);
        search(i + 1);
        taken[j] = false;
      }
    };
    search(0);
    if (!found)
      fail(CheckError::kContext, s.pos,
           "use: " + name + " does not match " + g.seq.str());
    Deriv d = deriv_subst(it->second.deriv, *found);
    std::vector<Term> extra;
    for (size_t j = 0; j < gh.size(); ++j)
      if (std::find(pick.begin(), pick.end(),
                                 static_cast<int>(j)) == pick.end())
        extra.push_back(gh[j]);
    if (!extra.empty()) d = linc::weaken(d, extra);
    if (!same_sequent(d->concl, g.seq))
      fail(CheckError::kContext, s.pos,
           "use: " + name + " instantiates to " + d->concl.str());
    return reorder_conclusion(d, gh);
  }

  const Elaborator& el_;
};

Deriv Elaborator::prove(const Goal& g, const ProofStep& p) const {
  return ProofBuilder(*this).prove(g, p);
}

}  // namespace linc
