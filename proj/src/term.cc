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

#include "linc/term.h"

#include <atomic>
#include <sstream>

namespace linc {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::kUnknownConstant: return "UnknownConstant";
    case ErrorCode::kTypeMismatch: return "TypeMismatch";
    case ErrorCode::kIllegalOInQuantifier: return "IllegalOInQuantifier";
    case ErrorCode::kNotAPattern: return "NotAPattern";
    case ErrorCode::kUnknownPredicate: return "UnknownPredicate";
    case ErrorCode::kUndefinedPredicate: return "UndefinedPredicate";
    case ErrorCode::kNotStratified: return "NotStratified";
    case ErrorCode::kDominationViolation: return "DominationViolation";
    case ErrorCode::kNotARedex: return "NotARedex";
    case ErrorCode::kInternalInvariantViolation:
      return "InternalInvariantViolation";
    case ErrorCode::kFuelExhausted: return "FuelExhausted";
    case ErrorCode::kSyntaxError: return "SyntaxError";
    case ErrorCode::kDuplicateName: return "DuplicateName";
    case ErrorCode::kBadDerivation: return "BadDerivation";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

// ---------------------------------------------------------------- types

struct Type::Node {
  Kind kind;
  std::string name;
  std::vector<Type> kids;  // dom, cod for arrows
};

namespace {
const std::shared_ptr<const Type::Node>& prop_node() {
  static const auto* n = new std::shared_ptr<const Type::Node>(
      std::make_shared<const Type::Node>(
          Type::Node{Type::Kind::kProp, "o", {}}));
  return *n;
}
}  // namespace

Type::Type() : node_(prop_node()) {}

Type Type::Base(std::string name) {
  return Type(std::make_shared<const Node>(
      Node{Kind::kBase, std::move(name), {}}));
}

Type Type::Prop() { return Type(); }

Type Type::Arrow(Type dom, Type cod) {
  return Type(std::make_shared<const Node>(
      Node{Kind::kArrow, "", {std::move(dom), std::move(cod)}}));
}

Type Type::Arrows(const std::vector<Type>& args, Type result) {
  for (auto it = args.rbegin(); it != args.rend(); ++it)
    result = Arrow(*it, result);
  return result;
}

Type::Kind Type::kind() const { return node_->kind; }
const std::string& Type::name() const { return node_->name; }

const Type& Type::dom() const { return node_->kids.at(0); }
const Type& Type::cod() const { return node_->kids.at(1); }

std::vector<Type> Type::args() const {
  std::vector<Type> out;
  Type t = *this;
  while (t.is_arrow()) {
    out.push_back(t.dom());
    t = t.cod();
  }
  return out;
}

Type Type::result() const {
  Type t = *this;
  while (t.is_arrow()) t = t.cod();
  return t;
}

bool Type::quantifiable() const {
  switch (kind()) {
    case Kind::kProp: return false;
    case Kind::kBase: return true;
    case Kind::kArrow: return dom().quantifiable() && cod().quantifiable();
  }
  return false;
}

bool Type::operator==(const Type& o) const {
  if (node_ == o.node_) return true;
  if (kind() != o.kind()) return false;
  switch (kind()) {
    case Kind::kProp: return true;
    case Kind::kBase: return name() == o.name();
    case Kind::kArrow: return dom() == o.dom() && cod() == o.cod();
  }
  return false;
}

bool Type::operator<(const Type& o) const {
  if (kind() != o.kind()) return kind() < o.kind();
  switch (kind()) {
    case Kind::kProp: return false;
    case Kind::kBase: return name() < o.name();
    case Kind::kArrow:
      if (dom() != o.dom()) return dom() < o.dom();
      return cod() < o.cod();
  }
  return false;
}

std::string Type::str() const {
  switch (kind()) {
    case Kind::kProp: return "o";
    case Kind::kBase: return name();
    case Kind::kArrow: {
      std::string d = dom().str();
      if (dom().is_arrow()) d = "(" + d + ")";
      return d + " -> " + cod().str();
    }
  }
  return "?";
}

// ------------------------------------------------------------ variables

namespace {
std::atomic<uint64_t> g_next_var{1};
}

Var fresh_var(const std::string& name, const Type& type) {
  return Var{g_next_var.fetch_add(1, std::memory_order_relaxed), name, type};
}

const char* logic_op_name(LogicOp op) {
  switch (op) {
    case LogicOp::kTop: return "tt";
    case LogicOp::kBot: return "ff";
    case LogicOp::kAnd: return "/\\";
    case LogicOp::kOr: return "\\/";
    case LogicOp::kImp: return "=>";
    case LogicOp::kEq: return "=";
    case LogicOp::kForall: return "forall";
    case LogicOp::kExists: return "exists";
  }
  return "?";
}

// ---------------------------------------------------------------- terms

struct Term::Node {
  Kind kind = Kind::kLogic;
  std::string name;
  Type type;
  LogicOp op = LogicOp::kTop;
  int index = 0;
  Var var;
  Term sub{std::shared_ptr<const Node>()};  // lambda body or app head
  std::vector<Term> args;
};

namespace {
std::shared_ptr<Term::Node> mk(Term::Kind k) {
  auto n = std::make_shared<Term::Node>();
  n->kind = k;
  return n;
}
}  // namespace

Term::Term() : Term(Top()) {}

Term Term::Const(std::string name, Type type) {
  auto n = mk(Kind::kConst);
  n->name = std::move(name);
  n->type = std::move(type);
  return Term(std::move(n));
}

Term Term::Logic(LogicOp op, Type param) {
  auto n = mk(Kind::kLogic);
  n->op = op;
  n->type = std::move(param);
  return Term(std::move(n));
}

Term Term::BVar(int index) {
  auto n = mk(Kind::kBVar);
  n->index = index;
  return Term(std::move(n));
}

Term Term::FVar(const Var& v) {
  auto n = mk(Kind::kFVar);
  n->var = v;
  return Term(std::move(n));
}

Term Term::Lam(Type type, std::string hint, Term body) {
  auto n = mk(Kind::kLam);
  n->type = std::move(type);
  n->name = std::move(hint);
  n->sub = std::move(body);
  return Term(std::move(n));
}

Term Term::App(Term head, std::vector<Term> args) {
  if (args.empty()) return head;
  if (head.is_app()) {
    std::vector<Term> all = head.args();
    all.insert(all.end(), args.begin(), args.end());
    return App(head.head(), std::move(all));
  }
  auto n = mk(Kind::kApp);
  n->sub = std::move(head);
  n->args = std::move(args);
  return Term(std::move(n));
}

Term Term::Top() {
  static const Term* t = new Term([] {
    auto n = mk(Kind::kLogic);
    n->op = LogicOp::kTop;
    return Term(std::move(n));
  }());
  return *t;
}
Term Term::Bot() { return Logic(LogicOp::kBot); }
Term Term::And(Term a, Term b) {
  return App(Logic(LogicOp::kAnd), {std::move(a), std::move(b)});
}
Term Term::Or(Term a, Term b) {
  return App(Logic(LogicOp::kOr), {std::move(a), std::move(b)});
}
Term Term::Imp(Term a, Term b) {
  return App(Logic(LogicOp::kImp), {std::move(a), std::move(b)});
}
Term Term::Eq(Type t, Term a, Term b) {
  return App(Logic(LogicOp::kEq, std::move(t)), {std::move(a), std::move(b)});
}
Term Term::Forall(Type t, std::string hint, Term body) {
  Type ty = t;
  return App(Logic(LogicOp::kForall, std::move(t)),
             {Lam(std::move(ty), std::move(hint), std::move(body))});
}
Term Term::Exists(Type t, std::string hint, Term body) {
  Type ty = t;
  return App(Logic(LogicOp::kExists, std::move(t)),
             {Lam(std::move(ty), std::move(hint), std::move(body))});
}

Term::Kind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
const Type& Term::type() const { return node_->type; }
LogicOp Term::op() const { return node_->op; }
int Term::index() const { return node_->index; }
const Var& Term::var() const { return node_->var; }
const Term& Term::body() const { return node_->sub; }
const Term& Term::head() const { return node_->sub; }
const std::vector<Term>& Term::args() const { return node_->args; }

const Term& Term::spine_head() const { return is_app() ? head() : *this; }
std::vector<Term> Term::spine_args() const {
  return is_app() ? args() : std::vector<Term>{};
}

bool Term::operator==(const Term& o) const {
  if (node_ == o.node_) return true;
  if (kind() != o.kind()) return false;
  switch (kind()) {
    case Kind::kConst: return name() == o.name();
    case Kind::kLogic: return op() == o.op() && type() == o.type();
    case Kind::kBVar: return index() == o.index();
    case Kind::kFVar: return var().id == o.var().id;
    case Kind::kLam: return type() == o.type() && body() == o.body();
    case Kind::kApp: {
      if (args().size() != o.args().size()) return false;
      if (head() != o.head()) return false;
      for (size_t i = 0; i < args().size(); ++i)
        if (args()[i] != o.args()[i]) return false;
      return true;
    }
  }
  return false;
}

bool Term::operator<(const Term& o) const {
  if (node_ == o.node_) return false;
  if (kind() != o.kind()) return kind() < o.kind();
  switch (kind()) {
    case Kind::kConst: return name() < o.name();
    case Kind::kLogic:
      if (op() != o.op()) return op() < o.op();
      return type() < o.type();
    case Kind::kBVar: return index() < o.index();
    case Kind::kFVar: return var().id < o.var().id;
    case Kind::kLam:
      if (type() != o.type()) return type() < o.type();
      return body() < o.body();
    case Kind::kApp:
      if (head() != o.head()) return head() < o.head();
      if (args().size() != o.args().size())
        return args().size() < o.args().size();
      for (size_t i = 0; i < args().size(); ++i)
        if (args()[i] != o.args()[i]) return args()[i] < o.args()[i];
      return false;
  }
  return false;
}

// ------------------------------------------------------------ signature

void Signature::add_type(const std::string& name) {
  if (has_type(name))
    throw Error(ErrorCode::kDuplicateName, "type " + name);
  types_.push_back(name);
}

void Signature::add_const(const std::string& name, const Type& type) {
  if (consts_.count(name))
    throw Error(ErrorCode::kDuplicateName, "constant " + name);
  if (type.result().is_prop()) {
    for (const Type& a : type.args())
      if (!a.quantifiable())
        throw Error(ErrorCode::kIllegalOInQuantifier,
                    "predicate " + name + " has argument type " + a.str());
  } else if (!type.quantifiable()) {
    throw Error(ErrorCode::kTypeMismatch,
                "constant " + name + " mentions o: " + type.str());
  }
  consts_.emplace(name, type);
  order_.push_back(name);
}

bool Signature::has_type(const std::string& name) const {
  for (const auto& t : types_)
    if (t == name) return true;
  return false;
}

bool Signature::has_const(const std::string& name) const {
  return consts_.count(name) > 0;
}

const Type& Signature::const_type(const std::string& name) const {
  auto it = consts_.find(name);
  if (it == consts_.end())
    throw Error(ErrorCode::kUnknownConstant, name);
  return it->second;
}

bool Signature::is_predicate(const std::string& name) const {
  auto it = consts_.find(name);
  return it != consts_.end() && it->second.result().is_prop();
}

Term Signature::constant(const std::string& name) const {
  return Term::Const(name, const_type(name));
}

// ------------------------------------------------------------ typecheck

namespace {

Type logic_type(LogicOp op, const Type& param) {
  const Type o = Type::Prop();
  switch (op) {
    case LogicOp::kTop:
    case LogicOp::kBot: return o;
    case LogicOp::kAnd:
    case LogicOp::kOr:
    case LogicOp::kImp: return Type::Arrows({o, o}, o);
    case LogicOp::kEq: return Type::Arrows({param, param}, o);
    case LogicOp::kForall:
    case LogicOp::kExists: return Type::Arrow(Type::Arrow(param, o), o);
  }
  return o;
}

Type head_type(const Term& h, const std::vector<Type>& bound) {
  switch (h.kind()) {
    case Term::Kind::kConst: return h.type();
    case Term::Kind::kLogic: return logic_type(h.op(), h.type());
    case Term::Kind::kFVar: return h.var().type;
    case Term::Kind::kBVar: {
      int i = h.index();
      if (i < 0 || i >= static_cast<int>(bound.size()))
        throw Error(ErrorCode::kTypeMismatch, "loose bound variable");
      return bound[bound.size() - 1 - i];
    }
    default: break;
  }
  throw Error(ErrorCode::kInternalInvariantViolation, "not a head");
}

Type tc(const Term& t, const Signature* sig, std::vector<Type>& bound) {
  switch (t.kind()) {
    case Term::Kind::kConst:
      if (sig) {
        if (!sig->has_const(t.name()))
          throw Error(ErrorCode::kUnknownConstant, t.name());
        if (sig->const_type(t.name()) != t.type())
          throw Error(ErrorCode::kTypeMismatch,
                      "constant " + t.name() + " used at " + t.type().str());
      }
      return t.type();
    case Term::Kind::kLogic:
      if ((t.op() == LogicOp::kEq || t.op() == LogicOp::kForall ||
           t.op() == LogicOp::kExists) &&
          !t.type().quantifiable())
        throw Error(ErrorCode::kIllegalOInQuantifier,
                    std::string(logic_op_name(t.op())) + " at type " +
                        t.type().str());
      return logic_type(t.op(), t.type());
    case Term::Kind::kBVar:
    case Term::Kind::kFVar: return head_type(t, bound);
    case Term::Kind::kLam: {
      bound.push_back(t.type());
      Type b = tc(t.body(), sig, bound);
      bound.pop_back();
      return Type::Arrow(t.type(), b);
    }
    case Term::Kind::kApp: {
      Type f = tc(t.head(), sig, bound);
      for (const Term& a : t.args()) {
        if (!f.is_arrow())
          throw Error(ErrorCode::kTypeMismatch,
                      "applying a non-function: " + to_string(t));
        Type at = tc(a, sig, bound);
        if (at != f.dom())
          throw Error(ErrorCode::kTypeMismatch,
                      "argument " + to_string(a) + " has type " + at.str() +
                          ", expected " + f.dom().str());
        f = f.cod();
      }
      return f;
    }
  }
  throw Error(ErrorCode::kInternalInvariantViolation, "bad term");
}

}  // namespace

Type typecheck(const Term& t, const Signature* sig,
               const std::vector<Type>& bound) {
  std::vector<Type> b = bound;
  return tc(t, sig, b);
}

// ----------------------------------------------------- de Bruijn helpers

Term shift(const Term& t, int d, int cutoff) {
  if (d == 0) return t;
  switch (t.kind()) {
    case Term::Kind::kBVar:
      return t.index() >= cutoff ? Term::BVar(t.index() + d) : t;
    case Term::Kind::kLam:
      return Term::Lam(t.type(), t.name(), shift(t.body(), d, cutoff + 1));
    case Term::Kind::kApp: {
      std::vector<Term> as;
      as.reserve(t.args().size());
      for (const Term& a : t.args()) as.push_back(shift(a, d, cutoff));
      return Term::App(shift(t.head(), d, cutoff), std::move(as));
    }
    default: return t;
  }
}

namespace {

// t[s/j], lowering indices above j. s is given relative to depth 0.
Term subst_bvar(const Term& t, int j, const Term& s) {
  switch (t.kind()) {
    case Term::Kind::kBVar:
      if (t.index() == j) return shift(s, j);
      if (t.index() > j) return Term::BVar(t.index() - 1);
      return t;
    case Term::Kind::kLam:
      return Term::Lam(t.type(), t.name(), subst_bvar(t.body(), j + 1, s));
    case Term::Kind::kApp: {
      std::vector<Term> as;
      as.reserve(t.args().size());
      for (const Term& a : t.args()) as.push_back(subst_bvar(a, j, s));
      return Term::App(subst_bvar(t.head(), j, s), std::move(as));
    }
    default: return t;
  }
}

}  // namespace

Term instantiate_bvar(const Term& body, const Term& arg) {
  return subst_bvar(body, 0, arg);
}

bool has_loose_bvars(const Term& t, int depth) {
  switch (t.kind()) {
    case Term::Kind::kBVar: return t.index() >= depth;
    case Term::Kind::kLam: return has_loose_bvars(t.body(), depth + 1);
    case Term::Kind::kApp:
      if (has_loose_bvars(t.head(), depth)) return true;
      for (const Term& a : t.args())
        if (has_loose_bvars(a, depth)) return true;
      return false;
    default: return false;
  }
}

// -------------------------------------------------------- normalization

namespace {

Term norm(const Term& t, std::vector<Type>& ctx);

Term norm_spine(const Term& head, std::vector<Term> args,
                std::vector<Type>& ctx) {
  Term h = head;
  // Beta-reduce the head away.
  while (h.is_lam() && !args.empty()) {
    Term r = instantiate_bvar(h.body(), args.front());
    args.erase(args.begin());
    if (r.is_app()) {
      std::vector<Term> more = r.args();
      more.insert(more.end(), args.begin(), args.end());
      args = std::move(more);
      h = r.head();
    } else {
      h = r;
    }
  }
  if (h.is_lam()) return norm(h, ctx);

  Type ty = head_type(h, ctx);
  std::vector<Term> nargs;
  nargs.reserve(args.size());
  for (const Term& a : args) {
    if (!ty.is_arrow())
      throw Error(ErrorCode::kTypeMismatch, "over-application");
    nargs.push_back(norm(a, ctx));
    ty = ty.cod();
  }
  std::vector<Type> rest = ty.args();
  if (rest.empty()) return Term::App(h, std::move(nargs));

  // Eta-expand to full arity and normalize the expansion.
  int m = static_cast<int>(rest.size());
  std::vector<Term> eargs;
  eargs.reserve(nargs.size() + m);
  for (const Term& a : nargs) eargs.push_back(shift(a, m));
  for (int j = 0; j < m; ++j) eargs.push_back(Term::BVar(m - 1 - j));
  Term hs = shift(h, m);
  for (int j = 0; j < m; ++j) ctx.push_back(rest[j]);
  // Arguments already normal stay so; the fresh variables get expanded.
  for (size_t i = nargs.size(); i < eargs.size(); ++i)
    eargs[i] = norm(eargs[i], ctx);
  Term body = Term::App(hs, std::move(eargs));
  for (int j = m - 1; j >= 0; --j) {
    ctx.pop_back();
    body = Term::Lam(rest[j], "", body);
  }
  return body;
}

Term norm(const Term& t, std::vector<Type>& ctx) {
  switch (t.kind()) {
    case Term::Kind::kLam: {
      ctx.push_back(t.type());
      Term b = norm(t.body(), ctx);
      ctx.pop_back();
      return Term::Lam(t.type(), t.name(), b);
    }
    case Term::Kind::kApp: return norm_spine(t.head(), t.args(), ctx);
    default: return norm_spine(t, {}, ctx);
  }
}

}  // namespace

Term normalize(const Term& t) {
  std::vector<Type> ctx;
  return norm(t, ctx);
}

Term normalize_in(const Term& t, const std::vector<Type>& bound) {
  std::vector<Type> ctx = bound;
  return norm(t, ctx);
}

bool is_normal(const Term& t) { return normalize(t) == t; }

// ------------------------------------------------------- free variables

void collect_fvars(const Term& t, std::map<uint64_t, Var>* out) {
  switch (t.kind()) {
    case Term::Kind::kFVar: out->emplace(t.var().id, t.var()); break;
    case Term::Kind::kLam: collect_fvars(t.body(), out); break;
    case Term::Kind::kApp:
      collect_fvars(t.head(), out);
      for (const Term& a : t.args()) collect_fvars(a, out);
      break;
    default: break;
  }
}

std::map<uint64_t, Var> fvars(const Term& t) {
  std::map<uint64_t, Var> out;
  collect_fvars(t, &out);
  return out;
}

bool occurs(const Term& t, uint64_t id) {
  switch (t.kind()) {
    case Term::Kind::kFVar: return t.var().id == id;
    case Term::Kind::kLam: return occurs(t.body(), id);
    case Term::Kind::kApp:
      if (occurs(t.head(), id)) return true;
      for (const Term& a : t.args())
        if (occurs(a, id)) return true;
      return false;
    default: return false;
  }
}

bool mentions_const(const Term& t, const std::string& name) {
  switch (t.kind()) {
    case Term::Kind::kConst: return t.name() == name;
    case Term::Kind::kLam: return mentions_const(t.body(), name);
    case Term::Kind::kApp:
      if (mentions_const(t.head(), name)) return true;
      for (const Term& a : t.args())
        if (mentions_const(a, name)) return true;
      return false;
    default: return false;
  }
}

namespace {
Term replace_const_raw(const Term& t, const std::string& name,
                       const Term& repl) {
  switch (t.kind()) {
    case Term::Kind::kConst: return t.name() == name ? repl : t;
    case Term::Kind::kLam:
      return Term::Lam(t.type(), t.name(),
                       replace_const_raw(t.body(), name, repl));
    case Term::Kind::kApp: {
      std::vector<Term> as;
      for (const Term& a : t.args())
        as.push_back(replace_const_raw(a, name, repl));
      return Term::App(replace_const_raw(t.head(), name, repl),
                       std::move(as));
    }
    default: return t;
  }
}

// Replace free variables by terms with no loose bound variables.
Term replace_fvars_raw(const Term& t, const Subst& s) {
  switch (t.kind()) {
    case Term::Kind::kFVar: {
      const Term* r = s.lookup(t.var().id);
      return r ? *r : t;
    }
    case Term::Kind::kLam:
      return Term::Lam(t.type(), t.name(), replace_fvars_raw(t.body(), s));
    case Term::Kind::kApp: {
      std::vector<Term> as;
      as.reserve(t.args().size());
      for (const Term& a : t.args()) as.push_back(replace_fvars_raw(a, s));
      return Term::App(replace_fvars_raw(t.head(), s), std::move(as));
    }
    default: return t;
  }
}

Term abstract_var(const Term& t, uint64_t id, int depth) {
  switch (t.kind()) {
    case Term::Kind::kFVar:
      return t.var().id == id ? Term::BVar(depth) : t;
    case Term::Kind::kBVar: return t;
    case Term::Kind::kLam:
      return Term::Lam(t.type(), t.name(),
                       abstract_var(t.body(), id, depth + 1));
    case Term::Kind::kApp: {
      std::vector<Term> as;
      for (const Term& a : t.args()) as.push_back(abstract_var(a, id, depth));
      return Term::App(abstract_var(t.head(), id, depth), std::move(as));
    }
    default: return t;
  }
}
}  // namespace

Term replace_const(const Term& t, const std::string& name, const Term& repl) {
  if (!mentions_const(t, name)) return t;
  return normalize(replace_const_raw(t, name, repl));
}

Term abstract(const std::vector<Var>& vs, const Term& body) {
  // Each abstraction step shifts existing loose indices up by one.
  Term b = body;
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) {
    b = Term::Lam(it->type, it->name, abstract_var(shift(b, 1), it->id, 0));
  }
  return b;
}

Term beta_apply(const Term& f, const std::vector<Term>& args) {
  return normalize(Term::App(f, args));
}

bool is_atomic(const Term& f) { return f.spine_head().is_const(); }

// -------------------------------------------------------------- printing

namespace {

enum Prec { kPrecTop = 0, kPrecImp, kPrecOr, kPrecAnd, kPrecEq, kPrecApp,
            kPrecAtom };

struct Printer {
  std::vector<std::string> names;  // bound names, innermost last
  std::set<std::string> used;
  std::ostringstream out;

  std::string fresh(std::string hint) {
    if (hint.empty()) hint = "x";
    std::string n = hint;
    int k = 1;
    while (used.count(n)) n = hint + std::to_string(k++);
    return n;
  }

  void open(bool paren) {
    if (paren) out << "(";
  }
  void close(bool paren) {
    if (paren) out << ")";
  }

  void binder(const Term& lam, int prec_ctx, const std::string& prefix,
              bool typed) {
    std::string n = fresh(lam.name());
    bool paren = prec_ctx > kPrecTop;
    open(paren);
    out << prefix << n;
    if (typed) out << ":" << lam.type().str();
    out << (prefix.empty() ? "\\ " : ", ");
    names.push_back(n);
    used.insert(n);
    print(lam.body(), kPrecTop);
    used.erase(n);
    names.pop_back();
    close(paren);
  }

  void head_atom(const Term& h) {
    switch (h.kind()) {
      case Term::Kind::kConst: out << h.name(); break;
      case Term::Kind::kBVar: {
        int i = h.index();
        if (i < static_cast<int>(names.size()))
          out << names[names.size() - 1 - i];
        else
          out << "^" << i;
        break;
      }
      case Term::Kind::kFVar:
        if (h.var().name.empty())
          out << "_v" << h.var().id;
        else
          out << h.var().name;
        break;
      case Term::Kind::kLogic: out << logic_op_name(h.op()); break;
      default: print(h, kPrecAtom);
    }
  }

  void print(const Term& t, int prec) {
    if (t.is_lam()) {
      binder(t, prec, "", false);
      return;
    }
    const Term& h = t.spine_head();
    const auto args = t.spine_args();
    if (h.kind() == Term::Kind::kLogic) {
      LogicOp op = h.op();
      if ((op == LogicOp::kForall || op == LogicOp::kExists) &&
          args.size() == 1 && args[0].is_lam()) {
        binder(args[0], prec, std::string(logic_op_name(op)) + " ", true);
        return;
      }
      if (args.size() == 2 && op != LogicOp::kForall &&
          op != LogicOp::kExists) {
        int p = op == LogicOp::kImp  ? kPrecImp
                : op == LogicOp::kOr ? kPrecOr
                : op == LogicOp::kAnd ? kPrecAnd
                                      : kPrecEq;
        bool paren = prec > p;
        open(paren);
        // => /\ \/ are right associative, = is not associative.
        print(args[0], op == LogicOp::kEq ? kPrecApp : p + 1);
        out << " " << logic_op_name(op) << " ";
        print(args[1], op == LogicOp::kEq ? kPrecApp : p);
        close(paren);
        return;
      }
      if (args.empty()) {
        out << logic_op_name(op);
        return;
      }
    }
    if (args.empty()) {
      head_atom(h);
      return;
    }
    bool paren = prec > kPrecApp;
    open(paren);
    head_atom(h);
    for (const Term& a : args) {
      out << " ";
      print(a, kPrecAtom);
    }
    close(paren);
  }
};

}  // namespace

std::string to_string(const Term& t) {
  Printer p;
  std::map<uint64_t, Var> fv = fvars(t);
  for (auto& [id, v] : fv) p.used.insert(v.name);
  p.print(t, kPrecTop);
  return p.out.str();
}

// --------------------------------------------------------- substitutions

Subst Subst::single(const Var& v, const Term& t) {
  Subst s;
  s.bind(v, t);
  return s;
}

void Subst::bind(const Var& v, const Term& t) {
  Type ty = typecheck(t, nullptr);
  if (ty != v.type)
    throw Error(ErrorCode::kTypeMismatch,
                "binding " + v.name + " : " + v.type.str() + " to " +
                    to_string(t) + " : " + ty.str());
  if (has_loose_bvars(t))
    throw Error(ErrorCode::kTypeMismatch, "open term in substitution");
  Term n = normalize(t);
  if (n.is_fvar() && n.var().id == v.id) {
    map_.erase(v.id);
    return;
  }
  map_[v.id] = {v, n};
}

const Term* Subst::lookup(uint64_t id) const {
  auto it = map_.find(id);
  return it == map_.end() ? nullptr : &it->second.second;
}

std::map<uint64_t, Var> Subst::range_vars() const {
  std::map<uint64_t, Var> out;
  for (const auto& [id, e] : map_) collect_fvars(e.second, &out);
  return out;
}

Subst Subst::restricted_to(const std::map<uint64_t, Var>& vars) const {
  Subst out;
  for (const auto& e : map_)
    if (vars.count(e.first)) out.map_.insert(e);
  return out;
}

bool Subst::operator==(const Subst& o) const {
  if (map_.size() != o.map_.size()) return false;
  for (const auto& [id, e] : map_) {
    const Term* r = o.lookup(id);
    if (!r || *r != e.second) return false;
  }
  return true;
}

std::string Subst::str() const {
  std::string s = "{";
  bool first = true;
  for (const auto& [id, e] : map_) {
    if (!first) s += ", ";
    first = false;
    s += (e.first.name.empty() ? "_v" + std::to_string(id) : e.first.name);
    s += " |-> " + to_string(e.second);
  }
  return s + "}";
}

Term subst_apply(const Term& t, const Subst& s) {
  if (s.empty()) return t;
  bool hit = false;
  for (const auto& [id, e] : s.entries()) {
    if (occurs(t, id)) {
      hit = true;
      break;
    }
  }
  if (!hit) return t;
  return normalize(replace_fvars_raw(t, s));
}

Term subst_apply_in(const Term& t, const Subst& s,
                    const std::vector<Type>& bound) {
  for (const auto& [id, e] : s.entries()) {
    if (occurs(t, id)) return normalize_in(replace_fvars_raw(t, s), bound);
  }
  return t;
}

Subst subst_compose(const Subst& a, const Subst& b) {
  Subst out;
  for (const auto& [id, e] : a.entries())
    out.bind(e.first, subst_apply(e.second, b));
  for (const auto& [id, e] : b.entries())
    if (!a.binds(id)) out.bind(e.first, e.second);
  return out;
}

}  // namespace linc
