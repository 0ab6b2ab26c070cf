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


#ifndef LINC_TESTS_ROBINSON_H_
#define LINC_TESTS_ROBINSON_H_

#include <map>
#include <string>
#include <vector>

#include "generators.h"
#include "linc/term.h"

namespace linc {
namespace testing {

// First-order terms and plain Robinson unification, kept independent of
// the kernel so it can serve as an oracle.
struct Fo {
  int var = -1;  // >= 0 for variables
  std::string f;
  std::vector<Fo> args;
};

using FoSubst = std::map<int, Fo>;

inline Fo fo_walk(const Fo& t, const FoSubst& s) {
  if (t.var >= 0) {
    auto it = s.find(t.var);
    return it == s.end() ? t : fo_walk(it->second, s);
  }
  Fo r{-1, t.f, {}};
  for (const Fo& a : t.args) r.args.push_back(fo_walk(a, s));
  return r;
}

inline bool fo_occurs(int v, const Fo& t) {
  if (t.var >= 0) return t.var == v;
  for (const Fo& a : t.args)
    if (fo_occurs(v, a)) return true;
  return false;
}

inline bool robinson(Fo a, Fo b, FoSubst* s) {
  a = fo_walk(a, *s);
  b = fo_walk(b, *s);
  if (a.var >= 0 && b.var >= 0 && a.var == b.var) return true;
  if (a.var >= 0) {
    if (fo_occurs(a.var, b)) return false;
    (*s)[a.var] = b;
    return true;
  }
  if (b.var >= 0) return robinson(b, a, s);
  if (a.f != b.f || a.args.size() != b.args.size()) return false;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!robinson(a.args[i], b.args[i], s)) return false;
  return true;
}

struct FoWorld {
  Rng* rng;
  Signature sig;
  Type nt = Type::Base("nt");
  std::vector<Var> vars;

  FoWorld(Rng* r, int nvars) : rng(r) {
    sig.add_type("nt");
    sig.add_const("z", nt);
    sig.add_const("s", Type::Arrow(nt, nt));
    sig.add_const("pair", Type::Arrows({nt, nt}, nt));
    for (int i = 0; i < nvars; ++i)
      vars.push_back(fresh_var("X" + std::to_string(i), nt));
  }

  Fo gen(int depth) {
    int k = depth <= 0 ? rng->below(2) : rng->below(4);
    if (k == 0) return Fo{rng->below(int(vars.size())), "", {}};
    if (k == 1) return Fo{-1, "z", {}};
    if (k == 2) return Fo{-1, "s", {gen(depth - 1)}};
    return Fo{-1, "pair", {gen(depth - 1), gen(depth - 1)}};
  }

  Term to_term(const Fo& t) const {
    if (t.var >= 0) return Term::FVar(vars[t.var]);
    if (t.args.empty()) return sig.constant(t.f);
    std::vector<Term> as;
    for (const Fo& a : t.args) as.push_back(to_term(a));
    return Term::App(sig.constant(t.f), as);
  }
};

}  // namespace testing
}  // namespace linc

#endif  // LINC_TESTS_ROBINSON_H_
