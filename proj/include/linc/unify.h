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

// Higher-order pattern unification.
//
// A flexible subterm is a free variable, not in the rigid set, applied to
// arguments. It is a pattern when the arguments are eta-expansions of
// distinct lambda-bound variables. Equations that stay outside the
// pattern fragment after all others are solved make the problem
// NotAPattern.
//
// Orientation of variable-variable equations binds the variable with the
// larger id, which is the one created later.

#ifndef LINC_UNIFY_H_
#define LINC_UNIFY_H_

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "linc/term.h"

namespace linc {

enum class UnifyStatus { kUnifier, kNoUnifier, kNotAPattern };

struct UnifyOutcome {
  UnifyStatus status = UnifyStatus::kNoUnifier;
  Subst mgu;           // meaningful for kUnifier
  std::string detail;  // why it failed or got stuck
};

// Both sides normal and of the same type.
UnifyOutcome pattern_unify(const Term& s, const Term& t,
                           const std::set<uint64_t>& rigid = {});

// Simultaneous problem.
UnifyOutcome unify_all(const std::vector<std::pair<Term, Term>>& eqs,
                       const std::set<uint64_t>& rigid = {});

// Empty or the singleton MGU. Throws kNotAPattern.
std::vector<Subst> csu(const Term& s, const Term& t);

// If t is the eta-expansion of a bound variable, its index as seen from
// outside t.
std::optional<int> eta_bvar(const Term& t);

}  // namespace linc

#endif  // LINC_UNIFY_H_
