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

// Operations on derivations used by cut reduction: instantiation,
// identity derivations, measures, and (co)inductive unfolding.

#ifndef LINC_TRANSFORM_H_
#define LINC_TRANSFORM_H_

#include <vector>

#include "linc/calculus.h"
#include "linc/defs.h"
#include "linc/term.h"

namespace linc {

// Pi theta. Internal variables are renamed apart on the way down; eqL
// premises are re-indexed by csu(s theta, t theta). Subtrees whose end
// sequent is untouched by theta are shared, not copied.
Deriv deriv_subst(const Deriv& d, const Subst& theta);

// Id_C, a derivation of C --> C. Throws kNotAPattern for an equation
// outside the pattern fragment (unless both sides are identical).
Deriv identity_derivation(const Term& c);

size_t measure(const Deriv& d);
size_t ind_measure(const Deriv& d);

// An invariant S together with a derivation over the parameters xs:
//   inductive:    B S xs --> S xs
//   co-inductive: S xs --> B S xs
struct Invariant {
  Term s;
  std::vector<Var> xs;
  Deriv pi;
};

// pi[args/xs], with every internal variable renamed apart.
Deriv instantiate(const Invariant& inv, const std::vector<Term>& args);

// mu: from Gamma --> C to Gamma --> C[S/p]. p must be inductive and
// dominate C; both are re-checked (kDominationViolation,
// kTypeMismatch).
Deriv inductive_unfold(const std::string& p, const Term& c, const Deriv& d,
                       const Invariant& inv, const DefTable& table);

// nu: from Gamma --> C[S/p] to Gamma --> C. p must be co-inductive and
// dominate C.
Deriv coinductive_unfold(const std::string& p, const Term& c, const Deriv& d,
                         const Invariant& inv, const DefTable& table);

// Structural helpers. weaken adds `extra` to the end of the context via
// a chain of wL; contract_to merges duplicates via cL so that the
// conclusion has exactly `target` (a sub-multiset of the hypotheses
// whose removal leaves only copies of formulas kept in `target`).
Deriv weaken(const Deriv& d, const std::vector<Term>& extra);
Deriv contract_to(const Deriv& d, const std::vector<Term>& target);

}  // namespace linc

#endif  // LINC_TRANSFORM_H_
