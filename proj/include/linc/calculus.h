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

// Sequents, derivation trees and the checker.
//
// A node stores its full conclusion. Hypotheses are kept in a vector and
// compared as multisets; the vector order only gives `principal` and the
// multicut positions something stable to point at.
//
// Payload per rule:
//   cL wL botL andL1 andL2 orL impL allL exL eqL IL CIL   principal
//   allL exR                                               term (witness)
//   allR exL                                               eigen = {y}
//   IL CIR                                                 term (invariant S),
//                                                          eigen = ys
//   eqL                                                    unifiers, one per
//                                                          premise
//   mc                                                     cut_pos
//
// mc premises are the n left derivations followed by the major one;
// cut_pos[i] is the position of the i-th cut formula among the major
// premise's hypotheses. For IL the premises are (minor, major); for CIR
// they are (major, minor).

#ifndef LINC_CALCULUS_H_
#define LINC_CALCULUS_H_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "linc/defs.h"
#include "linc/term.h"

namespace linc {

struct Sequent {
  std::vector<Term> hyps;
  Term concl;

  std::string str() const;
};

// Multiset equality of hypotheses plus equal conclusions.
bool same_sequent(const Sequent& a, const Sequent& b);
bool same_multiset(const std::vector<Term>& a, const std::vector<Term>& b);
std::map<uint64_t, Var> sequent_fvars(const Sequent& s);

enum class Rule {
  kCL, kWL, kBotL, kTopR, kAndL1, kAndL2, kAndR, kOrL, kOrR1, kOrR2,
  kAllL, kAllR, kExL, kExR, kImpL, kImpR, kInit, kMc, kEqL, kEqR,
  kIL, kIR, kCIL, kCIR,
};

const char* rule_name(Rule r);
std::optional<Rule> rule_from_name(const std::string& s);
bool is_left_rule(Rule r);  // acts on a hypothesis selected by principal

struct DerivNode;
using Deriv = std::shared_ptr<const DerivNode>;

struct DerivNode {
  Sequent concl;
  Rule rule = Rule::kInit;
  int principal = -1;
  std::optional<Term> term;
  std::vector<Var> eigen;
  std::vector<int> cut_pos;
  std::vector<Subst> unifiers;
  std::vector<Deriv> premises;
};

Deriv make_deriv(DerivNode n);

// Reordered copy of d whose conclusion has exactly `target`'s
// hypothesis order; `target` must be multiset-equal. Indices stored in d
// are remapped.
Deriv reorder_conclusion(const Deriv& d, const std::vector<Term>& target);

enum class CheckError {
  kRuleShape,       // principal formula or conclusion has the wrong form
  kContext,         // premise sequent does not match the rule schema
  kEigenvariable,   // freshness condition
  kWitness,         // ill-typed or escaping witness / invariant
  kEqLCoverage,     // eqL premises do not match csu(s, t)
  kEqRMismatch,     // eqR sides differ
  kInit,            // init not atomic or sequent not C -> C
  kMulticut,        // mc shape, including n = 0 outside the normalizer
  kFixpoint,        // IL/IR on a co-inductive predicate and so on
  kNotAPattern,     // eqL needs non-pattern unification
  kMalformed,       // arity, missing payload, type errors
};

const char* check_error_name(CheckError e);
std::optional<CheckError> check_error_from_name(const std::string& s);

struct CheckFailure {
  std::string path;  // premise indices from the root, e.g. "0.1"
  Rule rule;
  CheckError kind;
  std::string message;
};

struct CheckReport {
  bool ok = true;
  std::vector<CheckFailure> failures;
  std::string str() const;
};

struct CheckOptions {
  bool allow_empty_mc = false;
  size_t max_failures = 64;
};

CheckReport check_derivation(const Deriv& d, const DefTable& table,
                             const CheckOptions& opts = {});

// Check a single node against its premises' conclusions. Used by the
// normalizer's debug mode and by check_derivation.
std::optional<CheckFailure> check_node(const DerivNode& n,
                                       const DefTable& table,
                                       const CheckOptions& opts = {});

bool is_cut_free(const Deriv& d);
const Sequent& end_sequent(const Deriv& d);

// Equality modulo renaming of variables not free in the end sequent and
// alpha-conversion. With rename_free, free variables of the end sequent
// may be renamed too (bijectively).
bool deriv_alpha_eq(const Deriv& a, const Deriv& b, bool rename_free = false);

// Coarser: contexts are compared as multisets, and principal and cut
// formulas by formula rather than by position. Two derivations that
// differ only in which of several equal hypotheses a rule acts on are
// equal here.
bool deriv_multiset_eq(const Deriv& a, const Deriv& b);

// Variables of the premises' conclusions and payload that are not free
// in the node's conclusion.
std::map<uint64_t, Var> internal_vars(const DerivNode& n);

size_t deriv_size(const Deriv& d);

// Indented one-node-per-line rendering, for diagnostics.
std::string deriv_str(const Deriv& d);
size_t count_rule(const Deriv& d, Rule r);

// Equal up to a bijective renaming of free variables.
bool variant_terms(const std::vector<Term>& a, const std::vector<Term>& b);

}  // namespace linc

#endif  // LINC_CALCULUS_H_
