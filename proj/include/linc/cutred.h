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

// Cut reduction. A redex is an mc node; classify_redexes lists the
// reductions that apply to it and reduce_once performs one of them.
// normalize drives reductions to a cut-free derivation.

#ifndef LINC_CUTRED_H_
#define LINC_CUTRED_H_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "linc/calculus.h"
#include "linc/defs.h"
#include "linc/error.h"

namespace linc {

enum class ReductionTag {
  kAxiom,
  kStructural,
  kEmptyMC,
  kEssential,
  kMulticut,
  kLeftCommutative,
  kRightCommutative,
};

enum class ReductionDetail {
  kNone,
  // essential
  kAnd, kOr, kImp, kAll, kEx, kEq, kInd, kCoind,
  // structural
  kCL, kWL,
  // axiom
  kInitLeft, kInitRight,
};

struct ReductionKind {
  ReductionTag tag = ReductionTag::kEmptyMC;
  ReductionDetail detail = ReductionDetail::kNone;
  int cut = -1;  // index of the principal cut formula, -1 if none

  // "Essential(ind)@0", "RightCommutative", ...
  std::string str() const;
  // Kind part only, without the cut index.
  std::string name() const;

  bool operator==(const ReductionKind& o) const {
    return tag == o.tag && detail == o.detail && cut == o.cut;
  }
};

// All reductions applicable at the root, best first under the fixed
// preference Axiom > Structural > EmptyMC > Essential > Multicut >
// commutative. Throws kNotARedex unless the root is mc.
std::vector<ReductionKind> classify_redexes(const Deriv& xi);

// The reduct of xi by `choice`, concluding exactly xi's end sequent.
// Multicuts with no cut formulas may appear in the result; the checker
// accepts them with CheckOptions::allow_empty_mc.
Deriv reduce_once(const Deriv& xi, const ReductionKind& choice,
                  const DefTable& table);

enum class Strategy { kInnermostRightmost };

// LINC_FUEL if set to a positive integer, 10^6 otherwise.
size_t default_fuel();

struct TraceStep {
  size_t step = 0;
  std::string path;  // premise indices from the root, "" for the root
  ReductionKind kind;
  size_t measure_before = 0, measure_after = 0;  // of the redex / reduct
  size_t indm_before = 0, indm_after = 0;
};

struct NormalizeConfig {
  size_t fuel = default_fuel();
  Strategy strategy = Strategy::kInnermostRightmost;
  bool debug_recheck = false;  // check_derivation after every step
  // Called after every step with the whole derivation so far.
  std::function<void(const Deriv&, const TraceStep&)> on_step;
};

struct Trace {
  std::vector<TraceStep> steps;
  size_t count(ReductionTag tag,
               ReductionDetail detail = ReductionDetail::kNone) const;
};

struct NormalizeResult {
  Deriv deriv;
  Trace trace;
};

class FuelExhausted : public Error {
 public:
  FuelExhausted(Deriv partial, Trace trace)
      : Error(ErrorCode::kFuelExhausted,
              "no normal form after " + std::to_string(trace.steps.size()) +
                  " steps"),
        partial_(std::move(partial)),
        trace_(std::move(trace)) {}
  const Deriv& partial() const { return partial_; }
  const Trace& trace() const { return trace_; }

 private:
  Deriv partial_;
  Trace trace_;
};

NormalizeResult normalize(const Deriv& d, const NormalizeConfig& cfg,
                          const DefTable& table);

// Path of the redex the strategy would contract next, if any.
std::optional<std::vector<int>> next_redex(const Deriv& d);

// ------------------------------------------------------ bounded search

struct SearchResult {
  std::optional<Deriv> proof;  // cut-free, checked
  size_t sequents = 0;         // search nodes visited
};

// Depth-bounded backward search for a cut-free derivation. Witnesses
// for allL/exR are drawn from the sequent's free variables and the
// nullary constants of the signature, closed under one application of
// each unary constructor. IL and CIR are not tried (they need an
// invariant), so this is an under-approximation except where no rule
// at all applies.
SearchResult bounded_search(const Sequent& goal, int depth,
                            const DefTable& table);

struct ProbeResult {
  bool proof_found = false;
  size_t sequents = 0;
  int depth = 0;
};

// Searches for a cut-free derivation of --> ff up to `depth`.
ProbeResult consistency_probe(const DefTable& table, int depth);

}  // namespace linc

#endif  // LINC_CUTRED_H_
