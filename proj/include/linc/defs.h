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

// Definition tables and stratification.
//
// A clause p x1..xn := B stores its body abstracted over the predicate
// itself, as a closed term  \p \x1..\xn. B  in normal form, so unfolding
// with a replacement S is just normalize(body S t1 .. tn).

#ifndef LINC_DEFS_H_
#define LINC_DEFS_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "linc/term.h"

namespace linc {

enum class Flavor { kInductive, kCoinductive };

struct DefClause {
  std::string pred;
  Type type;
  Flavor flavor = Flavor::kInductive;
  Term body;  // \p \xs. B
};

using LevelMap = std::map<std::string, int>;

class DefTable {
 public:
  DefTable() = default;
  explicit DefTable(Signature sig) : sig_(std::move(sig)) {}

  const Signature& sig() const { return sig_; }
  Signature& mutable_sig() { return sig_; }

  // `open_body` mentions the predicate as a constant and is an
  // abstraction over the arguments. Checks types and closedness.
  void add_clause(const std::string& pred, Flavor flavor,
                  const Term& open_body);

  const DefClause* find(const std::string& pred) const;
  const std::vector<DefClause>& clauses() const { return clauses_; }

  void set_level(const std::string& pred, int lvl) { levels_[pred] = lvl; }
  // Declared level; predicates without a clause default to 0.
  std::optional<int> level(const std::string& pred) const;
  // Total map over all predicates of the signature. Defined predicates
  // without a declared level are left out.
  LevelMap level_map() const;

 private:
  Signature sig_;
  std::vector<DefClause> clauses_;
  std::map<std::string, size_t> index_;
  LevelMap levels_;
};

// Level of a normal formula. Throws kUnknownPredicate.
int compute_level(const Term& formula, const LevelMap& lm);

// lvl B <= lvl p and lvl B[\xs.tt / p] < lvl p.
bool dominated_by(const Term& formula, const std::string& pred,
                  const LevelMap& lm);

// B[\xs.tt / p].
Term vacuous_instance(const Term& formula, const std::string& pred);

struct StratIssue {
  std::string clause;
  std::string inequality;  // which of the two failed
  std::string message;
};

// Empty when every clause is dominated by its head.
std::vector<StratIssue> check_stratified(const DefTable& table);

// Levels computed bottom-up: lvl p = lvl B[\xs.tt/p] + 1. Levels already
// set in the table are taken as given. Throws
// kNotStratified on mutual recursion or a head under an implication.
LevelMap infer_levels(const DefTable& table);

// normalize(body replacement args). Throws kUndefinedPredicate.
Term unfold_body(const std::string& pred, const std::vector<Term>& args,
                 const Term& replacement, const DefTable& table);

// Head constant name when the formula is atomic on a defined predicate.
std::optional<std::string> defined_head(const Term& f, const DefTable& t);

}  // namespace linc

#endif  // LINC_DEFS_H_
