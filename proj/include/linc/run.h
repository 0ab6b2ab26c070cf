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

// Running scripts: what `linc check`, `linc normalize` and `linc stats`
// do for one file, independent of the command line.

#ifndef LINC_RUN_H_
#define LINC_RUN_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "linc/calculus.h"
#include "linc/cutred.h"
#include "linc/defs.h"

namespace linc {

struct DerivStats {
  size_t size = 0;
  size_t measure = 0;
  size_t ind_measure = 0;
  size_t cuts = 0;          // mc nodes
  size_t inductions = 0;    // IL nodes
  size_t coinductions = 0;  // CIR nodes
  bool cut_free = true;
};

DerivStats deriv_stats(const Deriv& d);

struct RunOptions {
  bool infer_levels = false;
  bool normalize = false;  // act on `normalize` directives
  NormalizeConfig norm;
  std::string trace_dir;   // JSONL per normalized theorem when set
};

struct ItemReport {
  std::string kind;  // load, theorem, reject, expect-error, normalize
  std::string name;
  bool ok = false;
  std::string message;
  std::optional<DerivStats> stats;
  std::optional<DerivStats> normal_stats;  // after normalization
  size_t steps = 0;
  std::string trace_file;

  std::string str() const;
};

struct FileReport {
  std::string file;
  bool usage_error = false;  // unreadable or unparsable
  std::vector<ItemReport> items;
  std::map<std::string, Deriv> derivations;  // checked theorems
  std::map<std::string, Deriv> normal_forms;
  DefTable table;

  // 0: everything as expected, 1: an expectation failed, 2: usage.
  int exit_code() const;
  std::string str() const;
};

FileReport run_script(const std::string& file, const std::string& text,
                      const RunOptions& opts);
FileReport run_file(const std::string& path, const RunOptions& opts);

// Files are processed concurrently; reports come back in input order.
std::vector<FileReport> run_files(const std::vector<std::string>& paths,
                                  const RunOptions& opts);

}  // namespace linc

#endif  // LINC_RUN_H_
