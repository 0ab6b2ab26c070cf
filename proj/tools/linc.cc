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

// linc check FILE...
// linc normalize FILE [--fuel N] [--trace DIR]
// linc stats FILE...
// linc export FILE --name THEOREM [--out PATH] [--normal]

#include <algorithm>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "linc/json_io.h"
#include "linc/run.h"

namespace {

int worst(const std::vector<linc::FileReport>& reps) {
  int code = 0;
  for (const auto& r : reps) code = std::max(code, r.exit_code());
  return code;
}

void print_stats(const std::string& label, const linc::DerivStats& s) {
  std::cout << "  " << label << ": size " << s.size << ", measure "
            << s.measure << ", ind-measure " << s.ind_measure << ", mc "
            << s.cuts << ", IL " << s.inductions << ", CIR " << s.coinductions
            << (s.cut_free ? ", cut-free" : "") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"linc: checker and cut eliminator for definitional reflection"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  linc::RunOptions opts;
  std::vector<std::string> files;
  app.add_flag("--infer-levels", opts.infer_levels,
               "compute missing stratification levels");

  auto* check = app.add_subcommand("check", "check every theorem and rejection");
  check->add_option("files", files, "scripts")->required()->check(CLI::ExistingFile);

  auto* norm = app.add_subcommand("normalize", "eliminate cuts from theorems "
                                               "named by `normalize`");
  norm->add_option("files", files, "scripts")->required()->check(CLI::ExistingFile);
  size_t fuel = 0;
  norm->add_option("--fuel", fuel, "reduction steps per theorem "
                                   "(default: LINC_FUEL or 1000000)");
  norm->add_option("--trace", opts.trace_dir, "write one JSONL trace per theorem");
  norm->add_flag("--debug", opts.norm.debug_recheck,
                 "re-check the derivation after every step");

  auto* stats = app.add_subcommand("stats", "size and measures of theorems");
  stats->add_option("files", files, "scripts")->required()->check(CLI::ExistingFile);

  auto* exp = app.add_subcommand("export", "write a checked theorem as JSON");
  std::string file, name, out;
  bool normal = false;
  exp->add_option("file", file, "script")->required()->check(CLI::ExistingFile);
  exp->add_option("--name", name, "theorem")->required();
  exp->add_option("--out", out, "output path (default: stdout)");
  exp->add_flag("--normal", normal, "export the cut-free form instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (*norm) {
    opts.normalize = true;
    if (fuel > 0) opts.norm.fuel = fuel;
  }
  if (*exp) {
    files = {file};
    opts.normalize = normal;
  }

  auto reps = linc::run_files(files, opts);

  if (*check || *norm) {
    for (const auto& r : reps) {
      std::cout << r.str();
      if (*norm)
        for (const auto& i : r.items)
          if (!i.trace_file.empty())
            std::cout << "  trace " << i.trace_file << "\n";
    }
    return worst(reps);
  }

  if (*stats) {
    for (const auto& r : reps) {
      for (const auto& i : r.items) {
        std::cout << r.file << ": " << i.str() << "\n";
        if (i.stats) print_stats("stats", *i.stats);
      }
    }
    return worst(reps);
  }

  // export
  const linc::FileReport& r = reps.front();
  if (r.exit_code() == 2) {
    std::cerr << r.str();
    return 2;
  }
  const auto& pool = normal ? r.normal_forms : r.derivations;
  auto it = pool.find(name);
  if (it == pool.end()) {
    std::cerr << r.str() << "no " << (normal ? "normalized " : "checked ")
              << "theorem named " << name << "\n";
    return 2;
  }
  std::string text = linc::export_derivation(it->second);
  if (out.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream f(out);
  f << text;
  if (!f) {
    std::cerr << "cannot write " << out << "\n";
    return 2;
  }
  return 0;
}
