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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "linc/json_io.h"
#include "linc/run.h"

namespace linc {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> corpus_files() {
  std::vector<std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(LINC_CORPUS_DIR))
    if (e.path().extension() == ".linc") out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

std::string corpus(const std::string& rel) {
  return (fs::path(LINC_CORPUS_DIR) / rel).string();
}

RunOptions normalizing() {
  RunOptions o;
  o.normalize = true;
  o.norm.debug_recheck = true;
  return o;
}

TEST_CASE("every corpus file meets its expectations") {
  for (bool norm : {false, true}) {
    RunOptions opts = norm ? normalizing() : RunOptions{};
    for (const FileReport& r : run_files(corpus_files(), opts)) {
      CAPTURE(r.str());
      CHECK(r.exit_code() == 0);
      CHECK(!r.items.empty());
      for (const auto& [name, d] : r.normal_forms) {
        CAPTURE(name);
        CHECK(is_cut_free(d));
        CHECK(check_derivation(d, r.table).ok);
        CHECK(same_sequent(d->concl, r.derivations.at(name)->concl));
      }
    }
  }
}

TEST_CASE("normalize directives produce reductions") {
  FileReport r = run_file(corpus("cuts.linc"), normalizing());
  REQUIRE(r.exit_code() == 0);
  int normalized = 0;
  for (const auto& i : r.items)
    if (i.kind == "normalize") {
      ++normalized;
      REQUIRE(i.stats);
      REQUIRE(i.normal_stats);
      CHECK(i.stats->cuts > 0);
      CHECK(i.normal_stats->cut_free);
      CHECK(i.steps > 0);
    }
  CHECK(normalized >= 3);
  // Without the option the directives only name theorems.
  FileReport quiet = run_file(corpus("cuts.linc"), {});
  CHECK(quiet.normal_forms.empty());
}

TEST_CASE("exit codes") {
  CHECK(run_file("/nonexistent/x.linc", {}).exit_code() == 2);
  CHECK(run_script("t", "type nt\nconst z nt\n", {}).exit_code() == 2);
  CHECK(run_script("t", "type nt\nconst z : q\n", {}).exit_code() == 1);
  CHECK(run_script("t", "theorem t : --> ff := topR\n", {}).exit_code() == 1);
  CHECK(run_script("t", "theorem t : --> tt := topR\n", {}).exit_code() == 0);
  // A rejection that is accepted is a failed expectation.
  CHECK(run_script("t", "reject rule-shape t : --> tt := topR\n", {}).exit_code() == 1);
  CHECK(run_script("t", "reject rule-shape t : --> ff := topR\n", {}).exit_code() == 0);
  CHECK(run_script("t", "reject init t : --> ff := topR\n", {}).exit_code() == 1);
  CHECK(run_script("t", "reject nonsense t : --> ff := topR\n", {}).exit_code() == 1);
  CHECK(run_script("t", "theorem t : --> tt := topR\nnormalize u\n", {}).exit_code() == 1);
}

TEST_CASE("expect-error") {
  const char* neg =
      "type a\nexpect-error NotStratified\n"
      "inductive p : a -> o := x\\ p x => ff\nlevel p 1\n";
  CHECK(run_script("t", neg, {}).exit_code() == 0);
  const char* fine =
      "type a\nexpect-error NotStratified\ninductive p : a -> o := x\\ tt\nlevel p 1\n";
  CHECK(run_script("t", fine, {}).exit_code() == 1);
  const char* wrong =
      "type a\nexpect-error DuplicateName\n"
      "inductive p : a -> o := x\\ p x => ff\nlevel p 1\n";
  CHECK(run_script("t", wrong, {}).exit_code() == 1);
  CHECK(run_script("t", "expect-error NoSuchCode\n", {}).exit_code() == 1);
}

TEST_CASE("infer-levels fills in missing levels only") {
  const char* src =
      "type a\ninductive q : a -> o := x\\ tt\ninductive p : a -> o := x\\ q x\n";
  CHECK(run_script("t", src, {}).exit_code() == 1);
  RunOptions o;
  o.infer_levels = true;
  FileReport r = run_script("t", src, o);
  CHECK(r.exit_code() == 0);
  CHECK(r.table.level("p") == 2);
  FileReport m = run_file(corpus("reject/strat-mutual.linc"), o);
  CHECK(m.exit_code() == 0);
}

TEST_CASE("golden export of s_inj") {
  FileReport r = run_file(corpus("free-equality.linc"), {});
  REQUIRE(r.derivations.count("s_inj"));
  auto got = nlohmann::json::parse(export_derivation(r.derivations.at("s_inj")));
  auto want = nlohmann::json::parse(slurp(corpus("golden/s_inj.json")));
  CHECK(got == want);
}

TEST_CASE("export and import are inverse on the corpus") {
  int n = 0;
  for (const FileReport& r : run_files(corpus_files(), normalizing())) {
    for (const auto* pool : {&r.derivations, &r.normal_forms})
      for (const auto& [name, d] : *pool) {
        CAPTURE(r.file);
        CAPTURE(name);
        std::string text = export_derivation(d);
        Deriv back = import_derivation(text);
        CHECK(deriv_alpha_eq(d, back, true));
        CHECK(check_derivation(back, r.table).ok);
        // canonical numbering: exporting again gives the same bytes
        CHECK(export_derivation(back) == text);
        ++n;
      }
  }
  CHECK(n >= 20);
}

TEST_CASE("malformed JSON is a syntax error") {
  const char* bad[] = {
      "", "[]", "{\"format\":\"other\"}",
      "{\"format\":\"linc-derivation\",\"version\":1,\"vars\":[],\"nodes\":[],\"root\":0}",
      "{\"format\":\"linc-derivation\",\"version\":1,\"vars\":[],"
      "\"nodes\":[{\"rule\":\"frob\",\"hyps\":[],\"concl\":{\"logic\":\"top\",\"type\":\"o\"},"
      "\"premises\":[]}],\"root\":0}",
      "{\"format\":\"linc-derivation\",\"version\":1,\"vars\":[],"
      "\"nodes\":[{\"rule\":\"topR\",\"hyps\":[],\"concl\":{\"var\":7},"
      "\"premises\":[]}],\"root\":0}",
      "{\"format\":\"linc-derivation\",\"version\":1,\"vars\":[],"
      "\"nodes\":[{\"rule\":\"topR\",\"hyps\":[],\"concl\":{\"logic\":\"top\",\"type\":\"o\"},"
      "\"premises\":[0]}],\"root\":0}",
  };
  for (const char* s : bad) {
    CAPTURE(s);
    try {
      import_derivation(s);
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kSyntaxError);
    }
  }
}

TEST_CASE("traces are JSON lines with the documented keys") {
  fs::path dir = fs::temp_directory_path() / "linc_test_traces";
  fs::remove_all(dir);
  RunOptions o = normalizing();
  o.trace_dir = dir.string();
  FileReport r = run_file(corpus("append.linc"), o);
  REQUIRE(r.exit_code() == 0);
  int files = 0;
  for (const auto& i : r.items) {
    if (i.kind != "normalize") continue;
    ++files;
    REQUIRE(fs::exists(i.trace_file));
    CHECK(fs::path(i.trace_file).filename().string() == "append." + i.name + ".jsonl");
    std::ifstream in(i.trace_file);
    std::string line;
    size_t lines = 0;
    while (std::getline(in, line)) {
      auto j = nlohmann::json::parse(line);
      for (const char* k : {"step", "path", "kind", "measure", "indm"})
        CHECK(j.contains(k));
      CHECK(j["step"] == lines);
      CHECK(j["measure"].size() == 2);
      ++lines;
    }
    CHECK(lines == i.steps);
  }
  CHECK(files >= 2);
  fs::remove_all(dir);
}

TEST_CASE("fuel exhaustion is reported and traced") {
  RunOptions o;
  o.normalize = true;
  o.norm.fuel = 1;
  FileReport r = run_file(corpus("append.linc"), o);
  CHECK(r.exit_code() == 1);
  bool seen = false;
  for (const auto& i : r.items)
    if (i.kind == "normalize") {
      CHECK(!i.ok);
      CHECK(i.steps <= 1);
      seen = true;
    }
  CHECK(seen);
}

TEST_CASE("parallel runs keep the input order") {
  auto files = corpus_files();
  std::vector<std::string> many;
  for (int k = 0; k < 4; ++k) many.insert(many.end(), files.begin(), files.end());
  auto reps = run_files(many, {});
  REQUIRE(reps.size() == many.size());
  for (size_t i = 0; i < many.size(); ++i) CHECK(reps[i].file == many[i]);
  CHECK(run_files({}, {}).empty());
}

TEST_CASE("stats") {
  FileReport r = run_file(corpus("nat.linc"), {});
  REQUIRE(r.derivations.count("even_two"));
  DerivStats s = deriv_stats(r.derivations.at("even_two"));
  CHECK(s.size > 1);
  CHECK(s.cut_free);
  CHECK(s.cuts == 0);
  CHECK(s.measure > 0);
}

}  // namespace
}  // namespace linc
