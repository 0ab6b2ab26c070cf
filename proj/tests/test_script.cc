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
#include "generators.h"
#include "linc/script.h"

namespace linc {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<fs::path> corpus_files() {
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(LINC_CORPUS_DIR))
    if (e.path().extension() == ".linc") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

// Message of the error raised by f, or "" when there is none.
template <class F>
std::string error_of(F f, ErrorCode* code = nullptr) {
  try {
    f();
  } catch (const Error& e) {
    if (code) *code = e.code();
    return e.what();
  }
  return "";
}

TEST_CASE("the nat corpus file has the expected shape") {
  Script s = parse_script(slurp(fs::path(LINC_CORPUS_DIR) / "nat.linc"));
  CHECK(s.count(DeclKind::kType) == 1);
  CHECK(s.count(DeclKind::kConst) == 2);
  // evod and its two views even/odd
  CHECK(s.count(DeclKind::kDefine) == 3);
  CHECK(s.count(DeclKind::kLevel) == 3);
  CHECK(s.find_derivation("even_two") != nullptr);
  CHECK(s.find_derivation("missing") == nullptr);
}

TEST_CASE("empty and header-only scripts") {
  CHECK(parse_script("").decls.empty());
  CHECK(parse_script("#linc 1\n").decls.empty());
  CHECK(parse_script("% only a comment\n").decls.empty());
  ErrorCode c{};
  CHECK(error_of([] { parse_script("#linc 2\n"); }, &c) != "");
  CHECK(c == ErrorCode::kSyntaxError);
}

TEST_CASE("syntax errors carry positions") {
  ErrorCode c{};
  std::string m = error_of([] { parse_script("type nt\nconst z ; nt\n"); }, &c);
  CHECK(c == ErrorCode::kSyntaxError);
  CHECK(m.find("2:9") != std::string::npos);

  m = error_of([] { parse_script("type nt\n\n  theorem t : --> tt := \n"); }, &c);
  CHECK(c == ErrorCode::kSyntaxError);
  CHECK(m.find("4:1") != std::string::npos);

  m = error_of([] { parse_expr("a /\\ ) b"); }, &c);
  CHECK(c == ErrorCode::kSyntaxError);
  CHECK(m.find("1:6") != std::string::npos);

  m = error_of([] { parse_script("type nt\ninductive p : nt -> o\n"); }, &c);
  CHECK(c == ErrorCode::kSyntaxError);

  CHECK(error_of([] { parse_script("type nt $\n"); }, &c) != "");
  CHECK(c == ErrorCode::kSyntaxError);
}

TEST_CASE("duplicate names") {
  ErrorCode c{};
  error_of([] { parse_script("type a\ntype a\n"); }, &c);
  CHECK(c == ErrorCode::kDuplicateName);
  error_of([] { parse_script("type a\nconst x : a\nconst y x : a\n"); }, &c);
  CHECK(c == ErrorCode::kDuplicateName);
  error_of([] { parse_script("type a\nconst p : a -> o\ninductive p : a -> o := x\\ tt\n"); },
           &c);
  CHECK(c == ErrorCode::kDuplicateName);
  error_of([] { parse_script("theorem t : tt := topR\ntheorem t : tt := topR\n"); }, &c);
  CHECK(c == ErrorCode::kDuplicateName);
  // separate namespaces
  CHECK(error_of([] { parse_script("type a\nconst a : a\ntheorem a : tt := topR\n"); }) ==
        "");
}

TEST_CASE("operator precedence and binders") {
  Expr e = parse_expr("a /\\ b \\/ c => d");
  REQUIRE(e.kind == ExprKind::kImp);
  CHECK(e.kids[0].kind == ExprKind::kOr);
  CHECK(e.kids[0].kids[0].kind == ExprKind::kAnd);

  e = parse_expr("a => b => c");
  CHECK(e.kids[1].kind == ExprKind::kImp);

  // A binder extends as far right as possible.
  e = parse_expr("forall x\\ p x /\\ q x");
  REQUIRE(e.kind == ExprKind::kForall);
  CHECK(e.kids[0].kind == ExprKind::kAnd);

  e = parse_expr("a /\\ exists y:nt\\ b y \\/ c");
  REQUIRE(e.kind == ExprKind::kAnd);
  CHECK(e.kids[1].kind == ExprKind::kExists);
  CHECK(e.kids[1].type->base == "nt");

  e = parse_expr("f x y = g (h x)");
  REQUIRE(e.kind == ExprKind::kEq);
  CHECK(e.kids[0].kind == ExprKind::kApp);
  CHECK(e.kids[0].kids[0].kind == ExprKind::kApp);

  e = parse_expr("lam x\\ app x x");
  REQUIRE(e.kind == ExprKind::kApp);
  CHECK(e.kids[1].kind == ExprKind::kAbs);

  e = parse_expr("f x:nt\\ x");
  REQUIRE(e.kind == ExprKind::kApp);
  CHECK(e.kids[1].type->base == "nt");
}

TEST_CASE("sequents, labels and proofs") {
  Script s = parse_script(
      "theorem t (x y : nt) (f : nt -> nt) : h: p x, q y --> r :=\n"
      "  impR; cut (a) as c using h { init } { orL c { id } { botL c } }\n");
  const Decl& d = s.decls[0];
  CHECK(d.params.size() == 3);
  CHECK(d.params[2].type.arrow.size() == 2);
  REQUIRE(d.goal.hyps.size() == 2);
  CHECK(d.goal.hyps[0].label == "h");
  CHECK(d.goal.hyps[1].label.empty());
  CHECK(d.proof.rule == "impR");
  CHECK(d.proof.chained);
  const ProofStep& cut = d.proof.premises[0];
  CHECK(cut.rule == "cut");
  CHECK(cut.args.size() == 5);
  CHECK(cut.args[0].term.has_value());
  CHECK(cut.premises.size() == 2);
  CHECK(cut.premises[1].premises.size() == 2);
}

TEST_CASE("printing is parseable: corpus") {
  auto files = corpus_files();
  CHECK(files.size() >= 20);
  for (const auto& f : files) {
    CAPTURE(f.string());
    Script a = parse_script(slurp(f));
    std::string printed = print_script(a);
    Script b = parse_script(printed);
    CHECK(a == b);
    CHECK(print_script(b) == printed);
  }
}

// ------------------------------------------------------ random syntax

class ExprGen {
 public:
  explicit ExprGen(testing::Rng* rng) : rng_(rng) {}

  Expr gen(int depth) {
    Expr e;
    if (depth <= 0 || rng_->coin(1, 5)) {
      int k = rng_->below(6);
      if (k == 0) e.kind = ExprKind::kTop;
      else if (k == 1) e.kind = ExprKind::kBot;
      else {
        e.kind = ExprKind::kName;
        e.name = rng_->pick(names_);
      }
      return e;
    }
    switch (rng_->below(9)) {
      case 0: case 1:
        e.kind = ExprKind::kApp;
        e.kids = {gen(depth - 1), gen(depth - 1)};
        break;
      case 2: e.kind = ExprKind::kAnd; e.kids = {gen(depth - 1), gen(depth - 1)}; break;
      case 3: e.kind = ExprKind::kOr; e.kids = {gen(depth - 1), gen(depth - 1)}; break;
      case 4: e.kind = ExprKind::kImp; e.kids = {gen(depth - 1), gen(depth - 1)}; break;
      case 5: e.kind = ExprKind::kEq; e.kids = {gen(depth - 1), gen(depth - 1)}; break;
      default: {
        int k = rng_->below(3);
        e.kind = k == 0 ? ExprKind::kAbs : k == 1 ? ExprKind::kForall : ExprKind::kExists;
        e.name = rng_->pick(names_);
        if (rng_->coin()) e.type = type(2);
        e.kids = {gen(depth - 1)};
      }
    }
    return e;
  }

  TypeExpr type(int depth) {
    TypeExpr t;
    if (depth <= 0 || rng_->coin()) {
      t.base = rng_->coin() ? "nt" : "o";
      return t;
    }
    t.arrow = {type(depth - 1), type(depth - 1)};
    return t;
  }

 private:
  testing::Rng* rng_;
  std::vector<std::string> names_ = {"a", "b", "f", "x'", "y_1", "nat", "app-x"};
};

TEST_CASE("property: parse(print(e)) == e on random expressions") {
  testing::Rng rng(41);
  ExprGen g(&rng);
  for (int i = 0; i < 3000; ++i) {
    Expr e = g.gen(5);
    std::string text = print_expr(e);
    CAPTURE(text);
    Expr back = parse_expr(text);
    REQUIRE(back == e);
  }
}

TEST_CASE("property: random sequents survive print and parse") {
  testing::Rng rng(43);
  ExprGen g(&rng);
  for (int i = 0; i < 500; ++i) {
    Decl d;
    d.kind = DeclKind::kTheorem;
    d.name = "t" + std::to_string(i);
    int n = rng.below(3);
    for (int k = 0; k < n; ++k)
      d.goal.hyps.push_back({rng.coin() ? "h" + std::to_string(k) : "", g.gen(3)});
    d.goal.concl = g.gen(4);
    d.proof.rule = "wL";
    ProofArg a;
    a.term = g.gen(3);
    d.proof.args.push_back(a);
    Script s;
    s.decls.push_back(d);
    std::string text = print_script(s);
    CAPTURE(text);
    REQUIRE(parse_script(text) == s);
  }
}

}  // namespace
}  // namespace linc
