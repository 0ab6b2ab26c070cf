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

#include "linc/json_io.h"

#include <map>

#include "json.hpp"

namespace linc {
namespace {

using json = nlohmann::ordered_json;

constexpr const char* kOps[] = {"top", "bot",  "and",    "or",
                                "imp", "eq",   "forall", "exists"};

json type_json(const Type& t) {
  if (t.is_arrow()) return json::array({type_json(t.dom()), type_json(t.cod())});
  if (t.is_prop()) return "o";
  return t.name();
}

class Writer {
 public:
  json run(const Deriv& root) {
    int r = visit(root);
    json out;
    out["format"] = "linc-derivation";
    out["version"] = 1;
    out["vars"] = vars_;
    out["nodes"] = nodes_;
    out["root"] = r;
    return out;
  }

 private:
  int var(const Var& v) {
    auto it = ids_.find(v.id);
    if (it != ids_.end()) return it->second;
    int id = static_cast<int>(ids_.size());
    ids_[v.id] = id;
    vars_.push_back({{"id", id}, {"name", v.name}, {"type", type_json(v.type)}});
    return id;
  }

  json term(const Term& t) {
    switch (t.kind()) {
      case Term::Kind::kConst:
        return {{"const", t.name()}, {"type", type_json(t.type())}};
      case Term::Kind::kLogic:
        return {{"logic", kOps[static_cast<int>(t.op())]},
                {"type", type_json(t.type())}};
      case Term::Kind::kBVar: return {{"bvar", t.index()}};
      case Term::Kind::kFVar: return {{"var", var(t.var())}};
      case Term::Kind::kLam:
        return {{"lam", type_json(t.type())},
                {"hint", t.name()},
                {"body", term(t.body())}};
      case Term::Kind::kApp: {
        json args = json::array();
        for (const Term& a : t.args()) args.push_back(term(a));
        return {{"app", term(t.head())}, {"args", args}};
      }
    }
    return nullptr;
  }

  int visit(const Deriv& d) {
    auto it = seen_.find(d.get());
    if (it != seen_.end()) return it->second;
    json prem = json::array();
    for (const Deriv& p : d->premises) prem.push_back(visit(p));
    const DerivNode& n = *d;
    json j;
    j["rule"] = rule_name(n.rule);
    j["text"] = n.concl.str();
    json hyps = json::array();
    for (const Term& h : n.concl.hyps) hyps.push_back(term(h));
    j["hyps"] = hyps;
    j["concl"] = term(n.concl.concl);
    if (n.principal >= 0) j["principal"] = n.principal;
    if (n.term) j["term"] = term(*n.term);
    if (!n.eigen.empty()) {
      json e = json::array();
      for (const Var& v : n.eigen) e.push_back(var(v));
      j["eigen"] = e;
    }
    if (!n.cut_pos.empty() || n.rule == Rule::kMc) j["cut_pos"] = n.cut_pos;
    if (n.rule == Rule::kEqL) {
      json us = json::array();
      for (const Subst& s : n.unifiers) {
        json u = json::array();
        for (const auto& [id, vt] : s.entries())
          u.push_back({{"var", var(vt.first)}, {"term", term(vt.second)}});
        us.push_back(u);
      }
      j["unifiers"] = us;
    }
    j["premises"] = prem;
    int idx = static_cast<int>(nodes_.size());
    nodes_.push_back(std::move(j));
    seen_[d.get()] = idx;
    return idx;
  }

  std::map<uint64_t, int> ids_;
  std::map<const DerivNode*, int> seen_;
  json vars_ = json::array();
  json nodes_ = json::array();
};

[[noreturn]] void bad(const std::string& m) {
  throw Error(ErrorCode::kSyntaxError, "derivation JSON: " + m);
}

class Reader {
 public:
  Deriv run(const json& j) {
    if (!j.is_object() || j.value("format", "") != "linc-derivation")
      bad("not a linc-derivation document");
    if (j.value("version", 0) != 1) bad("unsupported version");
    for (const json& v : j.at("vars")) {
      int id = v.at("id").get<int>();
      vars_[id] = fresh_var(v.at("name").get<std::string>(), type(v.at("type")));
    }
    const json& nodes = j.at("nodes");
    for (const json& n : nodes) built_.push_back(node(n));
    int r = j.at("root").get<int>();
    if (r < 0 || r >= static_cast<int>(built_.size())) bad("root out of range");
    return built_[r];
  }

 private:
  Type type(const json& t) {
    if (t.is_string()) {
      std::string s = t.get<std::string>();
      return s == "o" ? Type::Prop() : Type::Base(s);
    }
    if (t.is_array() && t.size() == 2) return Type::Arrow(type(t[0]), type(t[1]));
    bad("bad type " + t.dump());
  }

  const Var& var(const json& id) {
    auto it = vars_.find(id.get<int>());
    if (it == vars_.end()) bad("unknown variable " + id.dump());
    return it->second;
  }

  Term term(const json& t) {
    if (t.contains("const"))
      return Term::Const(t["const"].get<std::string>(), type(t.at("type")));
    if (t.contains("logic")) {
      std::string op = t["logic"].get<std::string>();
      for (int i = 0; i < 8; ++i)
        if (op == kOps[i]) return Term::Logic(static_cast<LogicOp>(i), type(t.at("type")));
      bad("unknown connective " + op);
    }
    if (t.contains("bvar")) return Term::BVar(t["bvar"].get<int>());
    if (t.contains("var")) return Term::FVar(var(t["var"]));
    if (t.contains("lam"))
      return Term::Lam(type(t["lam"]), t.value("hint", "x"), term(t.at("body")));
    if (t.contains("app")) {
      std::vector<Term> args;
      for (const json& a : t.at("args")) args.push_back(term(a));
      return Term::App(term(t["app"]), std::move(args));
    }
    bad("bad term " + t.dump());
  }

  Deriv node(const json& j) {
    DerivNode n;
    auto r = rule_from_name(j.at("rule").get<std::string>());
    if (!r) bad("unknown rule " + j["rule"].dump());
    n.rule = *r;
    for (const json& h : j.at("hyps")) n.concl.hyps.push_back(term(h));
    n.concl.concl = term(j.at("concl"));
    n.principal = j.value("principal", -1);
    if (j.contains("term")) n.term = term(j["term"]);
    if (j.contains("eigen"))
      for (const json& e : j["eigen"]) n.eigen.push_back(var(e));
    if (j.contains("cut_pos")) n.cut_pos = j["cut_pos"].get<std::vector<int>>();
    if (j.contains("unifiers"))
      for (const json& u : j["unifiers"]) {
        Subst s;
        for (const json& b : u) s.bind(var(b.at("var")), term(b.at("term")));
        n.unifiers.push_back(s);
      }
    for (const json& p : j.at("premises")) {
      int i = p.get<int>();
      if (i < 0 || i >= static_cast<int>(built_.size()))
        bad("premise index " + std::to_string(i) + " is not an earlier node");
      n.premises.push_back(built_[i]);
    }
    return make_deriv(std::move(n));
  }

  std::map<int, Var> vars_;
  std::vector<Deriv> built_;
};

}  // namespace

std::string export_derivation(const Deriv& d) {
  return Writer().run(d).dump(1) + "\n";
}

Deriv import_derivation(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
    return Reader().run(j);
  } catch (const json::exception& e) {
    bad(e.what());
  }
}

std::string trace_line(const TraceStep& s) {
  json j;
  j["step"] = s.step;
  j["path"] = s.path;
  j["kind"] = s.kind.str();
  j["measure"] = {s.measure_before, s.measure_after};
  j["indm"] = {s.indm_before, s.indm_after};
  return j.dump();
}

}  // namespace linc
