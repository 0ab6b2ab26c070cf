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

#include "linc/run.h"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "linc/elab.h"
#include "linc/json_io.h"
#include "linc/script.h"
#include "linc/transform.h"

namespace linc {

namespace {

void stats_rec(const Deriv& d, std::unordered_set<const DerivNode*>* seen,
               DerivStats* s) {
  if (!seen->insert(d.get()).second) return;
  if (d->rule == Rule::kMc) ++s->cuts;
  if (d->rule == Rule::kIL) ++s->inductions;
  if (d->rule == Rule::kCIR) ++s->coinductions;
  for (const Deriv& p : d->premises) stats_rec(p, seen, s);
}

std::optional<ErrorCode> error_code_from_name(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(ErrorCode::kIo); ++i) {
    auto c = static_cast<ErrorCode>(i);
    if (s == error_code_name(c)) return c;
  }
  return std::nullopt;
}

std::string first_line(const std::string& s) {
  auto n = s.find('\n');
  return n == std::string::npos ? s : s.substr(0, n);
}

ItemReport item(std::string kind, std::string name, bool ok = false,
                std::string msg = "") {
  ItemReport r;
  r.kind = std::move(kind);
  r.name = std::move(name);
  r.ok = ok;
  r.message = std::move(msg);
  return r;
}

}  // namespace

// Counts are over distinct nodes; size and the measures are those of
// the tree.
DerivStats deriv_stats(const Deriv& d) {
  DerivStats s;
  s.size = deriv_size(d);
  s.measure = measure(d);
  s.ind_measure = ind_measure(d);
  std::unordered_set<const DerivNode*> seen;
  stats_rec(d, &seen, &s);
  s.cut_free = s.cuts == 0;
  return s;
}

std::string ItemReport::str() const {
  std::ostringstream o;
  o << (ok ? "ok   " : "FAIL ") << kind;
  if (!name.empty()) o << " " << name;
  if (!message.empty()) o << ": " << message;
  return o.str();
}

int FileReport::exit_code() const {
  if (usage_error) return 2;
  for (const auto& i : items)
    if (!i.ok) return 1;
  return 0;
}

std::string FileReport::str() const {
  std::ostringstream o;
  for (const auto& i : items) o << file << ": " << i.str() << "\n";
  return o.str();
}

namespace {

class ScriptRun {
 public:
  ScriptRun(const std::string& file, const RunOptions& opts)
      : opts_(opts), el_(LoadOptions{opts.infer_levels}) {
    rep_.file = file;
  }

  FileReport run(const std::string& text) {
    try {
      script_ = parse_script(text);
    } catch (const Error& e) {
      rep_.usage_error = true;
      rep_.items.push_back(item("parse", "", false, e.what()));
      return std::move(rep_);
    }
    for (const Decl& d : script_.decls) {
      if (!step(d)) break;
    }
    if (!done_) seal();  // a file may end with its definitions
    if (expected_ && !done_)
      add(item("expect-error", *expected_, false,
           "the definitions were accepted"));
    rep_.table = el_.table();
    return std::move(rep_);
  }

 private:
  void add(ItemReport r) { rep_.items.push_back(std::move(r)); }

  // False when processing of the file should stop.
  bool load_error(const Error& e) {
    if (expected_) {
      bool hit = error_code_name(e.code()) == *expected_;
      add(item("expect-error", *expected_, hit,
           hit ? first_line(e.what()) : std::string("got ") + e.what()));
      done_ = true;
      return false;
    }
    add(item("load", "", false, e.what()));
    done_ = true;
    return false;
  }

  bool seal() {
    if (el_.sealed()) return true;
    try {
      el_.seal();
    } catch (const Error& e) {
      return load_error(e);
    }
    return true;
  }

  bool step(const Decl& d) {
    switch (d.kind) {
      case DeclKind::kType: case DeclKind::kConst: case DeclKind::kDefine:
      case DeclKind::kLevel:
        try {
          el_.declare(d);
        } catch (const Error& e) {
          return load_error(e);
        }
        return true;
      case DeclKind::kExpectError:
        if (!error_code_from_name(d.expect)) {
          add(item("expect-error", d.expect, false, "unknown error code"));
          done_ = true;
          return false;
        }
        expected_ = d.expect;
        return true;
      default:
        break;
    }
    if (!seal()) return false;
    if (expected_) {
      // The definitions were accepted, so there is nothing more to see.
      return false;
    }
    switch (d.kind) {
      case DeclKind::kTheorem: theorem(d); break;
      case DeclKind::kReject: reject(d); break;
      case DeclKind::kNormalize: normalize_item(d); break;
      default: break;
    }
    return true;
  }

  void theorem(const Decl& d) {
    ItemReport r = item("theorem", d.name);
    try {
      Statement st = el_.statement(d);
      Deriv pi = el_.prove(st.goal, d.proof);
      CheckReport cr = check_derivation(pi, el_.table());
      if (!cr.ok) {
        r.message = first_line(cr.str());
      } else if (!same_sequent(pi->concl, st.goal.seq)) {
        r.message = "proves " + pi->concl.str() + " instead of " + st.goal.seq.str();
      } else {
        r.ok = true;
        r.stats = deriv_stats(pi);
        el_.add_theorem(d.name, st, pi);
        rep_.derivations[d.name] = pi;
      }
    } catch (const Error& e) {
      r.message = e.what();
    }
    add(std::move(r));
  }

  void reject(const Decl& d) {
    ItemReport r = item("reject", d.name);
    auto want = check_error_from_name(d.expect);
    if (!want) {
      r.message = "unknown check error class " + d.expect;
      add(std::move(r));
      return;
    }
    try {
      Statement st = el_.statement(d);
      Deriv pi;
      try {
        pi = el_.prove(st.goal, d.proof);
      } catch (const ProofError& e) {
        r.ok = e.kind() == *want;
        r.message = (r.ok ? "" : "wrong class: ") + std::string(e.what());
        add(std::move(r));
        return;
      }
      CheckReport cr = check_derivation(pi, el_.table());
      for (const auto& f : cr.failures)
        if (f.kind == *want) {
          r.ok = true;
          r.message = "at [" + f.path + "] " + rule_name(f.rule) + ": " + f.message;
          break;
        }
      if (!r.ok)
        r.message = cr.ok ? "the derivation was accepted"
                          : "wrong class: " + first_line(cr.str());
    } catch (const Error& e) {
      r.message = e.what();
    }
    add(std::move(r));
  }

  void normalize_item(const Decl& d) {
    auto it = rep_.derivations.find(d.name);
    if (it == rep_.derivations.end()) {
      add(item("normalize", d.name, false, "no checked theorem of that name"));
      return;
    }
    if (!opts_.normalize) return;
    ItemReport r = item("normalize", d.name);
    const Deriv& pi = it->second;
    r.stats = deriv_stats(pi);
    Trace trace;
    try {
      NormalizeResult nr = normalize(pi, opts_.norm, el_.table());
      trace = nr.trace;
      r.steps = trace.steps.size();
      CheckReport cr = check_derivation(nr.deriv, el_.table());
      r.normal_stats = deriv_stats(nr.deriv);
      if (!cr.ok)
        r.message = "normal form does not check: " + first_line(cr.str());
      else if (!is_cut_free(nr.deriv))
        r.message = "normal form is not cut-free";
      else if (!same_sequent(nr.deriv->concl, pi->concl))
        r.message = "normal form changed the end sequent";
      else
        r.ok = true;
      if (r.ok) {
        r.message = std::to_string(r.steps) + " step(s), size " +
                    std::to_string(r.stats->size) + " -> " +
                    std::to_string(r.normal_stats->size);
        rep_.normal_forms[d.name] = nr.deriv;
      }
    } catch (const FuelExhausted& e) {
      trace = e.trace();
      r.steps = trace.steps.size();
      r.message = e.what();
    } catch (const Error& e) {
      r.message = e.what();
    }
    if (!opts_.trace_dir.empty()) r.trace_file = write_trace(d.name, trace, &r);
    add(std::move(r));
  }

  std::string write_trace(const std::string& name, const Trace& t, ItemReport* r) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(opts_.trace_dir, ec);
    std::string stem = fs::path(rep_.file).stem().string();
    fs::path p = fs::path(opts_.trace_dir) / (stem + "." + name + ".jsonl");
    std::ofstream out(p);
    for (const TraceStep& s : t.steps) out << trace_line(s) << "\n";
    if (!out) {
      r->ok = false;
      r->message += " (cannot write " + p.string() + ")";
    }
    return p.string();
  }

  const RunOptions& opts_;
  Elaborator el_;
  Script script_;
  FileReport rep_;
  std::optional<std::string> expected_;
  bool done_ = false;
};

}  // namespace

FileReport run_script(const std::string& file, const std::string& text,
                      const RunOptions& opts) {
  return ScriptRun(file, opts).run(text);
}

FileReport run_file(const std::string& path, const RunOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    FileReport r;
    r.file = path;
    r.usage_error = true;
    r.items.push_back(item("load", "", false, "cannot read " + path));
    return r;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return run_script(path, ss.str(), opts);
}

std::vector<FileReport> run_files(const std::vector<std::string>& paths,
                                  const RunOptions& opts) {
  std::vector<FileReport> out(paths.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i; (i = next.fetch_add(1)) < paths.size();)
      out[i] = run_file(paths[i], opts);
  };
  size_t n = std::min<size_t>(paths.size(),
                              std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (size_t i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace linc
