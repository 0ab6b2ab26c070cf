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

// JSON form of derivations and normalization traces.
//
// A derivation is a table of nodes in post-order (premises before the
// node), so shared subderivations are written once; the last node is
// the root. Variables are renumbered 0, 1, ... in order of first
// appearance, which makes the output independent of the process-wide
// id counter. Every node also carries its conclusion as text; the text
// is ignored on import.
//
//   type:  "nt" | "o" | [dom, cod]
//   term:  {"const": name, "type": ty} | {"logic": op, "type": ty}
//        | {"bvar": i} | {"var": id} | {"lam": ty, "hint": s, "body": t}
//        | {"app": t, "args": [t...]}
//   node:  {"rule", "hyps", "concl", "text", "premises": [index...],
//           "principal"?, "term"?, "eigen"?, "cut_pos"?, "unifiers"?}
//   file:  {"format": "linc-derivation", "version": 1,
//           "vars": [{"id", "name", "type"}], "nodes": [...],
//           "root": index}

#ifndef LINC_JSON_IO_H_
#define LINC_JSON_IO_H_

#include <string>

#include "linc/calculus.h"
#include "linc/cutred.h"

namespace linc {

std::string export_derivation(const Deriv& d);
// Throws kSyntaxError on malformed input. Variables get fresh ids.
Deriv import_derivation(const std::string& json);

// One JSON object, no trailing newline:
//   {"step", "path", "kind", "measure": [before, after],
//    "indm": [before, after]}
std::string trace_line(const TraceStep& s);

}  // namespace linc

#endif  // LINC_JSON_IO_H_
