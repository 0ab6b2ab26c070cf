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

#ifndef LINC_ERROR_H_
#define LINC_ERROR_H_

#include <stdexcept>
#include <string>

namespace linc {

enum class ErrorCode {
  kUnknownConstant,
  kTypeMismatch,
  kIllegalOInQuantifier,
  kNotAPattern,
  kUnknownPredicate,
  kUndefinedPredicate,
  kNotStratified,
  kDominationViolation,
  kNotARedex,
  kInternalInvariantViolation,
  kFuelExhausted,
  kSyntaxError,
  kDuplicateName,
  kBadDerivation,
  kIo,
};

const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + msg),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace linc

#endif  // LINC_ERROR_H_
