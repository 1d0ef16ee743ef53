// Copyright 2026 The pushforge Authors
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

#ifndef PUSHFORGE_ERRORS_HPP_
#define PUSHFORGE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace pushforge {

enum class ErrorKind {
  kInput = 1,    // dimension mismatch, invalid parameter
  kNumeric = 2,  // non-finite intermediate value
  kBudget = 3,   // region / matching / box budget exceeded
  kFormat = 4,   // malformed or unknown-version document
  kIo = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail_input(const std::string& what) {
  throw Error(ErrorKind::kInput, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) fail_input(what);
}

}  // namespace pushforge

#endif  // PUSHFORGE_ERRORS_HPP_
