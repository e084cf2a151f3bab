// Copyright 2026 The absorbeq Authors.
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

#ifndef ABSORBEQ_SRC_ERROR_H_
#define ABSORBEQ_SRC_ERROR_H_

#include <stdexcept>
#include <string>

namespace absorbeq {

// Broad failure classes; the C API maps them to status codes.
enum class ErrorKind {
  kInvalidInput,
  kUndefined,
  kSolverFailure,
  kSynthesisFailed,
  kUnsupported,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void InputError(const std::string& what) {
  throw Error(ErrorKind::kInvalidInput, what);
}

}  // namespace absorbeq

#endif  // ABSORBEQ_SRC_ERROR_H_
