// Copyright 2026 The Authors.
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

#ifndef MISE_ERROR_HPP
#define MISE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace mise {

/// Error classes raised by the toolkit. Each maps to a distinct process exit
/// code in the command-line front end.
enum class ErrorKind {
  Format,
  Truncation,
  UnsupportedDepth,
  EmptyInput,
  Dimension,
  Size,
  Coverage,
  Duplicate,
  KindMismatch,
  Alignment,
  Singularity,
  Divergence,
  MissingUser,
  Parameter,
  Vocabulary,
  Dependency,
  StaleCache,
  Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace mise

#endif  // MISE_ERROR_HPP
