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

#include "mise/error.hpp"

namespace mise {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Format: return "format";
    case ErrorKind::Truncation: return "truncation";
    case ErrorKind::UnsupportedDepth: return "unsupported-depth";
    case ErrorKind::EmptyInput: return "empty-input";
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::Size: return "size";
    case ErrorKind::Coverage: return "coverage";
    case ErrorKind::Duplicate: return "duplicate";
    case ErrorKind::KindMismatch: return "kind-mismatch";
    case ErrorKind::Alignment: return "alignment";
    case ErrorKind::Singularity: return "singularity";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::MissingUser: return "missing-user";
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::Vocabulary: return "vocabulary";
    case ErrorKind::Dependency: return "dependency";
    case ErrorKind::StaleCache: return "stale-cache";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace mise
