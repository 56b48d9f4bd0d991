// Copyright 2026 The actlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ACTLAB_CORE_ERRORS_H_
#define ACTLAB_CORE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace actlab {

// Numeric values are part of the C ABI (see include/actlab/actlab.h).
enum class ErrorCode {
  kOk = 0,
  kInvalidArgument = 1,
  kZeroActProbability = 2,
  kOffPath = 3,
  kBiasRegime = 4,
  kBeliefInconsistent = 5,
  kMissingOffPath = 6,
  kInvalidSampleCount = 7,
  kConfigMismatch = 8,
  kUnresolved = 9,
  kInternal = 10,
};

const char* ErrorCodeName(ErrorCode code);

class ModelError : public std::runtime_error {
 public:
  ModelError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& what) {
  throw ModelError(code, what);
}

inline void Require(bool condition, const std::string& what) {
  if (!condition) Fail(ErrorCode::kInvalidArgument, what);
}

}  // namespace actlab

#endif  // ACTLAB_CORE_ERRORS_H_
