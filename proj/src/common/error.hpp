// Copyright 2026 The driveadapt Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace driveadapt {

enum class ErrorCode {
  kInvalidArgument = 1,
  kIo = 2,
  kState = 3,
  kDomain = 4,
};

// Base of every exception the core throws. The C API maps `code()` onto
// da_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline Error invalid_argument(const std::string& what) {
  return Error(ErrorCode::kInvalidArgument, what);
}
inline Error io_error(const std::string& what) {
  return Error(ErrorCode::kIo, what);
}
inline Error state_error(const std::string& what) {
  return Error(ErrorCode::kState, what);
}
inline Error domain_error(const std::string& what) {
  return Error(ErrorCode::kDomain, what);
}

}  // namespace driveadapt
