// Copyright 2026 The widegamut Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WIDEGAMUT_ERROR_H_
#define WIDEGAMUT_ERROR_H_

#include <stdexcept>
#include <string>

namespace widegamut {

enum class ErrorCode {
  kDomain,
  kDimensionMismatch,
  kInvalidArgument,
  kBadMagic,
  kVersionMismatch,
  kTruncated,
  kMissingMetadata,
  kMalformedBase64,
  kPng,
  kIo,
};

const char* ErrorCodeName(ErrorCode code);

// All library failures surface as this exception; callers that need to
// branch on the failure kind inspect code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace widegamut

#endif  // WIDEGAMUT_ERROR_H_
