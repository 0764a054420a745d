// Copyright 2026 The fpselect Authors
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

#ifndef FPSELECT_ERROR_H_
#define FPSELECT_ERROR_H_

#include <stdexcept>
#include <string>

namespace fpselect {

enum class ErrorCode {
  // Input files or in-memory records violate the dataset/catalog schema.
  kSchema,
  // Parameters are out of range or reference unknown entities.
  kConfig,
  // A value could not be parsed under its attribute kind.
  kParse,
  // The operation's precondition on the data does not hold (e.g. no pairs).
  kPrecondition,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fpselect

#endif  // FPSELECT_ERROR_H_
