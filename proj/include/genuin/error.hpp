// genuin/error.hpp

// Copyright 2026  The genuin authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef GENUIN_ERROR_HPP_
#define GENUIN_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace genuin {

// Error categories. Each maps to a distinct process exit code in the CLI.
enum class ErrorKind {
  kUsage,
  kIo,
  kFormat,
  kRange,
  kInput,
  kEstimation,
  kCapacity,
  kConfig,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

const char *ErrorKindName(ErrorKind kind);

// Exit status used by the command-line tool for each category.
//   0 ok, 2 usage, 3 io, 4 format, 5 range, 6 input, 7 estimation,
//   8 capacity, 9 config, 1 anything unexpected.
int ExitCode(ErrorKind kind);

}  // namespace genuin

#endif  // GENUIN_ERROR_HPP_
