// Copyright 2026 The mtmel Authors
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

#ifndef MTMEL_ERROR_HPP
#define MTMEL_ERROR_HPP

#include <stdexcept>
#include <string>

namespace mtmel {

/// Broad failure classes. The CLI maps each to its own exit code.
enum class ErrorCategory {
  InvalidArgument,  // caller violated a precondition
  Io,               // file could not be opened, read or written
  Format,           // bytes on disk do not follow the expected layout
  Domain,           // input is well-formed but the computation is undefined
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

[[noreturn]] inline void throw_invalid(const std::string& what) {
  throw Error(ErrorCategory::InvalidArgument, what);
}

[[noreturn]] inline void throw_format(const std::string& what) {
  throw Error(ErrorCategory::Format, what);
}

[[noreturn]] inline void throw_io(const std::string& what) {
  throw Error(ErrorCategory::Io, what);
}

[[noreturn]] inline void throw_domain(const std::string& what) {
  throw Error(ErrorCategory::Domain, what);
}

}  // namespace mtmel

#endif  // MTMEL_ERROR_HPP
