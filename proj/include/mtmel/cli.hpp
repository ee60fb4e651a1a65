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

#ifndef MTMEL_CLI_HPP
#define MTMEL_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "mtmel/error.hpp"

namespace mtmel::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,  // verify ran but at least one check failed
  kUsage = 2,        // bad flags or invalid argument values
  kIoError = 3,      // files could not be opened, read or written
  kFormatError = 4,  // malformed WAV, feature file or config file
  kDomainError = 5,  // computation undefined for the input (e.g. silent signal and --snr)
};

/// Names the default config file when --config is not given.
inline constexpr const char* kConfigEnvVar = "MTMEL_CONFIG";

int exit_code_for(ErrorCategory category) noexcept;

/// Entry point shared by the executable and the tests. args[0] is the program
/// name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mtmel::cli

#endif  // MTMEL_CLI_HPP
