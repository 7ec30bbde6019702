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

#ifndef MACROFACET_CLI_H_
#define MACROFACET_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace macrofacet {

// Exit codes of the `macrofacet` binary.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitLimit = 2,
  kExitInternal = 3,
};

// Entry point shared by tools/macrofacet.cc and the CLI tests. Results go to
// `out`; diagnostics go to `err` as one JSON object per line.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace macrofacet

#endif  // MACROFACET_CLI_H_
