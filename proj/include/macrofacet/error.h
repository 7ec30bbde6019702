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

#ifndef MACROFACET_ERROR_H_
#define MACROFACET_ERROR_H_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace macrofacet {

// Base of every error the library raises. `code` is a stable machine-readable
// tag (e.g. LAMINARITY_VIOLATION); `witness` names the offending ids, nodes or
// JSON paths.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message,
        std::vector<std::string> witness = {})
      : std::runtime_error(message),
        code_(std::move(code)),
        witness_(std::move(witness)) {}

  const std::string& code() const { return code_; }
  const std::vector<std::string>& witness() const { return witness_; }

 private:
  std::string code_;
  std::vector<std::string> witness_;
};

// Malformed or inconsistent input.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A configured size ceiling was exceeded, or the request is infeasible.
class LimitError : public Error {
 public:
  using Error::Error;
};

// An internal invariant was broken. Always a bug.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace macrofacet

#endif  // MACROFACET_ERROR_H_
