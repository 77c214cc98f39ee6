// Copyright 2026 The Conceptual Authors.
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

#ifndef CONCEPTUAL_ERROR_H_
#define CONCEPTUAL_ERROR_H_

#include <stdexcept>
#include <string>

namespace conceptual {

// Base class for every error raised by the library. `kind()` is a stable,
// machine-readable tag used by the CLI when reporting failures.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

// Malformed input that violates a documented precondition or invariant.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message)
      : Error("validation", message) {}
};

// File or document that failed to parse. `line` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, int line, const std::string& message);

  const std::string& source() const { return source_; }
  int line() const { return line_; }

 private:
  std::string source_;
  int line_;
};

// The backend could not serve a request (network, HTTP status, bad payload).
class BackendError : public Error {
 public:
  explicit BackendError(const std::string& message)
      : Error("backend", message) {}
};

// A REPLAY fixture store had no recorded response for a request.
class ReplayMiss : public Error {
 public:
  explicit ReplayMiss(const std::string& digest)
      : Error("replay_miss", "no recorded response for request: " + digest),
        digest_(digest) {}

  const std::string& digest() const { return digest_; }

 private:
  std::string digest_;
};

// Every completion was rejected by the seed filter.
class NoEligibleSeed : public Error {
 public:
  explicit NoEligibleSeed(const std::string& message)
      : Error("no_eligible_seed", message) {}
};

// NaN/Inf or a degenerate configuration in a numerical routine.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& message)
      : Error("numerical", message) {}
};

}  // namespace conceptual

#endif  // CONCEPTUAL_ERROR_H_
