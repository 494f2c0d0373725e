// Copyright 2026 The litkg Authors. All Rights Reserved.
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

#ifndef LITKG_ERROR_HPP
#define LITKG_ERROR_HPP

#include <stdexcept>
#include <string>

namespace litkg {

/// Malformed or inconsistent input data. Maps to CLI exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A service response that could not be decoded. `field()` names the
/// offending element of the response.
class ParseError : public DataError {
 public:
  ParseError(std::string field, const std::string& what)
      : DataError("parse error in '" + field + "': " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Transport failure after exhausting retries. Maps to CLI exit code 3.
class NetworkError : public std::runtime_error {
 public:
  NetworkError(const std::string& what, int attempts, bool rate_limited = false)
      : std::runtime_error(what + " (after " + std::to_string(attempts) + " attempt" +
                           (attempts == 1 ? "" : "s") + ")"),
        attempts_(attempts),
        rate_limited_(rate_limited) {}

  int attempts() const noexcept { return attempts_; }
  bool rate_limited() const noexcept { return rate_limited_; }

 private:
  int attempts_;
  bool rate_limited_;
};

/// Violated precondition on caller-supplied arguments.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace litkg

#endif  // LITKG_ERROR_HPP
