/* Copyright 2026 The collperf Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef COLLPERF_ERROR_HPP_
#define COLLPERF_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace collperf {

// Base class for every error the library reports. Input problems are
// reported through exceptions; programming errors use assertions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input text could not be parsed. `where` is a human readable position,
// e.g. "line 4, field 2" or "samples[3].g_us".
class ParseError : public Error {
 public:
  ParseError(const std::string& where, const std::string& what)
      : Error(where.empty() ? what : where + ": " + what),
        where_(where),
        detail_(what) {}
  const std::string& where() const noexcept { return where_; }
  // Message without the position prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string where_;
  std::string detail_;
};

// Input parsed but violates a domain invariant (non-positive value,
// duplicate size, missing 1-byte sample, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A request is malformed: unknown strategy, missing segment size,
// strategy not valid for the operation.
class RequestError : public Error {
 public:
  using Error::Error;
};

}  // namespace collperf

#endif  // COLLPERF_ERROR_HPP_
