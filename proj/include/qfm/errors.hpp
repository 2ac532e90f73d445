// Copyright 2026 The qfmap Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace qfm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Feature vector too short for an angle expression, or mismatched sample sizes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Requested simulation or decomposition exceeds the supported qubit count.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Malformed structural input: bad gate indices, non-unitary matrices, bad config.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, long line)
      : Error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};

class DegenerateLabelsError : public Error {
 public:
  using Error::Error;
};

class InvalidKernelError : public Error {
 public:
  using Error::Error;
};

}  // namespace qfm
