// Copyright 2026 The syndeepc Authors
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

namespace syndeepc {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Matrix or vector sizes that do not agree with each other.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Invalid user-supplied configuration or precondition violation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// An optimization or numerical routine could not produce a usable answer.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace syndeepc
