// Copyright 2026 The cqpt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CQPT_ERRORS_HPP
#define CQPT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cqpt {

// Base of every error raised by the library. The CLI maps the three
// subclasses onto exit codes 2, 3 and 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters or inputs (bad N_p, malformed config, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A solver cannot handle the request: size caps, sign problem, empty
// restricted subspace, missing closed form.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

class EmptySubspaceError : public CapabilityError {
 public:
  using CapabilityError::CapabilityError;
};

class SignProblemError : public CapabilityError {
 public:
  using CapabilityError::CapabilityError;
};

// Iterative solver hit its iteration cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace cqpt

#endif  // CQPT_ERRORS_HPP
