// Copyright 2026 The perfpriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PERFPRIV_ERRORS_HPP_
#define PERFPRIV_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace perfpriv {

// Base class for every error raised by this library. The CLI maps the
// concrete subclasses to process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Rejected inputs: malformed tables, invariant violations, parameters out
// of range. Exit code 2.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// A caller violated an operation's precondition (e.g. passing an
// asymmetric matrix to the symmetric eigensolver). Exit code 2.
class ContractViolationError : public InvalidInputError {
 public:
  using InvalidInputError::InvalidInputError;
};

// A numerical routine failed to converge or produced an inconsistent
// result. Exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// The requested computation would exceed a configured combinatorial cap.
// Exit code 4.
class SizeCapError : public Error {
 public:
  using Error::Error;
};

}  // namespace perfpriv

#endif  // PERFPRIV_ERRORS_HPP_
