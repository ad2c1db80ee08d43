// Copyright 2026 The snnv Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace snnv {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numeric argument lies outside the operation's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// The caller violated a precondition (wrong layer, bad label, bad flag).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Binary or text input does not follow its container format.
class FormatError : public Error {
 public:
  using Error::Error;
};

// A structured document parsed but its content is inconsistent.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Solver output could not be mapped back onto the constraint variables.
class DecodeError : public Error {
 public:
  using Error::Error;
};

// The solver's model disagrees with the simulator. This always indicates a
// bug in the constraint encoding, never a property of the network.
class EncodingError : public Error {
 public:
  using Error::Error;
};

}  // namespace snnv
