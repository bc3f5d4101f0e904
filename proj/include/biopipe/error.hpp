// Copyright 2026 The Biopipe Authors.
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

#ifndef BIOPIPE_ERROR_HPP_
#define BIOPIPE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace biopipe {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tensor or parameter dimensions do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Argument outside the domain of an operation (empty sequence, n = 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Caller broke an API contract (non-scalar loss, mismatched raw text, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent training / evaluation data.
class DataError : public Error {
 public:
  using Error::Error;
};

// Model package on disk is corrupt, incomplete, or from another version.
class PackageError : public Error {
 public:
  using Error::Error;
};

// Pipeline configuration names something that does not exist.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Text handed to the annotation API is unusable (bad UTF-8, bad tokens).
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace biopipe

#endif  // BIOPIPE_ERROR_HPP_
