// revspeech/errors.hpp

// Copyright 2026  The revspeech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace revspeech {

/// Base of every error raised by the toolkit. The CLI maps any of these to
/// exit code 2 (data or format error).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed container or document structure (WAV header, lexicon, report).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Well-formed WAV using an encoding the toolkit does not read.
class UnsupportedFormatError : public FormatError {
 public:
  using FormatError::FormatError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent or out-of-range configuration values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A caller broke an operation's precondition (shape mismatch, empty input).
class ContractError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Model file with a bad version, broken invariants, or unparsable content.
class ModelFormatError : public Error {
 public:
  using Error::Error;
};

/// Features and models computed under different front-end configurations.
class BindingError : public Error {
 public:
  using Error::Error;
};

}  // namespace revspeech
