// Copyright 2026 The qbias Authors
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

namespace qbias {

/// Root of every error raised by the library. Subclasses name the failure
/// category so callers (the CLI in particular) can map them to exit codes.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Requested register or buffer exceeds the supported size.
class CapacityError : public Error {
  public:
    using Error::Error;
};

class IndexError : public Error {
  public:
    using Error::Error;
};

/// Length / parameter-count mismatch.
class ArityError : public Error {
  public:
    using Error::Error;
};

class RangeError : public Error {
  public:
    using Error::Error;
};

class DomainError : public Error {
  public:
    using Error::Error;
};

class InputError : public Error {
  public:
    using Error::Error;
};

class UnsupportedGateError : public Error {
  public:
    using Error::Error;
};

class ConvergenceError : public Error {
  public:
    using Error::Error;
};

/// Malformed file contents (bad magic, unknown tag).
class FormatError : public Error {
  public:
    using Error::Error;
};

/// Payload shorter or longer than its header promises.
class LengthError : public Error {
  public:
    using Error::Error;
};

/// Missing files, insufficient samples and other data-source problems.
class DataError : public Error {
  public:
    using Error::Error;
};

class ConfigError : public Error {
  public:
    using Error::Error;
};

}  // namespace qbias
