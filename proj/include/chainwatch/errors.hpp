// Copyright 2026 The Chainwatch Authors
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

namespace chainwatch {

/// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A matrix required to be Hermitian deviates from its adjoint by more
/// than the configured tolerance. Carries the offending max deviation.
class NonHermitianError : public Error {
 public:
  NonHermitianError(const std::string& what, double deviation)
      : Error(what), deviation_(deviation) {}
  double deviation() const { return deviation_; }

 private:
  double deviation_;
};

/// A density-matrix spectrum contains an eigenvalue below -psd_tol.
class NotPositiveSemidefiniteError : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRangeError : public Error {
 public:
  using Error::Error;
};

class EmptySubsetError : public Error {
 public:
  using Error::Error;
};

class SameIndexError : public Error {
 public:
  using Error::Error;
};

class OrderViolationError : public Error {
 public:
  using Error::Error;
};

class UnknownLabelError : public Error {
 public:
  using Error::Error;
};

class NotAPartitionError : public Error {
 public:
  using Error::Error;
};

class DimensionCapExceededError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent configuration input (CLI / file loading).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A cross-checked quantity exceeded its tolerance; names the worst offender.
class ToleranceViolationError : public Error {
 public:
  ToleranceViolationError(const std::string& what, double deviation)
      : Error(what), deviation_(deviation) {}
  double deviation() const { return deviation_; }

 private:
  double deviation_ = 0.0;
};

}  // namespace chainwatch
