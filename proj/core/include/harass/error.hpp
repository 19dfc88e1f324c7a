// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The harassment-miner Authors

#pragma once

#include <stdexcept>
#include <string>

namespace harass {

/// Root of every exception the library throws. `exit_code()` follows the CLI
/// convention: 2 usage, 3 I/O, 4 domain/validation.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 4; }
};

class UsageError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 2; }
};

class IoError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

/// Precondition or value-range violation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Operation not permitted in the object's current state.
class StateError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

/// Cohen's kappa with p_e = 1.
class UndefinedKappaError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Transport failure talking to an external inference service.
class NetworkError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

/// External service answered, but the payload violates the wire contract.
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace harass
