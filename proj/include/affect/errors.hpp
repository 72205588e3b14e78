/*
 * Copyright (c) 2026, The affect authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace affect {

/** Base class for every error raised by the engine. */
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tensor or layer shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A caller broke a documented precondition.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// NaN/Inf produced or consumed.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Malformed user input (empty sequences, bad flags, bad config keys).
class InputError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Feature pack failed validation. The message names the offending file and row.
class ValidationError : public Error {
 public:
  enum class Kind { missing_file, row_count, dim_mismatch, label_range, manifest };

  ValidationError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class DataError : public Error {
 public:
  using Error::Error;
};

/// Training pipeline invoked out of order (e.g. missing stage-1 weights).
class StateError : public Error {
 public:
  using Error::Error;
};

/// Checkpoint magic or version is wrong.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Checkpoint is truncated or its payload disagrees with its header.
class CorruptionError : public Error {
 public:
  using Error::Error;
};

class TaskMismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace affect
