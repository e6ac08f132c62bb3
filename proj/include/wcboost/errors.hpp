/*
 * Copyright 2026 The wcboost Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wcboost {

enum class ErrorKind {
  kEmptyClass,
  kConfig,
  kContractViolation,
  kParse,
  kLabel,
  kDimension,
  kNoWeakHypothesis,
  kIo,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kEmptyClass: return "EmptyClass";
    case ErrorKind::kConfig: return "ConfigError";
    case ErrorKind::kContractViolation: return "ContractViolation";
    case ErrorKind::kParse: return "ParseError";
    case ErrorKind::kLabel: return "LabelError";
    case ErrorKind::kDimension: return "DimensionError";
    case ErrorKind::kNoWeakHypothesis: return "NoWeakHypothesis";
    case ErrorKind::kIo: return "IoError";
  }
  return "Unknown";
}

// Base of every exception thrown by the library. `kind()` is stable and is
// what the CLI reports in its machine-readable error document.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// `class_index` is 0-based; the message uses the external 1-based label.
class EmptyClassError : public Error {
 public:
  explicit EmptyClassError(int class_index)
      : Error(ErrorKind::kEmptyClass,
              "EmptyClass(" + std::to_string(class_index + 1) + ")"),
        class_index_(class_index) {}

  int class_index() const noexcept { return class_index_; }

 private:
  int class_index_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorKind::kParse,
              "ParseError(line " + std::to_string(line) + "): " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class LabelError : public Error {
 public:
  LabelError(std::size_t line, const std::string& what)
      : Error(ErrorKind::kLabel,
              "LabelError(line " + std::to_string(line) + "): " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

[[noreturn]] inline void throw_config(const std::string& message) {
  throw Error(ErrorKind::kConfig, message);
}

[[noreturn]] inline void throw_contract(const std::string& message) {
  throw Error(ErrorKind::kContractViolation, message);
}

[[noreturn]] inline void throw_dimension(const std::string& message) {
  throw Error(ErrorKind::kDimension, message);
}

}  // namespace wcboost
