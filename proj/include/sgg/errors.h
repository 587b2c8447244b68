/* Copyright 2026 The sggbench Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#ifndef SGG_ERRORS_H_
#define SGG_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sgg {

// Base of every data or contract failure raised by the library. The CLI maps
// these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. `line` is 1-based; 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message
                       : message),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A label string that the vocabulary does not contain.
class VocabularyError : public Error {
 public:
  VocabularyError(const std::string& label, std::size_t line = 0)
      : Error((line > 0 ? "line " + std::to_string(line) + ": " : "") +
              "unknown label \"" + label + "\""),
        label_(label),
        line_(line) {}
  const std::string& label() const { return label_; }
  std::size_t line() const { return line_; }

 private:
  std::string label_;
  std::size_t line_;
};

class DuplicateError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

// Prediction and ground-truth splits disagree on their image sets.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

// Input violates the contract of the requested task or operation.
class ContractError : public Error {
 public:
  using Error::Error;
};

class TaskContractError : public ContractError {
 public:
  using ContractError::ContractError;
};

// Ablation steps invoked out of order.
class HarnessOrderError : public ContractError {
 public:
  using ContractError::ContractError;
};

class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class AdapterError : public Error {
 public:
  using Error::Error;
};

}  // namespace sgg

#endif  // SGG_ERRORS_H_
