// Copyright 2026 The atrc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ATRC_ERROR_HPP_
#define ATRC_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace atrc {

// Error categories map onto CLI exit codes: config 2, data 3, numeric 4.
enum class ErrorKind { Config, Data, Numeric };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(ErrorKind::Numeric, what) {}
};

// Raised for codepoints outside the supported repertoire. Carries the
// position in the (normalized) input so callers can point at the culprit.
class UnsupportedCharacterError : public DataError {
 public:
  UnsupportedCharacterError(char32_t cp, std::size_t index, const std::string& what)
      : DataError(what), codepoint_(cp), index_(index) {}
  char32_t codepoint() const { return codepoint_; }
  std::size_t index() const { return index_; }

 private:
  char32_t codepoint_;
  std::size_t index_;
};

}  // namespace atrc

#endif  // ATRC_ERROR_HPP_
