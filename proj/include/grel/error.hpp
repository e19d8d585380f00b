// Copyright 2026 The grel Authors.
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

#pragma once

#include <stdexcept>
#include <string>

namespace grel {

/// Base class for all data-level failures (bad input files, broken
/// references, violated contracts). The CLI maps these to exit code 2.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const noexcept { return "data_error"; }
};

class ParseError : public DataError {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& msg)
      : DataError(source + ":" + std::to_string(line) + ": " + msg) {}
  explicit ParseError(const std::string& msg) : DataError(msg) {}
  const char* kind() const noexcept override { return "parse_error"; }
};

/// A reference to an id that does not exist. `id()` names the missing item.
class DanglingReference : public DataError {
 public:
  DanglingReference(const std::string& what, std::string id)
      : DataError(what), id_(std::move(id)) {}
  const std::string& id() const noexcept { return id_; }
  const char* kind() const noexcept override { return "dangling_reference"; }

 private:
  std::string id_;
};

/// Precondition violated by caller-supplied arguments (e.g. redundancy < 1).
class InvalidArgument : public DataError {
 public:
  explicit InvalidArgument(const std::string& what) : DataError(what) {}
  const char* kind() const noexcept override { return "invalid_argument"; }
};

}  // namespace grel
