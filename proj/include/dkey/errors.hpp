// Copyright 2026 The dkey Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DKEY_ERRORS_HPP
#define DKEY_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dkey {

/// Caller violated a precondition or supplied an invalid value.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The protocol could not complete (retry budget exhausted, inconsistent
/// transcript, broken framing on reassembly).
class ProtocolFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reassembled bit stream does not split into whole codewords/characters.
class FramingError : public ProtocolFault {
 public:
  using ProtocolFault::ProtocolFault;
};

/// Malformed text input. `line()` is 1-based; 0 means "whole file".
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace dkey

#endif  // DKEY_ERRORS_HPP
