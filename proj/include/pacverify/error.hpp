// Copyright 2026 The pacverify Authors
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

#ifndef PACVERIFY_ERROR_HPP_
#define PACVERIFY_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace pacverify {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition on an argument or configuration value does not hold.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A tester was handed fewer samples than its configuration requires.
class SampleTooSmall : public Error {
 public:
  SampleTooSmall(std::size_t have, std::size_t need)
      : Error("sample too small: have " + std::to_string(have) + ", need " +
              std::to_string(need)),
        have_(have),
        need_(need) {}
  std::size_t have() const { return have_; }
  std::size_t need() const { return need_; }

 private:
  std::size_t have_;
  std::size_t need_;
};

// A prover message was missing, excess, or malformed. Verifiers turn this
// into a reject outcome; it never escapes run_interaction.
class ProtocolViolation : public Error {
 public:
  using Error::Error;
};

// An experiment spec failed validation. `field` names the offending entry.
class SpecError : public Error {
 public:
  SpecError(std::string field, const std::string& what)
      : Error("invalid spec field '" + field + "': " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// A transcript log could not be parsed. `line` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("parse error at line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace pacverify

#endif  // PACVERIFY_ERROR_HPP_
