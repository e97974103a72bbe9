// heat/errors.h

// Copyright 2026  heatkit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef HEAT_ERRORS_H_
#define HEAT_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace heat {

// Malformed input text (RTTM, SegLST, timing logs, STNO files).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string &what) : std::runtime_error(what) {}
  ParseError(const std::string &what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  // 1-based line number, 0 when not line-oriented.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_ = 0;
};

// Arguments that violate an operation's preconditions.
class InvalidArgument : public std::invalid_argument {
 public:
  explicit InvalidArgument(const std::string &what)
      : std::invalid_argument(what) {}
};

// Requests outside what the toolkit supports (e.g. more than two hypothesis
// streams) or generator targets that cannot be met.
class Unsupported : public std::runtime_error {
 public:
  explicit Unsupported(const std::string &what) : std::runtime_error(what) {}
};

}  // namespace heat

#endif  // HEAT_ERRORS_H_
