// Copyright 2026 The oscnet Authors
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

namespace oscnet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input documents (JSON syntax, missing keys, wrong types).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// The model is invalid or an operation's precondition is violated
/// (bad parameters, non-Hurwitz drift, ambiguous reference state).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed: singular system, loss of positive
/// definiteness, truncation tail too heavy.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace oscnet
