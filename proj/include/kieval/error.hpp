// Copyright 2026 The kieval Authors
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
//

#ifndef KIEVAL_ERROR_HPP_
#define KIEVAL_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace kieval {

// Base for every runtime failure the library reports. Precondition
// violations on pure numeric functions throw std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed persisted data (JSON records, enum names, run logs).
class ParseError : public Error {
 public:
  using Error::Error;
};

class DatasetError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Network-level failure. `retriable` covers timeouts, 429 and 5xx.
class TransportError : public Error {
 public:
  TransportError(std::string what, bool retriable, int status = 0)
      : Error(std::move(what)), retriable_(retriable), status_(status) {}

  bool retriable() const noexcept { return retriable_; }
  int status() const noexcept { return status_; }

 private:
  bool retriable_;
  int status_;
};

// The peer answered, but not in a way we can use (non-retriable 4xx,
// unparseable body).
class ProtocolError : public Error {
 public:
  ProtocolError(std::string what, int status = 0)
      : Error(std::move(what)), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

class FixtureError : public Error {
 public:
  FixtureError(std::string what, std::string digest)
      : Error(std::move(what)), digest_(std::move(digest)) {}
  const std::string& digest() const noexcept { return digest_; }

 private:
  std::string digest_;
};

// Evaluator verdict could not be turned into a TurnEvaluation.
class VerdictError : public Error {
 public:
  enum class Kind {
    kNoJsonObject,
    kMissingScore,
    kExtraScore,
    kScoreOutOfRange,
    kMissingStop,
    kStopWithoutReason,
    kMalformed,
  };

  VerdictError(Kind kind, std::string what)
      : Error(std::move(what)), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class InsufficientSamplesError : public Error {
 public:
  InsufficientSamplesError(std::size_t verified, std::size_t wanted)
      : Error("insufficient verified samples: " + std::to_string(verified) +
              " of " + std::to_string(wanted)),
        verified_(verified) {}
  std::size_t verified() const noexcept { return verified_; }

 private:
  std::size_t verified_;
};

}  // namespace kieval

#endif  // KIEVAL_ERROR_HPP_
