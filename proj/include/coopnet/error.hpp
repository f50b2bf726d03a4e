// Copyright 2026 The coopnet Authors
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

#ifndef COOPNET_ERROR_HPP
#define COOPNET_ERROR_HPP

#include <stdexcept>
#include <string>

namespace coopnet {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A well-formed request that the model rejects (violations, no surplus, ...).
/// The CLI maps these to exit code 1.
class DomainFailure : public Error {
 public:
  using Error::Error;
};

/// Malformed input: unreadable files, bad arguments, unresolved references.
/// The CLI maps these to exit code 2.
class InputFailure : public Error {
 public:
  using Error::Error;
};

#define COOPNET_DECLARE_ERROR(Name, Base) \
  class Name : public Base {              \
   public:                                \
    using Base::Base;                     \
  }

COOPNET_DECLARE_ERROR(UnknownGoodType, InputFailure);
COOPNET_DECLARE_ERROR(UnknownCompany, InputFailure);
COOPNET_DECLARE_ERROR(DomainError, DomainFailure);
COOPNET_DECLARE_ERROR(InvalidGame, DomainFailure);
COOPNET_DECLARE_ERROR(InvalidOutcome, DomainFailure);
COOPNET_DECLARE_ERROR(InvalidStartFlow, DomainFailure);
COOPNET_DECLARE_ERROR(NoSurplus, DomainFailure);
COOPNET_DECLARE_ERROR(BadWeights, InputFailure);
COOPNET_DECLARE_ERROR(TargetSumMismatch, DomainFailure);
COOPNET_DECLARE_ERROR(IdenticalNodes, InputFailure);
COOPNET_DECLARE_ERROR(ConstraintViolation, DomainFailure);
COOPNET_DECLARE_ERROR(SemanticError, InputFailure);
COOPNET_DECLARE_ERROR(VersionError, InputFailure);

#undef COOPNET_DECLARE_ERROR

/// Syntax or shape error in a scenario document. `where()` is either a
/// "line N" position or a field path such as "companies[1].recipes[0]".
class ParseError : public InputFailure {
 public:
  ParseError(std::string where, const std::string& what)
      : InputFailure(where.empty() ? what : where + ": " + what),
        where_(std::move(where)) {}

  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

}  // namespace coopnet

#endif  // COOPNET_ERROR_HPP
