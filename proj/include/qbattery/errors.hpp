// Copyright 2026 The qbattery Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace qbattery {

/// Operand has a dimension the operation does not support.
class InvalidDimension : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Input violates an operation precondition (e.g. a non-Hermitian generator).
class ContractViolation : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A physical parameter lies outside its admissible range.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Search or run configuration is empty, degenerate or inconsistent.
class ConfigurationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace qbattery
