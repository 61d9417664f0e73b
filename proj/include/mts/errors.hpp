// Copyright 2026 The mts Authors
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

namespace mts {

/// Operand dimensions do not fit the operation.
class shape_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition on the input (UCPT, marginal, reduced...) fails.
class contract_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative routine did not converge.
class numerical_error : public std::runtime_error {
 public:
  numerical_error(const std::string& what, int sweeps)
      : std::runtime_error(what + " (after " + std::to_string(sweeps) +
                           " sweeps)"),
        sweeps_(sweeps) {}

  int sweeps() const noexcept { return sweeps_; }

 private:
  int sweeps_;
};

/// The normalizer of a perturbed diagonal Kraus set is singular.
class degenerate_epsilon_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace mts
