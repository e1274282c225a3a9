// Copyright 2026 The stripdet Authors
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

namespace stripdet {

/// Invalid configuration: bad geometry, unsupported density, malformed JSON.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite input, overflow, or a factorization that cannot proceed.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Index (column, site, region) outside the sampled extent.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Raised when an H - E block is numerically singular. Carries the
/// reciprocal condition estimate of the offending matrix.
class SingularityError : public NumericError {
 public:
  SingularityError(const std::string& what, double rcond)
      : NumericError(what), rcond_(rcond) {}
  double rcond() const noexcept { return rcond_; }

 private:
  double rcond_;
};

}  // namespace stripdet
