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

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace stripdet {

struct CheckResult {
  std::string name;
  long trials = 0;
  long failures = 0;
  /// Largest observed violation measure; its meaning is given by `note`.
  double worst = 0.0;
  double tolerance = 0.0;
  std::string note;

  bool passed() const { return failures == 0; }
  nlohmann::json to_json() const;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  /// Suite-specific summary fields merged into the JSON report.
  nlohmann::json extra = nlohmann::json::object();

  bool passed() const;
  nlohmann::json to_json() const;
};

struct VerifyOptions {
  int route_configs = 200;
  int identity_samples = 50;
  int sf_samples = 20;
  int interlacing_trials = 10000;
  int partition_samples = 1000;
  int frame_gap_samples = 40;
  std::uint64_t seed = 0x5eed5eedULL;
  int workers = 1;
};

/// Unit-block frames, wedge expansion, the boundary-operator identity,
/// |det wedge^W T| = 1, the Dirichlet minor and the norm/minor constant.
SuiteReport verify_wedge(const VerifyOptions& options = {});

/// Weyl chains and the one-sided log-determinant bound over random
/// low-rank perturbations, plus grid-partition defects.
SuiteReport verify_interlacing(const VerifyOptions& options = {});

/// Route agreement, symplecticity, the recurrence and closed-form
/// Lyapunov exponents.
SuiteReport verify_determinants(const VerifyOptions& options = {});

/// "wedge", "interlacing", "determinants" or "all". Throws ConfigError for
/// other names.
std::vector<SuiteReport> run_suites(const std::string& name, const VerifyOptions& options = {});

}  // namespace stripdet
