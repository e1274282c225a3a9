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
#include <span>
#include <vector>

namespace stripdet {

double sample_mean(std::span<const double> x);
/// Unbiased (n - 1) sample variance; 0 for n < 2.
double sample_variance(std::span<const double> x);
/// E (X - mean)^p with the empirical mean.
double central_moment(std::span<const double> x, int p);
/// (E |X|^p)^{1/p}
double lp_norm(std::span<const double> x, double p);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double slope_stderr = 0.0;
};

/// Ordinary least squares y = intercept + slope x.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Percentile bootstrap interval of the sample variance.
Interval bootstrap_variance_ci(std::span<const double> x, int resamples, double level,
                               std::uint64_t seed);

/// Fraction of entries strictly above `threshold`.
double exceedance(std::span<const double> x, double threshold);

/// 3-sigma binomial error for a proportion p estimated from n draws.
double binomial_three_sigma(double p, std::size_t n);

}  // namespace stripdet
