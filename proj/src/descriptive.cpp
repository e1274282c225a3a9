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

#include "stripdet/descriptive.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stripdet/error.hpp"
#include "stripdet/rng.hpp"

namespace stripdet {

double sample_mean(std::span<const double> x) {
  if (x.empty()) return 0.0;
  // Shifted by the first entry so constant data has an exact mean.
  const double x0 = x.front();
  double s = 0.0;
  for (double v : x) s += v - x0;
  return x0 + s / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double m = sample_mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

double central_moment(std::span<const double> x, int p) {
  if (x.empty()) return 0.0;
  const double m = sample_mean(x);
  double s = 0.0;
  for (double v : x) s += std::pow(v - m, p);
  return s / static_cast<double>(x.size());
}

double lp_norm(std::span<const double> x, double p) {
  if (x.empty()) return 0.0;
  double s = 0.0;
  for (double v : x) s += std::pow(std::abs(v), p);
  return std::pow(s / static_cast<double>(x.size()), 1.0 / p);
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("linear_fit needs >= 2 points");
  const double n = static_cast<double>(x.size());
  const double mx = sample_mean(x), my = sample_mean(y);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw ConfigError("linear_fit: x values are all equal");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    sse += r * r;
  }
  f.r_squared = syy > 0 ? 1.0 - sse / syy : 1.0;
  f.slope_stderr = n > 2 ? std::sqrt(sse / (n - 2) / sxx) : 0.0;
  return f;
}

Interval bootstrap_variance_ci(std::span<const double> x, int resamples, double level,
                               std::uint64_t seed) {
  if (x.size() < 2 || resamples < 2) return {0.0, 0.0};
  CounterRng rng(seed);
  std::vector<double> stats(static_cast<std::size_t>(resamples));
  std::vector<double> draw(x.size());
  for (auto& s : stats) {
    for (auto& d : draw) d = x[rng.index(x.size())];
    s = sample_variance(draw);
  }
  std::sort(stats.begin(), stats.end());
  const double a = (1.0 - level) / 2.0;
  auto at = [&](double q) {
    auto i = static_cast<std::size_t>(std::clamp(q * (resamples - 1), 0.0, resamples - 1.0));
    return stats[i];
  };
  return {at(a), at(1.0 - a)};
}

double exceedance(std::span<const double> x, double threshold) {
  if (x.empty()) return 0.0;
  auto c = std::count_if(x.begin(), x.end(), [&](double v) { return v > threshold; });
  return static_cast<double>(c) / static_cast<double>(x.size());
}

double binomial_three_sigma(double p, std::size_t n) {
  if (n == 0) return 1.0;
  p = std::clamp(p, 0.0, 1.0);
  return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace stripdet
