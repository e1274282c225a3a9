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
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "stripdet/descriptive.hpp"
#include "stripdet/model.hpp"

namespace stripdet {

/// Finite sub-probability measure: sorted atoms with non-negative weights of
/// total mass <= 1.
class EmpiricalMeasure {
 public:
  EmpiricalMeasure() = default;
  /// Equal weights 1/n.
  explicit EmpiricalMeasure(std::vector<double> atoms);
  EmpiricalMeasure(std::vector<double> atoms, std::vector<double> weights);

  const std::vector<double>& atoms() const { return atoms_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return atoms_.size(); }
  double total_mass() const;

  /// mu(|zeta| > r)
  double mass_beyond(double r) const;
  /// Restriction to [-r, r] and to its complement.
  EmpiricalMeasure restricted(double r) const;
  EmpiricalMeasure beyond(double r) const;

 private:
  std::vector<double> atoms_;
  std::vector<double> weights_;
};

/// u(x) = sum_i w_i log|x - zeta_i|; -inf when x is an atom.
double log_potential(const EmpiricalMeasure& mu, double x);

/// [m0, m1] with m0 < m1 and a base Gauss-Legendre order per panel.
struct IntervalSpec {
  double m0 = 0.0;
  double m1 = 1.0;
  int nodes = 16;

  void validate() const;
  double length() const { return m1 - m0; }
};

struct IntervalMoments {
  double mean = 0.0;
  double variance = 0.0;
  double l2_norm = 0.0;  // ||u||_I
  /// |variance change| between the last two node doublings.
  double refinement_gap = 0.0;
  int order = 0;  // Gauss-Legendre order of the accepted rule
  bool converged = false;
};

/// Mean, variance and L2 norm of u under the uniform probability on I.
/// Panels are graded geometrically toward `singular_points` inside I and
/// toward the endpoints; the rule order is doubled until the variance
/// changes by less than `tol`.
IntervalMoments interval_variance(const std::function<double(double)>& u,
                                  const IntervalSpec& interval,
                                  const std::vector<double>& singular_points = {},
                                  double tol = 1e-6, int max_order = 128);

/// Convenience overload for a log potential: grades toward the atoms in I.
IntervalMoments interval_variance(const EmpiricalMeasure& mu, const IntervalSpec& interval,
                                  double tol = 1e-6);

struct XiSamples {
  EmpiricalMeasure measure;
  /// Draws with H_{Lambda \ k} - E numerically singular; excluded.
  int singular = 0;
  int requested = 0;
};

/// i.i.d. draws of xi_k over independent disorder realizations on `g`.
XiSamples xi_samples(const DisorderSpec& spec, const StripGeometry& g, const Region& region,
                     const Site& k, double energy, int n_samples, std::uint64_t seed,
                     int workers = 1);

/// u_k(x) = E log|x - xi_k| from the empirical law of xi_k.
class ConditionalPotential {
 public:
  explicit ConditionalPotential(EmpiricalMeasure mu) : mu_(std::move(mu)) {}
  double operator()(double x) const { return log_potential(mu_, x); }
  const EmpiricalMeasure& measure() const { return mu_; }

 private:
  EmpiricalMeasure mu_;
};

ConditionalPotential conditional_potential(const DisorderSpec& spec, const StripGeometry& g,
                                           const Region& region, const Site& k,
                                           double energy, int n_samples,
                                           std::uint64_t seed, int workers = 1);

struct TailFit {
  std::vector<double> thresholds;
  std::vector<double> fractions;  // P(|X| > t)
  /// Fitted P(|X| > t) ~ A t^{-exponent} over thresholds with nonzero mass.
  double exponent = 0.0;
  double r_squared = 0.0;
  int points_used = 0;
};

TailFit power_tail_fit(const std::vector<double>& values,
                       const std::vector<double>& thresholds);

struct ResolventTail {
  TailFit fit;
  /// max over thresholds of t * P(|G(i, j)| >= t) / D0
  double worst_scaled = 0.0;
  int singular = 0;
};

/// Tail of a resolvent entry (H_Lambda - E)^{-1}(i, j) over disorder draws.
ResolventTail resolvent_tail(const DisorderSpec& spec, const StripGeometry& g,
                             const Region& region, const Site& i, const Site& j,
                             double energy, const std::vector<double>& thresholds,
                             int n_samples, std::uint64_t seed, int workers = 1);

struct BesselCheck {
  double total_variance = 0.0;  // Var log|f_Lambda|
  /// Var E(log|f_Lambda| | V_k) per site, bias-corrected nested estimate.
  std::vector<double> conditional_variances;
  double conditional_sum = 0.0;
  double total_stderr = 0.0;
  bool holds = false;  // total + 3 stderr >= sum
};

/// Nested Monte Carlo: `outer` draws of V_k, `inner` draws of the rest.
BesselCheck bessel_check(const DisorderSpec& spec, const StripGeometry& g,
                         const Region& region, double energy, int outer, int inner,
                         std::uint64_t seed, int workers = 1);

struct VarianceRow {
  std::string shape;
  long sites = 0;
  double variance = 0.0;
  Interval ci;
  double ratio = 0.0;  // var / (|Lambda| |I| inf_I rho)
  int excluded = 0;    // zero determinants
  bool insufficient = false;
};

struct VarianceGrowth {
  std::vector<VarianceRow> rows;
  LinearFit fit;  // var against |Lambda|
  double min_ratio = 0.0;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

VarianceGrowth variance_growth_experiment(const DisorderSpec& spec, int bandwidth,
                                          const std::vector<Region>& shapes, double energy,
                                          const IntervalSpec& interval, int n_samples,
                                          std::uint64_t seed, int workers = 1);

}  // namespace stripdet
