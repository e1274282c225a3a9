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

#include <boost/rational.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "stripdet/descriptive.hpp"
#include "stripdet/model.hpp"
#include "stripdet/table.hpp"
#include "stripdet/transfer.hpp"

namespace stripdet {

struct MonteCarloSummary {
  std::size_t n = 0;  // samples kept
  double mean = 0.0;
  double variance = 0.0;
  /// Central moments of orders 2..6.
  std::array<double, 5> central{};
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
  /// Samples with f = 0 exactly; excluded from every statistic.
  std::size_t excluded = 0;
  /// log|f| per kept sample, in sample-index order.
  std::vector<double> values;

  double stderr_mean() const;
  /// Fraction of kept samples with value > threshold.
  double tail(double threshold) const;
  /// Deterministic fields only (no wall time).
  nlohmann::json to_json() const;
};

MonteCarloSummary summarize(std::vector<double> values, std::size_t excluded,
                            std::uint64_t seed);

/// log|f_Lambda^E| over i.i.d. realizations on `g`; sample i uses the stream
/// derive_seed(seed, i), so the result does not depend on `workers`.
MonteCarloSummary mc_logdet(const DisorderSpec& spec, const StripGeometry& g,
                            const Region& region, double energy, int n_samples,
                            std::uint64_t seed, int workers = 1);

struct TailRow {
  double k = 0.0;
  double threshold = 0.0;
  double fraction = 0.0;
  double bound = 0.0;
  /// 3 sqrt(bound (1 - bound) / n)
  double three_sigma = 0.0;
  bool within() const { return fraction <= bound + three_sigma; }
};

struct TailTable {
  std::string label;
  std::size_t n = 0;
  std::vector<TailRow> rows;
  /// Extra per-row columns (same length as rows), written after the core ones.
  std::vector<std::pair<std::string, std::vector<double>>> extra;

  /// Smallest grid K from which every later row is within bound + 3 sigma;
  /// NaN when the last row fails or the table is empty.
  double onset() const;
  bool non_increasing() const;
  Table to_table() const;
};

TailRow make_tail_row(double k, double threshold, double fraction, double bound,
                      std::size_t n);

/// P(|log|f_Lambda|| > |Lambda| K) against exp(-K/4), with the norm and
/// spectral-distance events sampled alongside ("norm_fraction",
/// "distance_fraction", "dominated").
TailTable cartan_a_tail(const DisorderSpec& spec, const StripGeometry& g,
                        const Region& region, double energy, const std::vector<double>& ks,
                        int n_samples, std::uint64_t seed, int workers = 1);

struct LdtResult {
  std::vector<TailTable> tables;  // one per rectangle
  std::vector<double> variances;
  std::vector<double> scaled_variances;  // var / |Lambda|^{1 + 2 eps}
  double variance_exponent = 0.0;        // slope of log var against log |Lambda|
};

/// P(|log|f| - E log|f|| > |Lambda|^{1/2 + eps} K) against exp(-K/2).
LdtResult ldt_experiment(const DisorderSpec& spec, int bandwidth,
                         const std::vector<Region>& rectangles, double energy, double epsilon,
                         const std::vector<double>& ks, int n_samples, std::uint64_t seed,
                         int workers = 1);

struct NegtailResult {
  TailTable table;  // P(log|f_N| < -10 K W), with "naive_fraction" for -K N W
  /// Samples below -2 N W (the naive threshold at K = 2).
  std::size_t naive_k2_count = 0;
  double fraction_k2 = 0.0;  // P(log|f_N| < -20 W)
  double bound_k2 = 0.0;     // exp(-1/2) + 3 sigma
  /// Joint logging: among samples with log|f| < 0, the share whose
  /// dist(E, spec H_N) is below the median distance. Empty when disabled.
  double small_distance_share = -1.0;
  MonteCarloSummary summary;
};

NegtailResult negtail_experiment(const DisorderSpec& spec, int columns, int width,
                                 int bandwidth, double energy, const std::vector<double>& ks,
                                 int n_samples, std::uint64_t seed, int workers = 1,
                                 bool joint_spectrum = false);

struct BernsteinConstants {
  double sigma2 = 0.0;
  double t = 0.0;
};

/// sigma^2 = max_i E X_i^2 and the smallest T >= sigma meeting
/// |E X_i^m| <= m! sigma^2 T^{m-2} / 2 for m = 3..max_m, from draws
/// (rows: realizations, columns: summands).
BernsteinConstants bernstein_constants(const std::vector<std::vector<double>>& draws,
                                       int max_m = 6);

struct BernsteinRow {
  double x = 0.0;
  double fraction = 0.0;  // P(|sum X_i| >= x)
  double bound = 0.0;     // exp(-x / 4T)
  double three_sigma = 0.0;
  bool admissible = false;  // x >= n sigma^2 / T
  bool within() const { return !admissible || fraction <= bound + three_sigma; }
};

struct BernsteinReport {
  std::string label;
  BernsteinConstants constants;
  std::size_t summands = 0;
  std::size_t realizations = 0;
  std::vector<BernsteinRow> rows;
  bool holds() const;
  Table to_table() const;
};

BernsteinReport bernstein_check(const std::vector<std::vector<double>>& draws,
                                const BernsteinConstants& constants,
                                const std::vector<double>& xs);

/// Centered, A_k^{-(1/2 + delta0)}-scaled cell log-determinants of a grid
/// partition, one report per family of equal cell shapes.
std::vector<BernsteinReport> bernstein_partition_experiment(
    const DisorderSpec& spec, int bandwidth, const Region& rectangle, int cell,
    double energy, double delta0, const std::vector<double>& xs, int n_samples,
    std::uint64_t seed, int workers = 1);

using Rational = boost::rational<long long>;

/// delta_0 = 1/2, delta_n = delta_{n-1} / (1 + 2 delta_{n-1}); n + 1 terms.
std::vector<Rational> delta_schedule(int n);

struct MultiscaleRow {
  int n2 = 0;
  int n1 = 0;
  double mean_small = 0.0;  // E log|f_{N2}| / N2
  double mean_large = 0.0;  // E log|f_{N1}| / N1
  double gap = 0.0;
  double gap_stderr = 0.0;
  double scale = 0.0;  // W log(N1 W) / N2
  double c = 0.0;      // gap / scale
};

struct MultiscaleResult {
  int width = 0;
  std::vector<MultiscaleRow> rows;
  double c_max = 0.0;
  Table to_table() const;
};

/// Comparison of E log|f_N|/N at N2 and N1 = N2^2 (or the given N1).
MultiscaleResult multiscale_compare(const DisorderSpec& spec, double energy, int width,
                                    int bandwidth, const std::vector<int>& n2_values,
                                    int n_samples, std::uint64_t seed, int workers = 1);

struct Decomposition {
  double x_minus = 0.0;  // E(1{log|f| < 0} log|f|)
  double x_mid = 0.0;    // E(1{0 <= log|f| <= cap} log|f|)
  double x_plus = 0.0;   // E(1{log|f| > cap} log|f|)
  double x_mid_sq = 0.0;
  double cap = 0.0;      // 2 (N W)^{1/2 + eps}
  double total = 0.0;    // E log|f|
  double chain_rhs = 0.0;  // (N W)^{-1/2 - eps} E(X^2) / 2 + E(X_-)
  /// |x_minus + x_mid + x_plus - total|
  double partition_error = 0.0;
};

Decomposition decompose(const std::vector<double>& logs, int columns, int width,
                        double epsilon);

struct PipelineReport {
  int columns = 0;
  int width = 0;
  double epsilon = 0.0;
  double mean_per_step = 0.0;  // E log|f_N| / N
  double mean_stderr = 0.0;    // of mean_per_step
  double gamma_sum = 0.0;
  double gamma_stderr = 0.0;
  double gap = 0.0;
  double scale = 0.0;  // W log(N W) / N
  double c = 0.0;      // gap / scale
  Decomposition decomposition;
  bool insufficient_n = false;
  nlohmann::json to_json() const;
};

struct PipelineOptions {
  long lyapunov_steps = 1 << 20;
  /// Regime N >= regime_constant W^{1 + 5 eps}.
  double regime_constant = 1.0;
};

PipelineReport lyapunov_sum_pipeline(const DisorderSpec& spec, double energy, int width,
                                     int bandwidth, int columns, double epsilon,
                                     int n_samples, std::uint64_t seed, int workers = 1,
                                     const PipelineOptions& options = {});

struct ConvergenceResult {
  std::vector<PipelineReport> reports;  // one per N, sharing one gamma sum
  double c_min = 0.0;
  double c_max = 0.0;
  double c_spread() const { return c_min > 0 ? c_max / c_min : INFINITY; }
  Table to_table() const;
};

ConvergenceResult convergence_experiment(const DisorderSpec& spec, double energy, int width,
                                         int bandwidth, const std::vector<int>& columns,
                                         int n_samples, std::uint64_t seed, int workers = 1,
                                         const PipelineOptions& options = {});

}  // namespace stripdet
