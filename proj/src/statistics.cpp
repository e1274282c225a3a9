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

#include "stripdet/statistics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "stripdet/determinants.hpp"
#include "stripdet/error.hpp"
#include "stripdet/parallel.hpp"
#include "stripdet/perturbation.hpp"
#include "stripdet/rng.hpp"

namespace stripdet {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Clock = std::chrono::steady_clock;

/// log|f| per sample (NaN for f = 0), sample i from derive_seed(seed, i).
std::vector<double> sample_logs(const DisorderSpec& spec, const StripGeometry& g,
                                const Region& region, double energy, int n_samples,
                                std::uint64_t seed, int workers) {
  if (n_samples < 2) throw ConfigError("n_samples must be >= 2");
  if (!region.fits(g)) throw ConfigError("region does not fit the geometry");
  return parallel_map<double>(static_cast<std::size_t>(n_samples), workers,
                              [&](std::size_t i) {
                                SignedLogDet d = region_logdet(
                                    sample_disorder(g, spec, derive_seed(seed, i)), region,
                                    energy);
                                return d.is_zero() ? kNaN : d.log_abs;
                              });
}

std::string shape_name(const Region& r) {
  std::ostringstream os;
  os << (r.last_column() - r.first_column() + 1) << "x" << (r.highest_row() - r.lowest_row() + 1);
  return os.str();
}

StripGeometry covering(const Region& r, int bandwidth) {
  const int w = r.highest_row();
  return {w, std::min(bandwidth, w), r.last_column()};
}

}  // namespace

// Summaries

double MonteCarloSummary::stderr_mean() const {
  return n > 1 ? std::sqrt(variance / static_cast<double>(n)) : 0.0;
}

double MonteCarloSummary::tail(double threshold) const { return exceedance(values, threshold); }

nlohmann::json MonteCarloSummary::to_json() const {
  return {{"n", n},
          {"mean", mean},
          {"variance", variance},
          {"central_moments", central},
          {"seed", seed},
          {"excluded", excluded}};
}

MonteCarloSummary summarize(std::vector<double> values, std::size_t excluded,
                            std::uint64_t seed) {
  MonteCarloSummary s;
  s.seed = seed;
  s.excluded = excluded;
  std::erase_if(values, [&](double v) {
    if (std::isnan(v)) {
      ++s.excluded;
      return true;
    }
    return false;
  });
  s.n = values.size();
  s.mean = sample_mean(values);
  s.variance = sample_variance(values);
  for (int p = 2; p <= 6; ++p) s.central[p - 2] = central_moment(values, p);
  s.values = std::move(values);
  return s;
}

MonteCarloSummary mc_logdet(const DisorderSpec& spec, const StripGeometry& g,
                            const Region& region, double energy, int n_samples,
                            std::uint64_t seed, int workers) {
  const auto start = Clock::now();
  MonteCarloSummary s =
      summarize(sample_logs(spec, g, region, energy, n_samples, seed, workers), 0, seed);
  s.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return s;
}

// Tail tables

TailRow make_tail_row(double k, double threshold, double fraction, double bound,
                      std::size_t n) {
  TailRow r;
  r.k = k;
  r.threshold = threshold;
  r.fraction = fraction;
  r.bound = bound;
  r.three_sigma = binomial_three_sigma(bound, n);
  return r;
}

double TailTable::onset() const {
  if (rows.empty() || !rows.back().within()) return kNaN;
  std::size_t i = rows.size();
  while (i > 0 && rows[i - 1].within()) --i;
  return rows[i].k;
}

bool TailTable::non_increasing() const {
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].fraction > rows[i - 1].fraction) return false;
  return true;
}

Table TailTable::to_table() const {
  std::vector<std::string> cols{"K", "threshold", "fraction", "bound", "three_sigma", "within"};
  for (const auto& [name, _] : extra) cols.push_back(name);
  Table t(cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const TailRow& r = rows[i];
    std::vector<std::string> cells{format_double(r.k), format_double(r.threshold),
                                   format_double(r.fraction), format_double(r.bound),
                                   format_double(r.three_sigma), r.within() ? "1" : "0"};
    for (const auto& [_, v] : extra) cells.push_back(format_double(v[i]));
    t.add_row(std::move(cells));
  }
  return t;
}

TailTable cartan_a_tail(const DisorderSpec& spec, const StripGeometry& g,
                        const Region& region, double energy, const std::vector<double>& ks,
                        int n_samples, std::uint64_t seed, int workers) {
  if (n_samples < 2) throw ConfigError("n_samples must be >= 2");
  if (!region.fits(g)) throw ConfigError("region does not fit the geometry");
  struct Draw {
    double log_abs = kNaN;   // log|f|, -inf for f = 0
    double log_norm = 0.0;   // log(|E| + ||H||)
    double log_dist = 0.0;   // log dist(E, spec H)
  };
  const auto draws = parallel_map<Draw>(
      static_cast<std::size_t>(n_samples), workers, [&](std::size_t i) {
        const DisorderSample s = sample_disorder(g, spec, derive_seed(seed, i));
        const HamiltonianMatrix h = assemble_hamiltonian(s, region);
        const Eigen::VectorXd ev = sorted_eigenvalues(h.matrix);
        Draw d;
        SignedLogDet f = logdet_direct(h, energy);
        d.log_abs = f.is_zero() ? -std::numeric_limits<double>::infinity() : f.log_abs;
        d.log_norm = std::log(std::abs(energy) + ev.cwiseAbs().maxCoeff());
        d.log_dist = std::log((ev.array() - energy).abs().minCoeff());
        return d;
      });
  const double size = static_cast<double>(region.size());
  TailTable t;
  t.label = "cartan_a " + shape_name(region);
  t.n = draws.size();
  std::vector<double> norm_frac, dist_frac, dominated;
  for (double k : ks) {
    std::size_t hit = 0, norm_hit = 0, dist_hit = 0;
    bool dom = true;
    for (const Draw& d : draws) {
      const bool big = std::abs(d.log_abs) > size * k;
      const bool n_ev = d.log_norm > k, d_ev = d.log_dist < -k;
      hit += big;
      norm_hit += n_ev;
      dist_hit += d_ev;
      if (big && !(n_ev || d_ev)) dom = false;
    }
    const double nn = static_cast<double>(t.n);
    t.rows.push_back(make_tail_row(k, size * k, hit / nn, std::exp(-k / 4.0), t.n));
    norm_frac.push_back(norm_hit / nn);
    dist_frac.push_back(dist_hit / nn);
    dominated.push_back(dom ? 1.0 : 0.0);
  }
  t.extra = {{"norm_fraction", norm_frac}, {"distance_fraction", dist_frac},
             {"dominated", dominated}};
  return t;
}

LdtResult ldt_experiment(const DisorderSpec& spec, int bandwidth,
                         const std::vector<Region>& rectangles, double energy, double epsilon,
                         const std::vector<double>& ks, int n_samples, std::uint64_t seed,
                         int workers) {
  if (!(epsilon > 0)) throw ConfigError("epsilon must be positive");
  LdtResult out;
  std::vector<double> lx, ly;
  for (std::size_t r = 0; r < rectangles.size(); ++r) {
    const Region& rect = rectangles[r];
    if (!rect.is_rectangle()) throw ConfigError("ldt_experiment needs rectangles");
    MonteCarloSummary s = summarize(sample_logs(spec, covering(rect, bandwidth), rect, energy,
                                                n_samples, derive_seed(seed, r), workers),
                                    0, seed);
    const double size = static_cast<double>(rect.size());
    const double scale = std::pow(size, 0.5 + epsilon);
    TailTable t;
    t.label = "ldt " + shape_name(rect);
    t.n = s.n;
    for (double k : ks) {
      std::size_t hit = 0;
      for (double v : s.values) hit += std::abs(v - s.mean) > scale * k;
      t.rows.push_back(make_tail_row(k, scale * k, static_cast<double>(hit) / s.n,
                                     std::exp(-k / 2.0), s.n));
    }
    out.tables.push_back(std::move(t));
    out.variances.push_back(s.variance);
    out.scaled_variances.push_back(s.variance / std::pow(size, 1.0 + 2.0 * epsilon));
    if (s.variance > 0) {
      lx.push_back(std::log(size));
      ly.push_back(std::log(s.variance));
    }
  }
  if (lx.size() >= 2) out.variance_exponent = linear_fit(lx, ly).slope;
  return out;
}

NegtailResult negtail_experiment(const DisorderSpec& spec, int columns, int width,
                                 int bandwidth, double energy, const std::vector<double>& ks,
                                 int n_samples, std::uint64_t seed, int workers,
                                 bool joint_spectrum) {
  const StripGeometry g{width, bandwidth, columns};
  g.validate();
  const Region rect = Region::rectangle(1, columns, 1, width);
  NegtailResult out;
  std::vector<double> dist;
  if (joint_spectrum) {
    const auto joint = parallel_map<std::pair<double, double>>(
        static_cast<std::size_t>(n_samples), workers, [&](std::size_t i) {
          const DisorderSample s = sample_disorder(g, spec, derive_seed(seed, i));
          const HamiltonianMatrix h = assemble_hamiltonian(s, rect);
          SignedLogDet f = logdet_direct(h, energy);
          const Eigen::VectorXd ev = sorted_eigenvalues(h.matrix);
          return std::make_pair(f.is_zero() ? kNaN : f.log_abs,
                                (ev.array() - energy).abs().minCoeff());
        });
    std::vector<double> logs;
    for (const auto& [l, d] : joint) {
      logs.push_back(l);
      dist.push_back(d);
    }
    out.summary = summarize(logs, 0, seed);
    std::vector<double> sorted = dist;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double median = sorted[sorted.size() / 2];
    std::size_t neg = 0, neg_small = 0;
    for (std::size_t i = 0; i < logs.size(); ++i)
      if (logs[i] < 0) {
        ++neg;
        neg_small += dist[i] < median;
      }
    out.small_distance_share = neg ? static_cast<double>(neg_small) / neg : kNaN;
  } else {
    out.summary = summarize(sample_logs(spec, g, rect, energy, n_samples, seed, workers), 0, seed);
  }
  const auto& v = out.summary.values;
  const double n = static_cast<double>(v.size());
  TailTable& t = out.table;
  t.label = "negtail " + shape_name(rect);
  t.n = v.size();
  std::vector<double> naive;
  for (double k : ks) {
    const double thr = -10.0 * k * width;
    const double naive_thr = -k * columns * width;
    std::size_t hit = 0, naive_hit = 0;
    for (double x : v) {
      hit += x < thr;
      naive_hit += x < naive_thr;
    }
    t.rows.push_back(make_tail_row(k, thr, hit / n, std::exp(-k / 4.0), t.n));
    naive.push_back(naive_hit / n);
  }
  t.extra = {{"naive_fraction", naive}};
  std::size_t k2 = 0;
  for (double x : v) {
    out.naive_k2_count += x < -2.0 * columns * width;
    k2 += x < -20.0 * width;
  }
  out.fraction_k2 = k2 / n;
  out.bound_k2 = std::exp(-0.5) + binomial_three_sigma(std::exp(-0.5), v.size());
  return out;
}

// Bernstein

BernsteinConstants bernstein_constants(const std::vector<std::vector<double>>& draws,
                                       int max_m) {
  if (draws.empty() || draws.front().empty()) return {};
  const std::size_t cols = draws.front().size();
  const double reps = static_cast<double>(draws.size());
  std::vector<std::vector<double>> moments(cols, std::vector<double>(max_m + 1, 0.0));
  for (const auto& row : draws) {
    if (row.size() != cols) throw ConfigError("ragged Bernstein draws");
    for (std::size_t i = 0; i < cols; ++i) {
      double p = 1.0;
      for (int m = 1; m <= max_m; ++m) {
        p *= row[i];
        moments[i][m] += p / reps;
      }
    }
  }
  BernsteinConstants c;
  for (const auto& m : moments) c.sigma2 = std::max(c.sigma2, m[2]);
  c.t = std::sqrt(c.sigma2);
  if (c.sigma2 == 0.0) return c;
  double factorial = 2.0;
  for (int m = 3; m <= max_m; ++m) {
    factorial *= m;
    for (const auto& mi : moments) {
      const double need = 2.0 * std::abs(mi[m]) / (factorial * c.sigma2);
      c.t = std::max(c.t, std::pow(need, 1.0 / (m - 2)));
    }
  }
  return c;
}

bool BernsteinReport::holds() const {
  return std::all_of(rows.begin(), rows.end(), [](const BernsteinRow& r) { return r.within(); });
}

Table BernsteinReport::to_table() const {
  Table t({"x", "fraction", "bound", "three_sigma", "admissible"});
  for (const auto& r : rows)
    t.add_row({format_double(r.x), format_double(r.fraction), format_double(r.bound),
               format_double(r.three_sigma), r.admissible ? "1" : "0"});
  return t;
}

BernsteinReport bernstein_check(const std::vector<std::vector<double>>& draws,
                                const BernsteinConstants& constants,
                                const std::vector<double>& xs) {
  BernsteinReport rep;
  rep.constants = constants;
  rep.realizations = draws.size();
  rep.summands = draws.empty() ? 0 : draws.front().size();
  std::vector<double> sums;
  sums.reserve(draws.size());
  for (const auto& row : draws) {
    double s = 0.0;
    for (double x : row) s += x;
    sums.push_back(std::abs(s));
  }
  for (double x : xs) {
    BernsteinRow r;
    r.x = x;
    std::size_t hit = 0;
    for (double s : sums) hit += s >= x;
    r.fraction = sums.empty() ? 0.0 : static_cast<double>(hit) / sums.size();
    if (constants.t > 0) {
      r.bound = std::exp(-x / (4.0 * constants.t));
      r.admissible = x >= rep.summands * constants.sigma2 / constants.t;
    } else {
      r.bound = x > 0 ? 0.0 : 1.0;
      r.admissible = true;
    }
    r.three_sigma = binomial_three_sigma(r.bound, sums.size());
    rep.rows.push_back(r);
  }
  return rep;
}

std::vector<BernsteinReport> bernstein_partition_experiment(
    const DisorderSpec& spec, int bandwidth, const Region& rectangle, int cell,
    double energy, double delta0, const std::vector<double>& xs, int n_samples,
    std::uint64_t seed, int workers) {
  if (n_samples < 2) throw ConfigError("n_samples must be >= 2");
  const std::vector<Region> cells = grid_partition(rectangle, cell);
  const StripGeometry g = covering(rectangle, bandwidth);
  const auto logs = parallel_map<std::vector<double>>(
      static_cast<std::size_t>(n_samples), workers, [&](std::size_t i) {
        const DisorderSample s = sample_disorder(g, spec, derive_seed(seed, i));
        std::vector<double> row;
        for (const Region& c : cells) {
          SignedLogDet d = region_logdet(s, c, energy);
          row.push_back(d.is_zero() ? kNaN : d.log_abs);
        }
        return row;
      });
  // Families of equal cell shape, in first-appearance order.
  std::map<std::pair<int, int>, std::vector<std::size_t>> families;
  std::vector<std::pair<int, int>> order;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::pair<int, int> key{cells[c].last_column() - cells[c].first_column() + 1,
                            cells[c].highest_row() - cells[c].lowest_row() + 1};
    if (!families.count(key)) order.push_back(key);
    families[key].push_back(c);
  }
  std::vector<BernsteinReport> out;
  for (const auto& key : order) {
    const auto& idx = families[key];
    const double area = static_cast<double>(key.first) * key.second;
    std::vector<double> means(idx.size(), 0.0);
    std::size_t kept = 0;
    for (const auto& row : logs) {
      bool ok = true;
      for (auto c : idx) ok = ok && !std::isnan(row[c]);
      if (!ok) continue;
      ++kept;
      for (std::size_t j = 0; j < idx.size(); ++j) means[j] += row[idx[j]];
    }
    for (auto& m : means) m /= std::max<std::size_t>(kept, 1);
    const double scale = std::pow(area, -(0.5 + delta0));
    std::vector<std::vector<double>> draws;
    for (const auto& row : logs) {
      std::vector<double> x;
      bool ok = true;
      for (std::size_t j = 0; j < idx.size(); ++j) {
        if (std::isnan(row[idx[j]])) ok = false;
        x.push_back(scale * (row[idx[j]] - means[j]));
      }
      if (ok) draws.push_back(std::move(x));
    }
    BernsteinReport rep = bernstein_check(draws, bernstein_constants(draws), xs);
    rep.label = "cells " + std::to_string(key.first) + "x" + std::to_string(key.second);
    out.push_back(std::move(rep));
  }
  return out;
}

std::vector<Rational> delta_schedule(int n) {
  if (n < 0) throw ConfigError("delta_schedule needs n >= 0");
  std::vector<Rational> d{Rational(1, 2)};
  for (int i = 1; i <= n; ++i) d.push_back(d.back() / (Rational(1) + Rational(2) * d.back()));
  return d;
}

// Multiscale comparison and the lower-bound pipeline

Table MultiscaleResult::to_table() const {
  Table t({"N2", "N1", "mean_small", "mean_large", "gap", "gap_stderr", "scale", "C"});
  for (const auto& r : rows)
    t.add_row(std::vector<double>{static_cast<double>(r.n2), static_cast<double>(r.n1),
                                  r.mean_small, r.mean_large, r.gap, r.gap_stderr, r.scale,
                                  r.c});
  return t;
}

MultiscaleResult multiscale_compare(const DisorderSpec& spec, double energy, int width,
                                    int bandwidth, const std::vector<int>& n2_values,
                                    int n_samples, std::uint64_t seed, int workers) {
  MultiscaleResult out;
  out.width = width;
  for (std::size_t j = 0; j < n2_values.size(); ++j) {
    const int n2 = n2_values[j];
    if (n2 < 2) throw ConfigError("N2 must be > 1");
    const int n1 = n2 * n2;
    auto run = [&](int n, std::uint64_t stream) {
      const StripGeometry g{width, bandwidth, n};
      return summarize(sample_logs(spec, g, Region::rectangle(1, n, 1, width), energy,
                                   n_samples, derive_seed(seed, stream), workers),
                       0, seed);
    };
    const MonteCarloSummary small = run(n2, 2 * j), large = run(n1, 2 * j + 1);
    MultiscaleRow r;
    r.n2 = n2;
    r.n1 = n1;
    r.mean_small = small.mean / n2;
    r.mean_large = large.mean / n1;
    r.gap = std::abs(r.mean_large - r.mean_small);
    r.gap_stderr = std::hypot(small.stderr_mean() / n2, large.stderr_mean() / n1);
    r.scale = width * std::log(static_cast<double>(n1) * width) / n2;
    r.c = r.gap / r.scale;
    out.c_max = std::max(out.c_max, r.c);
    out.rows.push_back(r);
  }
  return out;
}

Decomposition decompose(const std::vector<double>& logs, int columns, int width,
                        double epsilon) {
  Decomposition d;
  const double nw = static_cast<double>(columns) * width;
  d.cap = 2.0 * std::pow(nw, 0.5 + epsilon);
  if (logs.empty()) return d;
  for (double x : logs) {
    if (x < 0) {
      d.x_minus += x;
    } else if (x <= d.cap) {
      d.x_mid += x;
      d.x_mid_sq += x * x;
    } else {
      d.x_plus += x;
    }
    d.total += x;
  }
  const double n = static_cast<double>(logs.size());
  d.x_minus /= n;
  d.x_mid /= n;
  d.x_plus /= n;
  d.x_mid_sq /= n;
  d.total /= n;
  d.chain_rhs = 0.5 * std::pow(nw, -0.5 - epsilon) * d.x_mid_sq + d.x_minus;
  d.partition_error = std::abs(d.x_minus + d.x_mid + d.x_plus - d.total);
  return d;
}

nlohmann::json PipelineReport::to_json() const {
  const Decomposition& d = decomposition;
  return {{"N", columns},
          {"W", width},
          {"epsilon", epsilon},
          {"mean_per_step", mean_per_step},
          {"mean_stderr", mean_stderr},
          {"gamma_sum", gamma_sum},
          {"gamma_stderr", gamma_stderr},
          {"gap", gap},
          {"scale", scale},
          {"C", c},
          {"insufficient_N", insufficient_n},
          {"decomposition",
           {{"E_X_minus", d.x_minus},
            {"E_X", d.x_mid},
            {"E_X_plus", d.x_plus},
            {"E_X_squared", d.x_mid_sq},
            {"cap", d.cap},
            {"E_log_f", d.total},
            {"chain_rhs", d.chain_rhs},
            {"partition_error", d.partition_error}}}};
}

namespace {

std::pair<double, double> gamma_sum(const DisorderSpec& spec, double energy, int width,
                                    int bandwidth, std::uint64_t seed,
                                    const PipelineOptions& options) {
  LyapunovOptions lo;
  lo.segments = 32;
  const LyapunovSpectrum sp = lyapunov_spectrum(spec, StripGeometry{width, bandwidth, 1},
                                                energy, options.lyapunov_steps, seed, lo);
  double se = 0.0;
  for (double s : sp.std_error) se += s;
  return {sp.sum(), se};
}

PipelineReport pipeline_at(const DisorderSpec& spec, double energy, int width, int bandwidth,
                           int columns, double epsilon, int n_samples, std::uint64_t seed,
                           int workers, const PipelineOptions& options,
                           std::pair<double, double> gamma) {
  const StripGeometry g{width, bandwidth, columns};
  g.validate();
  const MonteCarloSummary s =
      summarize(sample_logs(spec, g, Region::rectangle(1, columns, 1, width), energy,
                            n_samples, seed, workers),
                0, seed);
  PipelineReport r;
  r.columns = columns;
  r.width = width;
  r.epsilon = epsilon;
  r.mean_per_step = s.mean / columns;
  r.mean_stderr = s.stderr_mean() / columns;
  r.gamma_sum = gamma.first;
  r.gamma_stderr = gamma.second;
  r.gap = std::abs(r.gamma_sum - r.mean_per_step);
  r.scale = width * std::log(static_cast<double>(columns) * width) / columns;
  r.c = r.gap / r.scale;
  r.decomposition = decompose(s.values, columns, width, epsilon);
  r.insufficient_n =
      columns < options.regime_constant * std::pow(static_cast<double>(width), 1.0 + 5.0 * epsilon);
  return r;
}

}  // namespace

PipelineReport lyapunov_sum_pipeline(const DisorderSpec& spec, double energy, int width,
                                     int bandwidth, int columns, double epsilon,
                                     int n_samples, std::uint64_t seed, int workers,
                                     const PipelineOptions& options) {
  if (!(epsilon > 0)) throw ConfigError("epsilon must be positive");
  return pipeline_at(spec, energy, width, bandwidth, columns, epsilon, n_samples,
                     derive_seed(seed, 1), workers, options,
                     gamma_sum(spec, energy, width, bandwidth, derive_seed(seed, 0), options));
}

Table ConvergenceResult::to_table() const {
  Table t({"N", "W", "mean_per_step", "mean_stderr", "gamma_sum", "gamma_stderr", "gap",
           "scale", "C"});
  for (const auto& r : reports)
    t.add_row(std::vector<double>{static_cast<double>(r.columns), static_cast<double>(r.width),
                                  r.mean_per_step, r.mean_stderr, r.gamma_sum, r.gamma_stderr,
                                  r.gap, r.scale, r.c});
  return t;
}

ConvergenceResult convergence_experiment(const DisorderSpec& spec, double energy, int width,
                                         int bandwidth, const std::vector<int>& columns,
                                         int n_samples, std::uint64_t seed, int workers,
                                         const PipelineOptions& options) {
  if (columns.empty()) throw ConfigError("convergence experiment needs at least one N");
  const auto gamma = gamma_sum(spec, energy, width, bandwidth, derive_seed(seed, 0), options);
  ConvergenceResult out;
  out.c_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out.reports.push_back(pipeline_at(spec, energy, width, bandwidth, columns[i], 0.25,
                                      n_samples, derive_seed(seed, 1 + i), workers, options,
                                      gamma));
    out.c_min = std::min(out.c_min, out.reports.back().c);
    out.c_max = std::max(out.c_max, out.reports.back().c);
  }
  return out;
}

}  // namespace stripdet
