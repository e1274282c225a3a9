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

#include "stripdet/logpotential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include "stripdet/determinants.hpp"
#include "stripdet/error.hpp"
#include "stripdet/parallel.hpp"
#include "stripdet/rng.hpp"
#include "stripdet/table.hpp"

namespace stripdet {

// EmpiricalMeasure

EmpiricalMeasure::EmpiricalMeasure(std::vector<double> atoms)
    : EmpiricalMeasure(atoms, std::vector<double>(
                                  atoms.size(), atoms.empty() ? 0.0 : 1.0 / atoms.size())) {}

EmpiricalMeasure::EmpiricalMeasure(std::vector<double> atoms, std::vector<double> weights) {
  if (atoms.size() != weights.size()) throw ConfigError("atoms and weights differ in length");
  std::vector<std::size_t> order(atoms.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return atoms[a] < atoms[b]; });
  double total = 0.0;
  for (auto i : order) {
    if (!std::isfinite(atoms[i])) throw ConfigError("measure atoms must be finite");
    if (!(weights[i] >= 0)) throw ConfigError("measure weights must be non-negative");
    atoms_.push_back(atoms[i]);
    weights_.push_back(weights[i]);
    total += weights[i];
  }
  if (total > 1.0 + 1e-12) throw ConfigError("measure total mass exceeds 1");
}

double EmpiricalMeasure::total_mass() const {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

double EmpiricalMeasure::mass_beyond(double r) const {
  double m = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    if (std::abs(atoms_[i]) > r) m += weights_[i];
  return m;
}

EmpiricalMeasure EmpiricalMeasure::restricted(double r) const {
  std::vector<double> a, w;
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    if (std::abs(atoms_[i]) <= r) {
      a.push_back(atoms_[i]);
      w.push_back(weights_[i]);
    }
  return EmpiricalMeasure(std::move(a), std::move(w));
}

EmpiricalMeasure EmpiricalMeasure::beyond(double r) const {
  std::vector<double> a, w;
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    if (std::abs(atoms_[i]) > r) {
      a.push_back(atoms_[i]);
      w.push_back(weights_[i]);
    }
  return EmpiricalMeasure(std::move(a), std::move(w));
}

double log_potential(const EmpiricalMeasure& mu, double x) {
  if (!std::isfinite(x)) throw ConfigError("log_potential: x must be finite");
  double u = 0.0;
  const auto& a = mu.atoms();
  const auto& w = mu.weights();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (w[i] == 0.0) continue;
    if (a[i] == x) return -std::numeric_limits<double>::infinity();
    u += w[i] * std::log(std::abs(x - a[i]));
  }
  return u;
}

// Quadrature

void IntervalSpec::validate() const {
  if (!(std::isfinite(m0) && std::isfinite(m1) && m0 < m1))
    throw ConfigError("interval needs finite m0 < m1");
  if (nodes < 2) throw ConfigError("interval quadrature needs >= 2 nodes");
}

namespace {

struct GaussRule {
  Eigen::VectorXd x;  // on [-1, 1]
  Eigen::VectorXd w;
};

/// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix.
const GaussRule& gauss_legendre(int order) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    j(k, k - 1) = j(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  GaussRule r{es.eigenvalues(), 2.0 * es.eigenvectors().row(0).array().square().transpose()};
  return cache.emplace(order, std::move(r)).first->second;
}

struct Panel {
  double a, b;
};

/// Panels covering [lo, hi], graded geometrically toward both ends.
void graded_panels(double lo, double hi, double floor, std::vector<Panel>& out) {
  constexpr double q = 0.15;
  // Keep the innermost nodes distinguishable from the breakpoints.
  floor = std::max(floor, 1e-9 * std::max(std::abs(lo), std::abs(hi)));
  const double h = 0.5 * (hi - lo);
  int levels = 0;
  for (double len = h; len > floor && levels < 40; len *= q) ++levels;
  // left half, toward lo
  double inner = h;
  std::vector<Panel> left;
  for (int l = 0; l < levels; ++l) {
    left.push_back({lo + inner * q, lo + inner});
    inner *= q;
  }
  out.push_back({lo, lo + inner});
  for (auto it = left.rbegin(); it != left.rend(); ++it) out.push_back(*it);
  // right half, toward hi
  inner = h;
  std::vector<Panel> right;
  for (int l = 0; l < levels; ++l) {
    right.push_back({hi - inner, hi - inner * q});
    inner *= q;
  }
  for (const Panel& p : right) out.push_back(p);
  out.push_back({hi - inner, hi});
}

IntervalMoments moments_at_order(const std::function<double(double)>& u,
                                 const std::vector<Panel>& panels, double length,
                                 int order) {
  const GaussRule& g = gauss_legendre(order);
  std::vector<double> values, weights;
  values.reserve(panels.size() * order);
  weights.reserve(panels.size() * order);
  for (const Panel& p : panels) {
    const double c = 0.5 * (p.a + p.b), h = 0.5 * (p.b - p.a);
    if (h <= 0) continue;
    for (int i = 0; i < order; ++i) {
      values.push_back(u(c + h * g.x(i)));
      weights.push_back(h * g.w(i) / length);
    }
  }
  IntervalMoments m;
  double mean = 0.0, wsum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw NumericError("integrand is not finite at a node");
    mean += weights[i] * values[i];
    wsum += weights[i];
  }
  mean /= wsum;
  double var = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    var += weights[i] * (values[i] - mean) * (values[i] - mean);
  var /= wsum;
  m.mean = mean;
  m.variance = var;
  m.l2_norm = std::sqrt(var + mean * mean);
  m.order = order;
  return m;
}

}  // namespace

IntervalMoments interval_variance(const std::function<double(double)>& u,
                                  const IntervalSpec& interval,
                                  const std::vector<double>& singular_points, double tol,
                                  int max_order) {
  interval.validate();
  constexpr std::size_t kMaxBreakpoints = 256;
  std::vector<double> inside;
  for (double s : singular_points)
    if (s > interval.m0 && s < interval.m1) inside.push_back(s);
  std::sort(inside.begin(), inside.end());
  inside.erase(std::unique(inside.begin(), inside.end()), inside.end());
  if (inside.size() > kMaxBreakpoints) {
    std::vector<double> thinned;
    for (std::size_t i = 0; i < kMaxBreakpoints; ++i)
      thinned.push_back(inside[i * inside.size() / kMaxBreakpoints]);
    inside = std::move(thinned);
  }
  std::vector<double> cuts{interval.m0};
  cuts.insert(cuts.end(), inside.begin(), inside.end());
  cuts.push_back(interval.m1);

  const double floor = 1e-14 * interval.length();
  std::vector<Panel> panels;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    graded_panels(cuts[i], cuts[i + 1], floor, panels);

  int order = interval.nodes;
  IntervalMoments prev = moments_at_order(u, panels, interval.length(), order);
  while (true) {
    order *= 2;
    IntervalMoments next = moments_at_order(u, panels, interval.length(), order);
    next.refinement_gap = std::abs(next.variance - prev.variance);
    next.converged = next.refinement_gap < tol * std::max(1.0, std::abs(next.variance));
    if (next.converged || order * 2 > max_order) return next;
    prev = next;
  }
}

IntervalMoments interval_variance(const EmpiricalMeasure& mu, const IntervalSpec& interval,
                                  double tol) {
  return interval_variance([&](double x) { return log_potential(mu, x); }, interval,
                           mu.atoms(), tol);
}

// xi_k and conditional potentials

XiSamples xi_samples(const DisorderSpec& spec, const StripGeometry& g, const Region& region,
                     const Site& k, double energy, int n_samples, std::uint64_t seed,
                     int workers) {
  if (!region.fits(g)) throw ConfigError("region does not fit the geometry");
  if (!region.contains(k)) throw ConfigError("site k is not in the region");
  if (n_samples < 1) throw ConfigError("n_samples must be >= 1");
  const auto draws = parallel_map<double>(
      static_cast<std::size_t>(n_samples), workers, [&](std::size_t i) {
        const DisorderSample s = sample_disorder(g, spec, derive_seed(seed, i));
        try {
          return xi_k(s, region, k, energy);
        } catch (const SingularityError&) {
          return std::numeric_limits<double>::quiet_NaN();
        }
      });
  XiSamples out;
  out.requested = n_samples;
  std::vector<double> kept;
  for (double d : draws) {
    if (std::isnan(d)) {
      ++out.singular;
    } else {
      kept.push_back(d);
    }
  }
  // Excluded draws keep their mass out of the measure: weights stay 1/n.
  std::vector<double> w(kept.size(), 1.0 / n_samples);
  out.measure = EmpiricalMeasure(std::move(kept), std::move(w));
  return out;
}

ConditionalPotential conditional_potential(const DisorderSpec& spec, const StripGeometry& g,
                                           const Region& region, const Site& k,
                                           double energy, int n_samples,
                                           std::uint64_t seed, int workers) {
  return ConditionalPotential(
      xi_samples(spec, g, region, k, energy, n_samples, seed, workers).measure);
}

TailFit power_tail_fit(const std::vector<double>& values,
                       const std::vector<double>& thresholds) {
  TailFit f;
  f.thresholds = thresholds;
  std::vector<double> lx, ly;
  for (double t : thresholds) {
    if (!(t > 0)) throw ConfigError("tail thresholds must be positive");
    std::size_t c = 0;
    for (double v : values)
      if (std::abs(v) > t) ++c;
    const double frac = values.empty() ? 0.0 : static_cast<double>(c) / values.size();
    f.fractions.push_back(frac);
    if (frac > 0) {
      lx.push_back(std::log(t));
      ly.push_back(std::log(frac));
    }
  }
  f.points_used = static_cast<int>(lx.size());
  if (lx.size() >= 2) {
    LinearFit lf = linear_fit(lx, ly);
    f.exponent = -lf.slope;
    f.r_squared = lf.r_squared;
  }
  return f;
}

ResolventTail resolvent_tail(const DisorderSpec& spec, const StripGeometry& g,
                             const Region& region, const Site& i, const Site& j,
                             double energy, const std::vector<double>& thresholds,
                             int n_samples, std::uint64_t seed, int workers) {
  if (!region.fits(g)) throw ConfigError("region does not fit the geometry");
  if (!region.contains(i) || !region.contains(j)) throw ConfigError("sites must lie in region");
  const auto entries = parallel_map<double>(
      static_cast<std::size_t>(n_samples), workers, [&](std::size_t s) {
        const DisorderSample smp = sample_disorder(g, spec, derive_seed(seed, s));
        HamiltonianMatrix h = assemble_hamiltonian(smp, region);
        h.matrix.diagonal().array() -= energy;
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(h.matrix);
        if (!(lu.rcond() > 1e-14)) return std::numeric_limits<double>::quiet_NaN();
        Eigen::VectorXd e = Eigen::VectorXd::Zero(h.matrix.rows());
        e(h.row_of(j)) = 1.0;
        return lu.solve(e)(h.row_of(i));
      });
  ResolventTail out;
  std::vector<double> kept;
  for (double v : entries) {
    if (std::isnan(v)) {
      ++out.singular;
    } else {
      kept.push_back(v);
    }
  }
  out.fit = power_tail_fit(kept, thresholds);
  const double d0 = spec.d0 > 0 ? spec.d0 : spec.density.sup();
  for (std::size_t t = 0; t < thresholds.size(); ++t)
    out.worst_scaled = std::max(out.worst_scaled, thresholds[t] * out.fit.fractions[t] / d0);
  return out;
}

BesselCheck bessel_check(const DisorderSpec& spec, const StripGeometry& g,
                         const Region& region, double energy, int outer, int inner,
                         std::uint64_t seed, int workers) {
  if (!region.fits(g)) throw ConfigError("region does not fit the geometry");
  if (outer < 2 || inner < 2) throw ConfigError("bessel_check needs outer, inner >= 2");
  BesselCheck out;
  const std::size_t total_n = static_cast<std::size_t>(outer) * inner;
  const auto plain = parallel_map<double>(total_n, workers, [&](std::size_t i) {
    return region_logdet(sample_disorder(g, spec, derive_seed(seed, 0, i)), region, energy)
        .log_abs;
  });
  out.total_variance = sample_variance(plain);
  const double m4 = central_moment(plain, 4);
  out.total_stderr =
      std::sqrt(std::max(0.0, m4 - out.total_variance * out.total_variance) / total_n);

  const auto& sites = region.sites();
  for (std::size_t k = 0; k < sites.size(); ++k) {
    const auto stats = parallel_map<std::pair<double, double>>(
        static_cast<std::size_t>(outer), workers, [&](std::size_t o) {
          CounterRng rng(derive_seed(seed, 1 + k, o));
          const double x = spec.density.quantile(rng.uniform());
          std::vector<double> y(static_cast<std::size_t>(inner));
          for (int j = 0; j < inner; ++j) {
            const DisorderSample s =
                sample_disorder(g, spec, derive_seed(seed, 0x100000 + k * outer + o, j))
                    .with_potential(sites[k], x);
            y[j] = region_logdet(s, region, energy).log_abs;
          }
          return std::make_pair(sample_mean(y), sample_variance(y));
        });
    std::vector<double> means, within;
    for (const auto& [m, v] : stats) {
      means.push_back(m);
      within.push_back(v);
    }
    // Var of the inner mean overshoots Var(h_k) by E(within) / inner.
    const double est = sample_variance(means) - sample_mean(within) / inner;
    out.conditional_variances.push_back(est);
    out.conditional_sum += est;
  }
  out.holds = out.total_variance + 3.0 * out.total_stderr >= out.conditional_sum;
  return out;
}

// Variance growth

nlohmann::json VarianceGrowth::to_json() const {
  nlohmann::json rows_j = nlohmann::json::array();
  for (const auto& r : rows)
    rows_j.push_back({{"shape", r.shape},
                      {"sites", r.sites},
                      {"var", r.variance},
                      {"ci_lo", r.ci.lo},
                      {"ci_hi", r.ci.hi},
                      {"ratio", r.ratio},
                      {"excluded", r.excluded},
                      {"insufficient", r.insufficient}});
  return {{"rows", rows_j},
          {"fit", {{"slope", fit.slope}, {"intercept", fit.intercept},
                   {"r_squared", fit.r_squared}}},
          {"min_ratio", min_ratio}};
}

std::string VarianceGrowth::to_csv() const {
  Table t({"shape", "sites", "var", "ci_lo", "ci_hi", "ratio"});
  for (const auto& r : rows)
    t.add_row({r.shape, std::to_string(r.sites), format_double(r.variance),
               format_double(r.ci.lo), format_double(r.ci.hi), format_double(r.ratio)});
  return t.to_csv();
}

VarianceGrowth variance_growth_experiment(const DisorderSpec& spec, int bandwidth,
                                          const std::vector<Region>& shapes, double energy,
                                          const IntervalSpec& interval, int n_samples,
                                          std::uint64_t seed, int workers) {
  interval.validate();
  if (shapes.empty()) throw ConfigError("variance experiment needs at least one shape");
  if (n_samples < 2) throw ConfigError("n_samples must be >= 2");
  const double inf_rho = spec.density.infimum(interval.m0, interval.m1);
  // A point mass has no density; its rows carry no ratio.
  const bool degenerate = spec.density.degenerate();
  if (!degenerate && !(inf_rho > 0))
    throw ConfigError("density vanishes somewhere on the interval");
  const double scale = interval.length() * inf_rho;

  VarianceGrowth out;
  out.min_ratio = std::numeric_limits<double>::infinity();
  std::vector<double> xs, ys;
  for (std::size_t s = 0; s < shapes.size(); ++s) {
    const Region& shape = shapes[s];
    const int w = shape.highest_row();
    const StripGeometry g{w, std::min(bandwidth, w), shape.last_column()};
    const auto logs = parallel_map<double>(
        static_cast<std::size_t>(n_samples), workers, [&](std::size_t i) {
          SignedLogDet d = region_logdet(sample_disorder(g, spec, derive_seed(seed, s, i)),
                                         shape, energy);
          return d.is_zero() ? std::numeric_limits<double>::quiet_NaN() : d.log_abs;
        });
    VarianceRow row;
    std::vector<double> kept;
    for (double v : logs) {
      if (std::isnan(v)) {
        ++row.excluded;
      } else {
        kept.push_back(v);
      }
    }
    std::ostringstream name;
    name << (shape.last_column() - shape.first_column() + 1) << "x"
         << (shape.highest_row() - shape.lowest_row() + 1);
    row.shape = name.str();
    row.sites = static_cast<long>(shape.size());
    row.variance = sample_variance(kept);
    row.ci = bootstrap_variance_ci(kept, 1000, 0.95, derive_seed(seed, s, 0xC1C1C1C1ULL));
    row.ratio = degenerate ? std::numeric_limits<double>::quiet_NaN()
                           : row.variance / (static_cast<double>(row.sites) * scale);
    row.insufficient = (row.ci.hi - row.ci.lo) > row.variance;
    if (!degenerate) out.min_ratio = std::min(out.min_ratio, row.ratio);
    xs.push_back(static_cast<double>(row.sites));
    ys.push_back(row.variance);
    out.rows.push_back(std::move(row));
  }
  if (degenerate) out.min_ratio = std::numeric_limits<double>::quiet_NaN();
  if (xs.size() >= 2) out.fit = linear_fit(xs, ys);
  return out;
}

}  // namespace stripdet
