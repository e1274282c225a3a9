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

// Acceptance run: one PASS/FAIL line per criterion. Tolerances and budgets
// are fixed here; the exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "stripdet/determinants.hpp"
#include "stripdet/experiments.hpp"
#include "stripdet/exterior.hpp"
#include "stripdet/logpotential.hpp"
#include "stripdet/parallel.hpp"
#include "stripdet/perturbation.hpp"
#include "stripdet/rng.hpp"
#include "stripdet/statistics.hpp"
#include "stripdet/transfer.hpp"

namespace {

using namespace stripdet;
using json = nlohmann::json;

constexpr std::uint64_t kSeed = 20260415;
const int kWorkers = resolve_workers(0);

// Pinned tolerances.
constexpr double kRouteSeconds = 60.0;
constexpr double kIdentityRel = 1e-8;
constexpr double kIdentitySeconds = 60.0;
constexpr double kSylvesterPerColumn = 1e-6;
constexpr double kInterlacingTol = 1e-9;
constexpr double kPartitionTol = 1e-8;
constexpr double kLyapunovAbs = 1e-3;
constexpr double kLogVarianceAbs = 1e-4;
constexpr double kVarianceR2 = 0.9;
constexpr double kVarianceSeconds = 300.0;
constexpr double kConvergenceSpread = 3.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

DisorderSpec make_spec(Density::Variant law, CouplingLaw::Kind kind, int w, int d) {
  DisorderSpec s;
  s.density = Density(std::move(law));
  s.coupling.kind = kind;
  s.validate(w, d);
  return s;
}

DisorderSpec uniform(double lo, double hi, int w, int d = 1,
                     CouplingLaw::Kind kind = CouplingLaw::Kind::Adjacency) {
  return make_spec(UniformDensity{lo, hi}, kind, w, d);
}

DisorderSpec cauchy(int w, int d = 1) {
  return make_spec(TruncatedCauchyDensity{1.0, 1.0e3}, CouplingLaw::Kind::Adjacency, w, d);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome route_agreement() {
  const auto t0 = std::chrono::steady_clock::now();
  struct Row { bool ok; double ratio; };
  const auto rows = parallel_map<Row>(200, kWorkers, [](std::size_t i) {
    CounterRng rng(derive_seed(kSeed, 1, i));
    const int w = 1 + static_cast<int>(rng.index(6));
    const int n = 1 + static_cast<int>(rng.index(32));
    const auto spec = i % 2 ? cauchy(w) : uniform(-2, 2, w);
    const double e = static_cast<double>(rng.index(3)) - 1.0;
    const auto s = sample_disorder({w, 1, n}, spec, derive_seed(kSeed, 2, i));
    const auto c = compare_routes(s, e, n);
    // 1e-8 relative, widened near eigenvalues by the condition estimate.
    const double tol = route_tolerance(c.direct.log_abs, s.geometry().sites(), c.rcond);
    return Row{c.signs_equal && c.gap <= tol, c.gap / tol};
  });
  const double secs = seconds_since(t0);
  long bad = 0;
  double worst = 0;
  for (const auto& r : rows) {
    bad += !r.ok;
    worst = std::max(worst, r.ratio);
  }
  return {bad == 0 && secs < kRouteSeconds,
          fmt("200 configs, %ld disagree, worst gap/tol %.2e, %.1fs", bad, worst, secs)};
}

Outcome boundary_identity() {
  const auto t0 = std::chrono::steady_clock::now();
  struct Row { long pairs = 0, bad = 0; double worst = 0; };
  const auto rows = parallel_map<Row>(50, kWorkers, [](std::size_t i) {
    CounterRng rng(derive_seed(kSeed, 3, i));
    const int w = 1 + static_cast<int>(i % 3);
    const int n = 1 + static_cast<int>(rng.index(16));
    const auto spec = i % 2 ? cauchy(w) : uniform(-2, 2, w);
    const double e = static_cast<double>(rng.index(3)) - 1.0;
    const auto s = sample_disorder({w, 1, n}, spec, derive_seed(kSeed, 4, i));
    Row r;
    for (const auto& a : WedgeIndex::all(w))
      for (const auto& b : WedgeIndex::all(w)) {
        const auto ic = prop44_check(s, e, n, lemma_basis(a), lemma_basis(b));
        const double tol = kIdentityRel * std::max(1.0, std::abs(ic.rhs.log_abs));
        ++r.pairs;
        if (!ic.signs_equal || !(ic.gap <= tol)) ++r.bad;
        r.worst = std::max(r.worst, ic.gap / tol);
      }
    return r;
  });
  const double secs = seconds_since(t0);
  long pairs = 0, bad = 0;
  double worst = 0;
  for (const auto& r : rows) {
    pairs += r.pairs;
    bad += r.bad;
    worst = std::max(worst, r.worst);
  }
  return {bad == 0 && secs < kIdentitySeconds,
          fmt("%ld frame pairs over 50 samples, %ld fail, worst gap/tol %.2e, %.1fs", pairs, bad,
              worst, secs)};
}

Outcome sylvester_franke() {
  long bad = 0;
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    CounterRng rng(derive_seed(kSeed, 5, i));
    const int w = 1 + i % 4;
    const int n = 1 + static_cast<int>(rng.index(8));
    const auto s = sample_disorder({w, 1, n}, i % 2 ? cauchy(w) : uniform(-2, 2, w),
                                   derive_seed(kSeed, 6, i));
    const double v = sylvester_franke_check(s, static_cast<double>(rng.index(3)) - 1.0, n);
    const double tol = kSylvesterPerColumn * n;
    if (!(v <= tol)) ++bad;
    worst = std::max(worst, v / tol);
  }
  return {bad == 0, fmt("20 samples, W<=4, N<=8, worst |log|det||/(1e-6 N) %.2e", worst)};
}

Outcome frame_structure() {
  long checked = 0, bad = 0;
  for (int w = 1; w <= 3; ++w) {
    for (const auto& a : WedgeIndex::all(w)) {
      const auto u = lemma_basis(a);
      const bool a_ok = u.top() == Eigen::MatrixXd::Identity(w, w);
      const bool b_ok = u.bottom().operatorNorm() <= 1.0;
      Eigen::VectorXd sum = Eigen::VectorXd::Zero(wedge_coordinates(u).size());
      bool coeff_ok = true;
      for (const auto& [beta, c] : expand_standard(a)) {
        coeff_ok = coeff_ok && (c == 1 || c == -1);
        sum += c * wedge_coordinates(lemma_basis(beta));
      }
      const bool exact = sum == wedge_coordinates(standard_frame(a));
      ++checked;
      if (!(a_ok && b_ok && coeff_ok && exact)) ++bad;
    }
  }
  return {bad == 0, fmt("%ld indices at W<=3, %ld fail (A = I, ||B|| <= 1, exact expansion)",
                        checked, bad)};
}

Eigen::MatrixXd random_symmetric(int n, CounterRng& rng, bool strip_like) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = rng.uniform(-2, 2);
    for (int j = 0; j < i; ++j)
      if (!strip_like || i - j == 1) m(i, j) = m(j, i) = strip_like ? -1.0 : rng.uniform(-2, 2);
  }
  return m;
}

Outcome interlacing() {
  struct Row { int weyl_bad = 0, bound_bad = 0; double slack = INFINITY; };
  const auto rows = parallel_map<Row>(10000, kWorkers, [](std::size_t i) {
    CounterRng rng(derive_seed(kSeed, 7, i));
    const int n = 2 + static_cast<int>(rng.index(23));
    const int r = 1 + static_cast<int>(rng.index(std::min(4, n)));
    const Eigen::MatrixXd h1 = random_symmetric(n, rng, i % 2 == 1);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < r; ++k) {
      Eigen::VectorXd x(n);
      for (int j = 0; j < n; ++j) x(j) = rng.uniform(-1, 1);
      d += rng.uniform(-3, 3) * x * x.transpose();
    }
    const Eigen::MatrixXd h2 = h1 + d;
    const double e = rng.uniform(-3, 3);
    Row row;
    row.weyl_bad = !weyl_check(h1, h2, kInterlacingTol).holds + !weyl_check(h2, h1, kInterlacingTol).holds;
    for (const auto& rep : {logdet_gap_bound(h1, h2, e), logdet_gap_bound(h2, h1, e)}) {
      if (rep.vacuous) continue;
      if (rep.lhs > rep.rhs + kInterlacingTol) ++row.bound_bad;
      row.slack = std::min(row.slack, rep.slack());
    }
    return row;
  });
  long weyl = 0, bound = 0;
  double slack = INFINITY;
  for (const auto& r : rows) {
    weyl += r.weyl_bad;
    bound += r.bound_bad;
    slack = std::min(slack, r.slack);
  }
  return {weyl == 0 && bound == 0,
          fmt("10000 trials (both orders), dim<=24, rank<=4: %ld Weyl and %ld bound violations, "
              "min slack %.3g",
              weyl, bound, slack)};
}

Outcome partition_defect_criterion() {
  struct Row { bool holds, rank_ok; double ratio; };
  const auto rows = parallel_map<Row>(1000, kWorkers, [](std::size_t i) {
    CounterRng rng(derive_seed(kSeed, 8, i));
    const int w = 1 + static_cast<int>(rng.index(4));
    const int d = 1 + static_cast<int>(rng.index(static_cast<std::uint64_t>(w)));
    const int n = 2 + static_cast<int>(rng.index(15));
    const auto kind = i % 3 == 0 ? CouplingLaw::Kind::RandomBand : CouplingLaw::Kind::Adjacency;
    const auto spec = i % 2 ? make_spec(TruncatedCauchyDensity{1.0, 1.0e3}, kind, w, d)
                            : make_spec(UniformDensity{-2, 2}, kind, w, d);
    const auto s = sample_disorder({w, d, n}, spec, derive_seed(kSeed, 9, i));
    const Region r = Region::strip(s.geometry());
    // Cell side: integer part of |L|^{1/2 - c0 delta0}, delta0 = 1/2, c0 = 1/(1 + 2 delta0).
    const double delta0 = 0.5, c0 = 1.0 / (1.0 + 2.0 * delta0);
    const int l = std::max(
        1, static_cast<int>(std::pow(static_cast<double>(r.size()), 0.5 - c0 * delta0)));
    const auto pd = partition_defect(s, r, grid_partition(r, l), rng.uniform(-2, 2));
    return Row{pd.holds(kPartitionTol), pd.rank_ok(), pd.bound > 0 ? pd.defect / pd.bound : 0.0};
  });
  long bad = 0, rank_bad = 0;
  double worst = 0;
  for (const auto& r : rows) {
    bad += !r.holds;
    rank_bad += !r.rank_ok;
    worst = std::max(worst, r.ratio);
  }
  return {bad == 0 && rank_bad == 0,
          fmt("1000 configs: %ld defect and %ld rank violations, max defect/bound %.3f", bad,
              rank_bad, worst)};
}

Outcome closed_form_lyapunov() {
  const auto zero = make_spec(PointMassDensity{0.0}, CouplingLaw::Kind::Zero, 1, 1);
  const double golden = std::log((3.0 + std::sqrt(5.0)) / 2.0);
  const auto hyper = lyapunov_spectrum(zero, {1, 1, 1}, 3.0, 10000, kSeed);
  const auto ellip = lyapunov_spectrum(zero, {1, 1, 1}, 0.0, 10000, kSeed);
  const double e3 = std::abs(hyper.gamma[0] - golden);
  const double e0 = std::abs(ellip.gamma[0]);
  const long steps = 100000;
  const auto pair = lyapunov_spectrum(uniform(-1, 1, 2), {2, 1, 1}, 0.0, steps, kSeed);
  const double noise = *std::max_element(pair.std_error.begin(), pair.std_error.end());
  const double tol = 3.0 * noise + 10.0 / static_cast<double>(steps);
  double worst = 0;
  const auto m = pair.radii.size();
  for (std::size_t i = 0; i < m / 2; ++i)
    worst = std::max(worst, std::abs(pair.radii[i] + pair.radii[m - 1 - i]) / steps);
  return {e3 <= kLyapunovAbs && e0 <= kLyapunovAbs && worst <= tol,
          fmt("|gamma(E=3) - log((3+sqrt5)/2)| %.1e, |gamma(E=0)| %.1e, pairing %.1e <= %.1e", e3,
              e0, worst, tol)};
}

Outcome log_variance() {
  const EmpiricalMeasure delta0({0.0});
  const double v = interval_variance(delta0, IntervalSpec{0.0, 10.0, 16}).variance;
  std::vector<double> gaps;
  for (double ratio : {1e2, 1e3, 1e4})
    gaps.push_back(std::abs(interval_variance(delta0, IntervalSpec{1.0, ratio, 16}).variance - 1.0));
  const bool monotone = gaps[0] > gaps[1] && gaps[1] > gaps[2];
  return {std::abs(v - 1.0) <= kLogVarianceAbs && monotone,
          fmt("var_[0,M] log|x| = %.8f; |var - 1| at M1/M0 = 1e2, 1e3, 1e4: %.4f, %.4f, %.4f", v,
              gaps[0], gaps[1], gaps[2])};
}

Outcome variance_growth() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Region> shapes;
  for (int n : {8, 16, 32, 64}) shapes.push_back(Region::rectangle(1, n, 1, 2));
  const auto vg = variance_growth_experiment(cauchy(2), 1, shapes, 0.0, IntervalSpec{-1, 1, 16},
                                             10000, derive_seed(kSeed, 10), kWorkers);
  const double secs = seconds_since(t0);
  std::string vars;
  for (const auto& r : vg.rows) vars += fmt("%.1f ", r.variance);
  return {vg.fit.slope > 0 && vg.fit.r_squared >= kVarianceR2 && secs < kVarianceSeconds,
          fmt("Var at |L| = 16..128: %sslope %.4f, R^2 %.4f, min ratio %.3g, %.0fs", vars.c_str(),
              vg.fit.slope, vg.fit.r_squared, vg.min_ratio, secs)};
}

Outcome tail_suites() {
  const int n = 100000;
  const auto spec = uniform(-2, 2, 2);
  std::vector<double> ks;
  for (int i = 1; i <= 32; ++i) ks.push_back(0.5 * i);
  const StripGeometry g{2, 1, 16};
  const auto cartan = cartan_a_tail(spec, g, Region::rectangle(1, 16, 1, 2), 0.0, ks, n,
                                    derive_seed(kSeed, 11), kWorkers);
  const auto ldt = ldt_experiment(spec, 1, {Region::rectangle(1, 16, 1, 2), Region::rectangle(1, 32, 1, 2)},
                                  0.0, 0.25, ks, n, derive_seed(kSeed, 12), kWorkers);
  const auto neg = negtail_experiment(spec, 16, 2, 1, 0.0, ks, n, derive_seed(kSeed, 13), kWorkers);
  bool ok = true;
  std::string onsets;
  auto add = [&](const TailTable& t, const char* name) {
    const double on = t.onset();
    ok = ok && std::isfinite(on) && t.non_increasing();
    onsets += fmt("%s onset %g; ", name, on);
  };
  add(cartan, "cartan(exp(-K/4))");
  for (const auto& t : ldt.tables) add(t, ("ldt " + t.label + "(exp(-K/2))").c_str());
  add(neg.table, "negtail(exp(-K/4))");
  const bool improvement = neg.fraction_k2 <= neg.bound_k2 && neg.naive_k2_count == 0;
  return {ok && improvement,
          fmt("%sK=2: P(log|f| < -20W) = %.4g <= %.4g, %zu samples below -2NW", onsets.c_str(),
              neg.fraction_k2, neg.bound_k2, neg.naive_k2_count)};
}

Outcome convergence() {
  PipelineOptions o;
  o.lyapunov_steps = 4000000;
  const auto c = convergence_experiment(uniform(-2, 2, 2), 0.0, 2, 1, {16, 64, 256}, 10000,
                                        derive_seed(kSeed, 14), kWorkers, o);
  std::string cs;
  for (const auto& r : c.reports) cs += fmt("N=%d C=%.3f ", r.columns, r.c);
  const double spread = c.c_spread();
  return {c.c_min > 0 && spread <= kConvergenceSpread,
          fmt("%sspread %.2f (<= %.0f)", cs.c_str(), spread, kConvergenceSpread)};
}

Outcome delta_exact() {
  const auto d = delta_schedule(100);
  int bad = 0;
  for (int k = 0; k <= 100; ++k) bad += d[k] != Rational(1, 2 * k + 2);
  return {bad == 0 && d.size() == 101, fmt("n = 0..100, %d mismatches", bad)};
}

Outcome determinism() {
  const std::vector<json> configs = {
      {{"command", "sample"}, {"geometry", {{"W", 3}, {"N", 5}}}},
      {{"command", "lyapunov"}, {"geometry", {{"W", 2}}}, {"steps", 20000}},
      {{"command", "dets"}, {"geometry", {{"W", 2}, {"N", 12}}}, {"route", "all"}},
      {{"command", "experiment"}, {"kind", "variance"}, {"shapes", {{4, 2}, {8, 2}}}, {"n_samples", 400}},
      {{"command", "experiment"}, {"kind", "ldt"}, {"rectangles", {{8, 2}}}, {"n_samples", 400}},
      {{"command", "experiment"}, {"kind", "negtail"}, {"geometry", {{"W", 2}, {"N", 8}}}, {"n_samples", 400}},
      {{"command", "experiment"}, {"kind", "cartan"}, {"geometry", {{"W", 2}, {"N", 4}}}, {"n_samples", 400}},
      {{"command", "experiment"}, {"kind", "bernstein"}, {"rectangle", {8, 2}}, {"n_samples", 400}},
      {{"command", "experiment"}, {"kind", "convergence"}, {"geometry", {{"W", 2}}},
       {"columns", {8, 16}}, {"lyapunov_steps", 5000}, {"n_samples", 200}},
      {{"command", "experiment"}, {"kind", "pipeline"}, {"geometry", {{"W", 2}, {"N", 8}}},
       {"lyapunov_steps", 5000}, {"n_samples", 200}},
  };
  int files = 0, diffs = 0;
  for (json j : configs) {
    j["seed"] = 99;
    j["workers"] = 1;
    const auto a = execute(RunConfig::from_json(j));
    j["workers"] = 3;
    const auto b = execute(RunConfig::from_json(j));
    if (a.files.size() != b.files.size()) {
      ++diffs;
      continue;
    }
    for (std::size_t i = 0; i < a.files.size(); ++i) {
      ++files;
      if (a.files[i].name != b.files[i].name || a.files[i].content != b.files[i].content) ++diffs;
    }
  }
  return {diffs == 0 && files > 0,
          fmt("%zu configs, %d output files compared at workers 1 vs 3, %d differ",
              configs.size(), files, diffs)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "determinant route agreement", route_agreement},
      {2, "boundary-operator identity", boundary_identity},
      {3, "unit exterior-power determinant", sylvester_franke},
      {4, "unit-block frame structure", frame_structure},
      {5, "interlacing suite", interlacing},
      {6, "partition defect", partition_defect_criterion},
      {7, "closed-form Lyapunov exponents", closed_form_lyapunov},
      {8, "log-potential variance", log_variance},
      {9, "variance growth", variance_growth},
      {10, "tail suites", tail_suites},
      {11, "convergence rate", convergence},
      {12, "exact delta schedule", delta_exact},
      {13, "determinism across workers", determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2d %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
