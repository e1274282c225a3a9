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

#include "stripdet/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stripdet/determinants.hpp"
#include "stripdet/error.hpp"
#include "stripdet/exterior.hpp"
#include "stripdet/model.hpp"
#include "stripdet/parallel.hpp"
#include "stripdet/perturbation.hpp"
#include "stripdet/rng.hpp"
#include "stripdet/transfer.hpp"

namespace stripdet {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Stream tags for derive_seed, one per check.
enum Stream : std::uint64_t {
  kRoutes = 1,
  kBoundaryIdentity,
  kSylvester,
  kMinor,
  kFrameGap,
  kNormMinors,
  kWeyl,
  kPartition,
  kSymplectic,
  kRecurrence,
  kPairing,
};

DisorderSpec random_spec(CounterRng& rng, int width, int bandwidth) {
  DisorderSpec spec;
  if (rng.index(2) == 0) {
    spec.density = Density(UniformDensity{-2.0, 2.0});
  } else {
    spec.density = Density(TruncatedCauchyDensity{1.0, 1.0e3});
  }
  if (rng.index(2) == 0) {
    spec.coupling.kind = CouplingLaw::Kind::Adjacency;
  } else {
    spec.coupling.kind = CouplingLaw::Kind::RandomBand;
    spec.coupling.amplitude = 0.5;
  }
  spec.validate(width, bandwidth);
  return spec;
}

double random_energy(CounterRng& rng) {
  static constexpr double kEnergies[] = {-1.0, 0.0, 1.0};
  return kEnergies[rng.index(3)];
}

int uniform_int(CounterRng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.index(static_cast<std::uint64_t>(hi - lo + 1)));
}

struct Outcome {
  long trials = 0;
  long failures = 0;
  double worst = 0.0;
};

CheckResult fold(std::string name, const std::vector<Outcome>& parts, double tolerance,
                 std::string note) {
  CheckResult c{std::move(name), 0, 0, 0.0, tolerance, std::move(note)};
  for (const auto& p : parts) {
    c.trials += p.trials;
    c.failures += p.failures;
    c.worst = std::max(c.worst, p.worst);
  }
  return c;
}

// Wedge checks

CheckResult frame_structure() {
  CheckResult c{"frame_structure", 0, 0, 0.0, 0.0,
                "worst = max |A - I| + max(0, ||B|| - 1); B entries must be 0/1 with "
                "at most one 1 per row and column"};
  for (int w = 1; w <= 3; ++w) {
    for (const auto& alpha : WedgeIndex::all(w)) {
      const WedgeFrame f = lemma_basis(alpha);
      const Eigen::MatrixXd a = f.top(), b = f.bottom();
      double bad = (a - Eigen::MatrixXd::Identity(w, w)).cwiseAbs().maxCoeff();
      bool zero_one = (b.array() == 0.0 || b.array() == 1.0).all();
      bool partial_permutation = (b.colwise().sum().array() <= 1.0).all() &&
                                 (b.rowwise().sum().array() <= 1.0).all();
      const double norm = b.isZero() ? 0.0 : Eigen::JacobiSVD<Eigen::MatrixXd>(b).singularValues()(0);
      bad += std::max(0.0, norm - 1.0);
      ++c.trials;
      if (bad != 0.0 || !zero_one || !partial_permutation) ++c.failures;
      c.worst = std::max(c.worst, bad);
    }
  }
  return c;
}

CheckResult expansion_exact() {
  CheckResult c{"expand_standard", 0, 0, 0.0, 1e-12,
                "worst = max entrywise |sum_beta c_beta u_beta - e_alpha| in wedge coordinates"};
  for (int w = 1; w <= 3; ++w) {
    const auto basis = WedgeIndex::all(w);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      Eigen::VectorXd target = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()));
      target(static_cast<Eigen::Index>(i)) = 1.0;
      Eigen::VectorXd sum = Eigen::VectorXd::Zero(target.size());
      bool unit = true;
      for (const auto& [beta, coeff] : expand_standard(basis[i])) {
        if (coeff != 1 && coeff != -1) unit = false;
        sum += coeff * wedge_coordinates(lemma_basis(beta));
      }
      const double err = (sum - target).cwiseAbs().maxCoeff();
      ++c.trials;
      if (!unit || err > c.tolerance) ++c.failures;
      c.worst = std::max(c.worst, err);
    }
  }
  return c;
}

CheckResult boundary_identity_suite(const VerifyOptions& o) {
  auto parts = parallel_map<Outcome>(
      static_cast<std::size_t>(o.identity_samples), o.workers, [&](std::size_t i) {
        CounterRng rng(derive_seed(o.seed, kBoundaryIdentity, i));
        const int w = uniform_int(rng, 1, 3);
        const int n = uniform_int(rng, 1, 16);
        const int d = uniform_int(rng, 1, w);
        const double e = random_energy(rng);
        const DisorderSample s =
            sample_disorder({w, d, n}, random_spec(rng, w, d), rng());
        Outcome out;
        const auto basis = WedgeIndex::all(w);
        for (const auto& a : basis) {
          for (const auto& b : basis) {
            IdentityCheck ic = prop44_check(s, e, n, lemma_basis(a), lemma_basis(b));
            const double tol = route_tolerance(ic.lhs.log_abs, static_cast<long>(n) * w, ic.rcond);
            ++out.trials;
            if (!ic.signs_equal || !(ic.gap <= tol)) ++out.failures;
            out.worst = std::max(out.worst, ic.gap / std::max(1.0, std::abs(ic.lhs.log_abs)));
          }
        }
        return out;
      });
  return fold("boundary_identity", parts, 1e-8,
              "worst = relative log_abs gap; per-pair tolerance widened by 1/rcond of "
              "H_N(u,v) - E");
}

CheckResult sylvester_franke_suite(const VerifyOptions& o) {
  auto parts = parallel_map<Outcome>(
      static_cast<std::size_t>(o.sf_samples), o.workers, [&](std::size_t i) {
        CounterRng rng(derive_seed(o.seed, kSylvester, i));
        const int w = 1 + static_cast<int>(i % 4);
        const int n = uniform_int(rng, 1, 8);
        const int d = uniform_int(rng, 1, w);
        const DisorderSample s =
            sample_disorder({w, d, n}, random_spec(rng, w, d), rng());
        const double v = sylvester_franke_check(s, random_energy(rng), n);
        Outcome out{1, 0, v / n};
        if (!(v <= 1e-6 * n)) out.failures = 1;
        return out;
      });
  return fold("sylvester_franke", parts, 1e-6, "worst = |log|det wedge^W T_N|| / N");
}

CheckResult dirichlet_minor_suite(const VerifyOptions& o) {
  auto parts = parallel_map<Outcome>(
      static_cast<std::size_t>(o.identity_samples), o.workers, [&](std::size_t i) {
        CounterRng rng(derive_seed(o.seed, kMinor, i));
        const int w = uniform_int(rng, 1, 4);
        const int n = uniform_int(rng, 1, 32);
        const int d = uniform_int(rng, 1, w);
        const double e = random_energy(rng);
        const DisorderSample s =
            sample_disorder({w, d, n}, random_spec(rng, w, d), rng());
        const auto dir = WedgeIndex::dirichlet(w);
        const SignedLogDet m = minor(dir, dir, s, e, n);
        double rc = 0.0;
        const SignedLogDet f =
            logdet_direct(assemble_hamiltonian(s, Region::rectangle(1, n, 1, w)), e, &rc);
        const double gap = std::abs(m.log_abs - f.log_abs);
        Outcome out{1, 0, gap / std::max(1.0, std::abs(f.log_abs))};
        if (m.sign != f.sign || !(gap <= route_tolerance(f.log_abs, static_cast<long>(n) * w, rc)))
          out.failures = 1;
        return out;
      });
  return fold("dirichlet_minor", parts, 1e-8,
              "minor({1..W},{1..W}, T_N) against det(H_N - E); worst = relative gap");
}

/// One-sided bound applied to (H(u,v) - E)^t (H(u,v) - E) against (H_N - E)^2,
/// whose difference has rank <= 4W; halving gives the per-pair log gap.
CheckResult frame_gap_suite(const VerifyOptions& o, double* worst_gap_over_w) {
  struct Part {
    Outcome o;
    double gap_over_w = 0.0;
  };
  auto parts = parallel_map<Part>(
      static_cast<std::size_t>(o.frame_gap_samples), o.workers, [&](std::size_t i) {
        CounterRng rng(derive_seed(o.seed, kFrameGap, i));
        const int w = uniform_int(rng, 1, 2);
        const int n = uniform_int(rng, 2, 6);
        const int d = uniform_int(rng, 1, w);
        const double e = random_energy(rng);
        const DisorderSample s =
            sample_disorder({w, d, n}, random_spec(rng, w, d), rng());
        Part p;
        const FrameGap fg = lemma45_gap(s, e, n);
        p.gap_over_w = fg.max_gap / w;

        Eigen::MatrixXd m2 = assemble_hamiltonian(s, Region::rectangle(1, n, 1, w)).matrix;
        m2.diagonal().array() -= e;
        const Eigen::MatrixXd h2 = m2.transpose() * m2;
        const auto basis = WedgeIndex::all(w);
        std::size_t pair = 0;
        for (const auto& a : basis) {
          for (const auto& b : basis) {
            Eigen::MatrixXd m1 = boundary_operator(s, lemma_basis(a), lemma_basis(b), n).matrix;
            m1.diagonal().array() -= e;
            InterlacingReport r = logdet_gap_bound(m1.transpose() * m1, h2, 0.0);
            ++p.o.trials;
            const double pair_gap = fg.pair_logs[pair++] - fg.dirichlet_log;
            if (r.vacuous) continue;
            const double slack = r.rhs / 2 - pair_gap;
            if (r.rank > 4 * w || !(slack >= -1e-8 * std::max(1.0, std::abs(pair_gap))))
              ++p.o.failures;
            p.o.worst = std::max(p.o.worst, -slack);
          }
        }
        return p;
      });
  std::vector<Outcome> outs;
  double g = -kInf;
  for (const auto& p : parts) {
    outs.push_back(p.o);
    g = std::max(g, p.gap_over_w);
  }
  if (worst_gap_over_w) *worst_gap_over_w = g;
  return fold("frame_gap_core", outs, 1e-8,
              "per-pair gap <= 8W max(log+ ||H~1||, log- dist) with rank <= 4W; worst = "
              "largest excess over the bound, 0 when none");
}

CheckResult norm_minors_suite(const VerifyOptions& o, double* c_max) {
  auto cs = parallel_map<double>(
      static_cast<std::size_t>(o.sf_samples), o.workers, [&](std::size_t i) {
        CounterRng rng(derive_seed(o.seed, kNormMinors, i));
        const int w = uniform_int(rng, 1, 3);
        const int n = uniform_int(rng, 1, 8);
        const int d = uniform_int(rng, 1, w);
        const DisorderSample s =
            sample_disorder({w, d, n}, random_spec(rng, w, d), rng());
        return norm_minors_constant(transfer_product(s, random_energy(rng), n));
      });
  CheckResult c{"norm_minors_constant", static_cast<long>(cs.size()), 0, -kInf, 0.0,
                "empirical C in ||wedge^W T|| <= exp(C W) sum |det([u_b]^t T [u_a])|; "
                "reported, fails only when non-finite"};
  for (double v : cs) {
    if (!std::isfinite(v)) ++c.failures;
    c.worst = std::max(c.worst, v);
  }
  if (c_max) *c_max = c.worst;
  return c;
}

// Interlacing checks

Eigen::MatrixXd random_symmetric(CounterRng& rng, int n, double scale) {
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = scale * rng.uniform(-1.0, 1.0);
  return a;
}

struct WeylPart {
  Outcome weyl;
  Outcome bound;
  double worst_slack = kInf;
  int vacuous = 0;
};

WeylPart weyl_trial(const VerifyOptions& o, std::size_t i) {
  CounterRng rng(derive_seed(o.seed, kWeyl, i));
  WeylPart p;
  const int n = uniform_int(rng, 2, 24);
  const int r = uniform_int(rng, 1, std::min(4, n - 1));
  Eigen::MatrixXd h2;
  if (rng.index(2) == 0) {
    h2 = random_symmetric(rng, n, 1.0 + 4.0 * rng.uniform());
  } else {
    // Strip Hamiltonian with the perturbation acting on r sites.
    const int w = uniform_int(rng, 1, 3);
    const int cols = std::max(1, n / w);
    const int d = uniform_int(rng, 1, w);
    const DisorderSample s = sample_disorder({w, d, cols}, random_spec(rng, w, d), rng());
    h2 = assemble_hamiltonian(s, Region::rectangle(1, cols, 1, w)).matrix;
  }
  const int dim = static_cast<int>(h2.rows());
  Eigen::MatrixXd pert = Eigen::MatrixXd::Zero(dim, dim);
  const int rank = std::min(r, dim);
  for (int k = 0; k < rank; ++k) {
    Eigen::VectorXd x(dim);
    if (rng.index(2) == 0) {
      x.setZero();
      x(static_cast<Eigen::Index>(rng.index(static_cast<std::uint64_t>(dim)))) = 1.0;
    } else {
      for (int j = 0; j < dim; ++j) x(j) = rng.uniform(-1.0, 1.0);
    }
    const double amp = std::pow(10.0, rng.uniform(-2.0, 2.0)) * (rng.index(2) ? 1.0 : -1.0);
    pert += amp * x * x.transpose();
  }
  const Eigen::MatrixXd h1 = h2 + pert;
  const double e = rng.uniform(-3.0, 3.0);

  for (int dir = 0; dir < 2; ++dir) {
    const Eigen::MatrixXd& a = dir == 0 ? h1 : h2;
    const Eigen::MatrixXd& b = dir == 0 ? h2 : h1;
    WeylReport wr = weyl_check(a, b, 1e-9);
    ++p.weyl.trials;
    if (!wr.holds) ++p.weyl.failures;
    p.weyl.worst = std::max(p.weyl.worst, wr.worst_violation);

    InterlacingReport ir = logdet_gap_bound(a, b, e);
    ++p.bound.trials;
    if (ir.vacuous) {
      ++p.vacuous;
      continue;
    }
    const double slack = ir.slack();
    if (!(slack >= -1e-9 * std::max(1.0, std::abs(ir.lhs)))) ++p.bound.failures;
    p.bound.worst = std::max(p.bound.worst, -slack);
    p.worst_slack = std::min(p.worst_slack, slack);
  }
  return p;
}

struct PartitionPart {
  Outcome defect;
  Outcome rank;
};

PartitionPart partition_trial(const VerifyOptions& o, std::size_t i) {
  CounterRng rng(derive_seed(o.seed, kPartition, i));
  const int w = uniform_int(rng, 1, 4);
  const int n = uniform_int(rng, 2, 12);
  const int d = uniform_int(rng, 1, w);
  const int cell = uniform_int(rng, 1, 4);
  const double e = random_energy(rng);
  const DisorderSample s = sample_disorder({w, d, n}, random_spec(rng, w, d), rng());
  const Region rect = Region::rectangle(1, n, 1, w);
  const PartitionDefect pd = partition_defect(s, rect, grid_partition(rect, cell), e);
  PartitionPart p;
  p.defect = {1, pd.holds(1e-8) ? 0 : 1, pd.defect - pd.bound};
  p.rank = {1, pd.rank_ok() ? 0 : 1,
            static_cast<double>(pd.perturbation_rank) - static_cast<double>(pd.boundary_size)};
  return p;
}

// Determinant checks

CheckResult route_suite(const VerifyOptions& o) {
  auto parts = parallel_map<Outcome>(
      static_cast<std::size_t>(o.route_configs), o.workers, [&](std::size_t i) {
        CounterRng rng(derive_seed(o.seed, kRoutes, i));
        const int w = uniform_int(rng, 1, 6);
        const int n = uniform_int(rng, 1, 32);
        const int d = uniform_int(rng, 1, w);
        const DisorderSample s = sample_disorder({w, d, n}, random_spec(rng, w, d), rng());
        const RouteComparison c = compare_routes(s, random_energy(rng), n);
        return Outcome{1, c.agree ? 0 : 1, c.gap / c.tolerance};
      });
  return fold("route_agreement", parts, 1.0,
              "direct, transfer and Schur routes; worst = gap / tolerance");
}

CheckResult symplectic_suite(const VerifyOptions& o) {
  auto parts = parallel_map<Outcome>(
      static_cast<std::size_t>(o.sf_samples * 2), o.workers, [&](std::size_t i) {
        CounterRng rng(derive_seed(o.seed, kSymplectic, i));
        const int w = uniform_int(rng, 1, 4);
        const int n = uniform_int(rng, 1, 8);
        const int d = uniform_int(rng, 1, w);
        const DisorderSample s = sample_disorder({w, d, n}, random_spec(rng, w, d), rng());
        const Eigen::MatrixXd t = transfer_product(s, random_energy(rng), n);
        const double rel = symplectic_defect(t) / std::max(1.0, t.squaredNorm());
        return Outcome{1, rel <= 1e-12 ? 0 : 1, rel};
      });
  return fold("symplectic", parts, 1e-12, "worst = ||T^t J T - J|| / max(1, ||T||_F^2)");
}

CheckResult recurrence_suite(const VerifyOptions& o) {
  auto parts = parallel_map<Outcome>(
      static_cast<std::size_t>(o.sf_samples * 2), o.workers, [&](std::size_t i) {
        CounterRng rng(derive_seed(o.seed, kRecurrence, i));
        const int w = uniform_int(rng, 1, 4);
        const int n = uniform_int(rng, 1, 12);
        const int d = uniform_int(rng, 1, w);
        const DisorderSample s = sample_disorder({w, d, n}, random_spec(rng, w, d), rng());
        Eigen::VectorXd init(2 * w);
        for (int k = 0; k < 2 * w; ++k) init(k) = rng.uniform(-1.0, 1.0);
        const RecurrenceReport r = recurrence_check(s, random_energy(rng), n, init);
        const double rel = r.gap / std::max(1.0, r.solution_norm);
        return Outcome{1, rel <= 1e-10 ? 0 : 1, rel};
      });
  return fold("recurrence", parts, 1e-10,
              "iterated solution against T_N [Psi_1; Psi_0]; worst = gap / max(1, ||Psi||)");
}

CheckResult closed_form_lyapunov(const VerifyOptions& o) {
  DisorderSpec free_spec;
  free_spec.density = Density(PointMassDensity{0.0});
  free_spec.coupling.kind = CouplingLaw::Kind::Zero;
  free_spec.validate(1, 1);
  const StripGeometry g{1, 1, 1};
  CheckResult c{"lyapunov_closed_form", 0, 0, 0.0, 1e-3,
                "W=1, V=0: E=3 against log((3+sqrt 5)/2), E=0 against 0; N=10^4"};
  const std::pair<double, double> cases[] = {{3.0, std::log((3.0 + std::sqrt(5.0)) / 2.0)},
                                             {0.0, 0.0}};
  for (const auto& [e, expected] : cases) {
    const LyapunovSpectrum sp = lyapunov_spectrum(free_spec, g, e, 10000, o.seed);
    const double err = std::abs(sp.gamma.at(0) - expected);
    ++c.trials;
    if (!(err <= c.tolerance)) ++c.failures;
    c.worst = std::max(c.worst, err);
  }
  return c;
}

CheckResult spectrum_pairing(const VerifyOptions& o) {
  DisorderSpec spec;
  spec.density = Density(UniformDensity{-2.0, 2.0});
  spec.validate(2, 1);
  const long steps = 100000;
  const LyapunovSpectrum sp =
      lyapunov_spectrum(spec, {2, 1, 1}, 0.0, steps, derive_seed(o.seed, kPairing));
  const double noise = *std::max_element(sp.std_error.begin(), sp.std_error.end());
  const double tol = 3.0 * noise + 10.0 / static_cast<double>(steps);
  CheckResult c{"spectrum_pairing", 0, 0, 0.0, tol,
                "W=2: |r_i + r_{2W+1-i}| / N against 3 stderr + 10 / N"};
  const auto m = sp.radii.size();
  for (std::size_t i = 0; i < m / 2; ++i) {
    const double pair = std::abs(sp.radii[i] + sp.radii[m - 1 - i]) / static_cast<double>(steps);
    ++c.trials;
    if (!(pair <= tol)) ++c.failures;
    c.worst = std::max(c.worst, pair);
  }
  return c;
}

}  // namespace

nlohmann::json CheckResult::to_json() const {
  return {{"name", name},       {"trials", trials},       {"failures", failures},
          {"worst", worst},     {"tolerance", tolerance}, {"passed", passed()},
          {"note", note}};
}

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed(); });
}

nlohmann::json SuiteReport::to_json() const {
  nlohmann::json j = {{"suite", suite}, {"passed", passed()}};
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : checks) cs.push_back(c.to_json());
  j["checks"] = cs;
  for (const auto& [k, v] : extra.items()) j[k] = v;
  return j;
}

SuiteReport verify_wedge(const VerifyOptions& o) {
  SuiteReport r{"wedge", {}, nlohmann::json::object()};
  r.checks.push_back(frame_structure());
  r.checks.push_back(expansion_exact());
  r.checks.push_back(boundary_identity_suite(o));
  r.checks.push_back(sylvester_franke_suite(o));
  r.checks.push_back(dirichlet_minor_suite(o));
  double gap = 0.0, c = 0.0;
  r.checks.push_back(frame_gap_suite(o, &gap));
  r.checks.push_back(norm_minors_suite(o, &c));
  r.extra["max_frame_gap_over_w"] = gap;
  r.extra["norm_minors_constant"] = c;
  return r;
}

SuiteReport verify_interlacing(const VerifyOptions& o) {
  auto weyl = parallel_map<WeylPart>(static_cast<std::size_t>(o.interlacing_trials), o.workers,
                                     [&](std::size_t i) { return weyl_trial(o, i); });
  std::vector<Outcome> chains, bounds;
  double worst_slack = kInf;
  long vacuous = 0;
  for (const auto& p : weyl) {
    chains.push_back(p.weyl);
    bounds.push_back(p.bound);
    worst_slack = std::min(worst_slack, p.worst_slack);
    vacuous += p.vacuous;
  }
  auto parts =
      parallel_map<PartitionPart>(static_cast<std::size_t>(o.partition_samples), o.workers,
                                  [&](std::size_t i) { return partition_trial(o, i); });
  std::vector<Outcome> defects, ranks;
  for (const auto& p : parts) {
    defects.push_back(p.defect);
    ranks.push_back(p.rank);
  }
  SuiteReport r{"interlacing", {}, nlohmann::json::object()};
  r.checks.push_back(fold("weyl_chains", chains, 1e-9,
                          "both orderings per trial; worst = largest chain violation"));
  r.checks.push_back(fold("logdet_rank_bound", bounds, 1e-9,
                          "log|det(H1-E)| - log|det(H2-E)| <= 4 r max(log+, log-); worst = "
                          "largest excess over the bound, 0 when none"));
  r.checks.push_back(fold("partition_defect", defects, 1e-8,
                          "grid partitions; worst = largest excess of defect over bound, 0 when none"));
  r.checks.push_back(fold("partition_rank", ranks, 0.0,
                          "rank(H - direct sum) <= |union of boundaries|; worst = largest "
                          "excess of rank over boundary size, 0 when none"));
  long violations = 0;
  for (const auto& c : r.checks) violations += c.failures;
  r.extra["violations"] = violations;
  r.extra["worst_slack"] = worst_slack;
  r.extra["trials"] = o.interlacing_trials;
  r.extra["vacuous"] = vacuous;
  return r;
}

SuiteReport verify_determinants(const VerifyOptions& o) {
  SuiteReport r{"determinants", {}, nlohmann::json::object()};
  r.checks.push_back(route_suite(o));
  r.checks.push_back(symplectic_suite(o));
  r.checks.push_back(recurrence_suite(o));
  r.checks.push_back(closed_form_lyapunov(o));
  r.checks.push_back(spectrum_pairing(o));
  return r;
}

std::vector<SuiteReport> run_suites(const std::string& name, const VerifyOptions& o) {
  if (name == "wedge") return {verify_wedge(o)};
  if (name == "interlacing") return {verify_interlacing(o)};
  if (name == "determinants") return {verify_determinants(o)};
  if (name == "all") return {verify_wedge(o), verify_interlacing(o), verify_determinants(o)};
  throw ConfigError("unknown verify suite: " + name);
}

}  // namespace stripdet
