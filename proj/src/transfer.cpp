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

#include "stripdet/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "stripdet/error.hpp"
#include "stripdet/rng.hpp"

namespace stripdet {

namespace {

/// Left-multiplies a 2W x k matrix by [[S - E, -I], [I, 0]] without forming
/// the step.
Eigen::MatrixXd apply_step(const Eigen::MatrixXd& s, double energy,
                           const Eigen::MatrixXd& x) {
  const Eigen::Index w = s.rows();
  Eigen::MatrixXd out(x.rows(), x.cols());
  out.topRows(w).noalias() = s * x.topRows(w);
  out.topRows(w) -= energy * x.topRows(w) + x.bottomRows(w);
  out.bottomRows(w) = x.topRows(w);
  return out;
}

/// Thin QR with the sign convention diag(R) >= 0.
void positive_qr(const Eigen::MatrixXd& x, Eigen::MatrixXd& q, Eigen::MatrixXd& r) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
  const Eigen::Index k = x.cols();
  q = qr.householderQ() * Eigen::MatrixXd::Identity(x.rows(), k);
  r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < k; ++i) {
    if (r(i, i) < 0) {
      r.row(i) *= -1.0;
      q.col(i) *= -1.0;
    }
  }
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

Eigen::MatrixXd one_step(const Eigen::MatrixXd& s, double energy) {
  const Eigen::Index w = s.rows();
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(2 * w, 2 * w);
  t.topLeftCorner(w, w) = s - energy * Eigen::MatrixXd::Identity(w, w);
  t.topRightCorner(w, w) = -Eigen::MatrixXd::Identity(w, w);
  t.bottomLeftCorner(w, w) = Eigen::MatrixXd::Identity(w, w);
  return t;
}

Eigen::MatrixXd transfer_product(const DisorderSample& sample, double energy,
                                 int steps, int first) {
  const int w = sample.geometry().width;
  Eigen::MatrixXd t = Eigen::MatrixXd::Identity(2 * w, 2 * w);
  for (int k = first; k < first + steps; ++k)
    t = apply_step(s_matrix(sample, k), energy, t);
  return t;
}

// CocycleAccumulator

CocycleAccumulator::CocycleAccumulator(int width, bool track_triangular)
    : width_(width),
      track_(track_triangular),
      q_(Eigen::MatrixXd::Identity(2 * width, 2 * width)),
      r_(Eigen::VectorXd::Zero(2 * width)) {
  if (width < 1) throw ConfigError("accumulator width must be >= 1");
  if (track_) g_ = Eigen::MatrixXd::Identity(2 * width, 2 * width);
}

void CocycleAccumulator::advance(const Eigen::MatrixXd& s, double energy) {
  if (s.rows() != width_ || s.cols() != width_)
    throw ConfigError("S block has wrong shape");
  if (!s.allFinite() || !std::isfinite(energy))
    throw NumericError("non-finite entry in transfer step");
  absorb(apply_step(s, energy, q_));
}

void CocycleAccumulator::advance_matrix(const Eigen::MatrixXd& m) {
  if (m.rows() != 2 * width_ || m.cols() != 2 * width_)
    throw ConfigError("step matrix has wrong shape");
  if (!m.allFinite()) throw NumericError("non-finite entry in transfer step");
  absorb(m * q_);
}

void CocycleAccumulator::absorb(Eigen::MatrixXd x) {
  Eigen::MatrixXd q, r;
  positive_qr(x, q, r);
  const Eigen::Index n = r.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(r(i, i) > 0)) throw NumericError("singular transfer step");
  if (track_) {
    // New G = D'^{-1} R D G with D = diag(exp(r_old)), D' = diag(R) D.
    Eigen::MatrixXd scaled(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index k = 0; k < n; ++k)
        scaled(i, k) = k < i ? 0.0 : r(i, k) / r(i, i) * std::exp(r_(k) - r_(i));
    g_ = (scaled * g_).triangularView<Eigen::Upper>();
    g_.diagonal().setOnes();
  }
  for (Eigen::Index i = 0; i < n; ++i) r_(i) += std::log(r(i, i));
  q_ = std::move(q);
  ++steps_;
  if (!r_.allFinite()) throw NumericError("log radii overflowed");
}

Eigen::VectorXd CocycleAccumulator::log_singular_values() const {
  Eigen::VectorXd sorted = r_;
  std::sort(sorted.data(), sorted.data() + sorted.size(), std::greater<>());
  if (!track_) return sorted;
  const double top = r_.maxCoeff();
  if (top - r_.minCoeff() > 700.0 || !g_.allFinite()) return sorted;
  Eigen::MatrixXd b = (r_.array() - top).exp().matrix().asDiagonal() * g_;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b);
  Eigen::VectorXd out = svd.singularValues().array().log() + top;
  return out;
}

Eigen::MatrixXd CocycleAccumulator::product() const {
  if (!track_) throw ConfigError("product() needs triangular tracking");
  return q_ * r_.array().exp().matrix().asDiagonal() * g_;
}

double CocycleAccumulator::orthogonality_drift() const {
  return (q_.transpose() * q_ - Eigen::MatrixXd::Identity(q_.cols(), q_.cols()))
      .cwiseAbs()
      .maxCoeff();
}

void accumulate_into(CocycleAccumulator& acc, const DisorderSample& sample,
                     double energy, int first, int last) {
  if (first < 1 || last > sample.geometry().columns)
    throw RangeError("accumulation range outside sampled extent");
  for (int k = first; k <= last; ++k) acc.advance(s_matrix(sample, k), energy);
}

CocycleAccumulator accumulate(const DisorderSample& sample, double energy, int steps) {
  CocycleAccumulator acc(sample.geometry().width);
  if (steps > 0) accumulate_into(acc, sample, energy, 1, steps);
  return acc;
}

// Frames

namespace {

template <class StepSource>
PropagatedFrame propagate(StepSource&& s_of, int width, double energy, long steps,
                          const Eigen::MatrixXd& frame) {
  if (frame.rows() != 2 * width) throw ConfigError("frame must have 2W rows");
  PropagatedFrame out;
  Eigen::MatrixXd r;
  positive_qr(frame, out.basis, r);
  auto absorb_det = [&](const Eigen::MatrixXd& tri) {
    for (Eigen::Index i = 0; i < tri.rows(); ++i)
      out.scale *= SignedLogDet::from_value(tri(i, i));
  };
  out.scale = SignedLogDet::one();
  absorb_det(r);
  for (long k = 1; k <= steps; ++k) {
    Eigen::MatrixXd s = s_of(k);
    if (!s.allFinite()) throw NumericError("non-finite entry in transfer step");
    Eigen::MatrixXd x = apply_step(s, energy, out.basis);
    positive_qr(x, out.basis, r);
    absorb_det(r);
  }
  return out;
}

}  // namespace

PropagatedFrame propagate_frame(const DisorderSample& sample, double energy,
                                int steps, const Eigen::MatrixXd& frame) {
  if (steps > sample.geometry().columns)
    throw RangeError("propagation beyond sampled extent");
  return propagate([&](long k) { return s_matrix(sample, static_cast<int>(k)); },
                   sample.geometry().width, energy, steps, frame);
}

PropagatedFrame propagate_frame(const DisorderStream& stream, double energy,
                                long steps, const Eigen::MatrixXd& frame) {
  return propagate([&](long k) { return stream.s_matrix(k); }, stream.width(),
                   energy, steps, frame);
}

// Lyapunov spectrum

double LyapunovSpectrum::sum() const {
  return std::accumulate(gamma.begin(), gamma.end(), 0.0);
}

nlohmann::json LyapunovSpectrum::to_json() const {
  return {{"E", energy},       {"N", steps},           {"W", width},
          {"gamma", gamma},    {"stderr", std_error},  {"radii", radii},
          {"gamma_sum", sum()}, {"strictly_ordered", strictly_ordered}};
}

std::string LyapunovSpectrum::to_csv() const {
  std::string out = "index,gamma,stderr\n";
  for (std::size_t i = 0; i < gamma.size(); ++i)
    out += std::to_string(i + 1) + "," + fmt(gamma[i]) + "," + fmt(std_error[i]) + "\n";
  return out;
}

namespace {

struct SingleRun {
  Eigen::VectorXd radii;                    // final log radii, unsorted
  std::vector<Eigen::VectorXd> increments;  // per segment
  std::vector<long> lengths;
};

SingleRun run_product(const DisorderStream& stream, double energy, long steps,
                      int segments) {
  CocycleAccumulator acc(stream.width(), false);
  SingleRun run;
  Eigen::VectorXd last = acc.log_radii();
  long seg_start = 0;
  for (int s = 0; s < segments; ++s) {
    long seg_end = steps * (s + 1) / segments;
    for (long k = seg_start + 1; k <= seg_end; ++k)
      acc.advance(stream.s_matrix(k), energy);
    if (seg_end > seg_start) {
      run.increments.push_back(acc.log_radii() - last);
      run.lengths.push_back(seg_end - seg_start);
    }
    last = acc.log_radii();
    seg_start = seg_end;
  }
  run.radii = acc.log_radii();
  return run;
}

std::vector<Eigen::Index> descending_order(const Eigen::VectorXd& v) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(v.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return v(a) > v(b); });
  return idx;
}

}  // namespace

LyapunovSpectrum lyapunov_spectrum(const DisorderSpec& spec,
                                   const StripGeometry& geometry, double energy,
                                   long steps, std::uint64_t seed,
                                   const LyapunovOptions& options) {
  StripGeometry{geometry.width, geometry.bandwidth, 1}.validate();
  const int w = geometry.width;
  if (steps < 1 || steps * w < options.min_steps_times_width)
    throw ConfigError("N too small for a Lyapunov estimate (N*W below minimum)");
  if (options.segments < 2 || options.segments > steps)
    throw ConfigError("segments must lie in [2, N]");
  if (options.replicas < 1) throw ConfigError("replicas must be >= 1");

  LyapunovSpectrum out;
  out.energy = energy;
  out.steps = steps;
  out.width = w;

  if (options.replicas == 1) {
    DisorderStream stream(w, geometry.bandwidth, spec, seed);
    SingleRun run = run_product(stream, energy, steps, options.segments);
    auto order = descending_order(run.radii);
    for (auto i : order) out.radii.push_back(run.radii(i));
    for (int i = 0; i < w; ++i)
      out.gamma.push_back(run.radii(order[i]) / static_cast<double>(steps));

    // Block bootstrap over segments.
    CounterRng rng(derive_seed(seed, 0xB0075742ULL));
    const std::size_t nseg = run.increments.size();
    std::vector<double> sum(w, 0.0), sumsq(w, 0.0);
    for (int b = 0; b < options.bootstrap_resamples; ++b) {
      Eigen::VectorXd total = Eigen::VectorXd::Zero(2 * w);
      long len = 0;
      for (std::size_t s = 0; s < nseg; ++s) {
        std::size_t pick = rng.index(nseg);
        total += run.increments[pick];
        len += run.lengths[pick];
      }
      for (int i = 0; i < w; ++i) {
        double rate = total(order[i]) / static_cast<double>(len);
        sum[i] += rate;
        sumsq[i] += rate * rate;
      }
    }
    const double nb = options.bootstrap_resamples;
    for (int i = 0; i < w; ++i) {
      double mean = sum[i] / nb;
      out.std_error.push_back(std::sqrt(std::max(0.0, sumsq[i] / nb - mean * mean)));
    }
  } else {
    const int reps = options.replicas;
    Eigen::MatrixXd rates(reps, w);
    Eigen::VectorXd radii_sum = Eigen::VectorXd::Zero(2 * w);
    for (int rep = 0; rep < reps; ++rep) {
      DisorderStream stream(w, geometry.bandwidth, spec,
                            derive_seed(seed, 0x5EED0000ULL + rep));
      SingleRun run = run_product(stream, energy, steps, options.segments);
      auto order = descending_order(run.radii);
      for (int i = 0; i < 2 * w; ++i) radii_sum(i) += run.radii(order[i]);
      for (int i = 0; i < w; ++i)
        rates(rep, i) = run.radii(order[i]) / static_cast<double>(steps);
    }
    for (int i = 0; i < 2 * w; ++i) out.radii.push_back(radii_sum(i) / reps);
    for (int i = 0; i < w; ++i) {
      double mean = rates.col(i).mean();
      double var = reps > 1 ? (rates.col(i).array() - mean).square().sum() / (reps - 1)
                            : 0.0;
      out.gamma.push_back(mean);
      out.std_error.push_back(std::sqrt(var / reps));
    }
  }
  out.strictly_ordered = out.gamma.back() > 0;
  for (int i = 0; i + 1 < w; ++i)
    if (!(out.gamma[i] > out.gamma[i + 1])) out.strictly_ordered = false;
  return out;
}

// Structure checks

Eigen::MatrixXd symplectic_form(int width) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * width, 2 * width);
  j.topRightCorner(width, width) = -Eigen::MatrixXd::Identity(width, width);
  j.bottomLeftCorner(width, width) = Eigen::MatrixXd::Identity(width, width);
  return j;
}

double symplectic_defect(const Eigen::MatrixXd& t) {
  if (t.rows() != t.cols() || t.rows() % 2 != 0)
    throw ConfigError("symplectic_defect needs a 2W x 2W matrix");
  Eigen::MatrixXd j = symplectic_form(static_cast<int>(t.rows() / 2));
  Eigen::MatrixXd d = t.transpose() * j * t - j;
  if (d.isZero(0.0)) return 0.0;
  return Eigen::JacobiSVD<Eigen::MatrixXd>(d).singularValues()(0);
}

RecurrenceReport recurrence_check(const DisorderSample& sample, double energy,
                                  int steps, const Eigen::VectorXd& initial) {
  const int w = sample.geometry().width;
  if (initial.size() != 2 * w) throw ConfigError("initial vector must have 2W entries");
  if (steps > sample.geometry().columns)
    throw RangeError("recurrence beyond sampled extent");
  Eigen::VectorXd cur = initial.head(w);   // Psi_k
  Eigen::VectorXd prev = initial.tail(w);  // Psi_{k-1}
  RecurrenceReport rep;
  rep.solution_norm = initial.norm();
  for (int k = 1; k <= steps; ++k) {
    // -Psi_{k-1} - Psi_{k+1} + S_k Psi_k = E Psi_k
    Eigen::VectorXd next = s_matrix(sample, k) * cur - energy * cur - prev;
    prev = std::move(cur);
    cur = std::move(next);
    rep.solution_norm =
        std::max(rep.solution_norm, std::sqrt(cur.squaredNorm() + prev.squaredNorm()));
  }
  Eigen::VectorXd iterated(2 * w);
  iterated << cur, prev;
  Eigen::VectorXd via_product = transfer_product(sample, energy, steps) * initial;
  rep.gap = (iterated - via_product).norm();
  return rep;
}

}  // namespace stripdet
