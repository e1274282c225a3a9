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

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "stripdet/model.hpp"
#include "stripdet/signed_logdet.hpp"

namespace stripdet {

/// Single transfer step [[S - E, -I], [I, 0]].
Eigen::MatrixXd one_step(const Eigen::MatrixXd& s, double energy);

/// Naive dense product T_N^E = step_N ... step_1 over columns
/// [first, first + steps). Overflows for long products; tests and small N only.
Eigen::MatrixXd transfer_product(const DisorderSample& sample, double energy,
                                 int steps, int first = 1);

/// Stabilized product of transfer steps. The product is held as
///   T = Q * diag(exp(r)) * G
/// with Q orthogonal, r the running log of the positive diagonal of the
/// accumulated triangular factor, and G unit upper triangular. Every step
/// re-orthonormalizes by a QR with positive diagonal.
class CocycleAccumulator {
 public:
  /// `track_triangular` keeps G so singular values can be recovered; the
  /// Lyapunov estimator turns it off.
  explicit CocycleAccumulator(int width, bool track_triangular = true);

  /// Left-multiplies by one_step(s, energy).
  void advance(const Eigen::MatrixXd& s, double energy);
  /// Left-multiplies by an arbitrary 2W x 2W matrix.
  void advance_matrix(const Eigen::MatrixXd& m);

  int width() const { return width_; }
  long steps() const { return steps_; }
  const Eigen::MatrixXd& frame() const { return q_; }
  const Eigen::VectorXd& log_radii() const { return r_; }
  bool tracks_triangular() const { return track_; }

  /// log of the singular values of the product, descending. Exact up to
  /// rounding while the radii span less than ~700 nats; beyond that the
  /// sorted radii are returned.
  Eigen::VectorXd log_singular_values() const;
  /// Dense product; may overflow. Requires triangular tracking.
  Eigen::MatrixXd product() const;
  /// ||Q^t Q - I||_max
  double orthogonality_drift() const;

 private:
  void absorb(Eigen::MatrixXd x);

  int width_;
  bool track_;
  long steps_ = 0;
  Eigen::MatrixXd q_;
  Eigen::VectorXd r_;
  Eigen::MatrixXd g_;
};

/// Applies columns [first, last] of the sample to `acc`.
void accumulate_into(CocycleAccumulator& acc, const DisorderSample& sample,
                     double energy, int first, int last);

/// Accumulator over columns 1..N. N = 0 gives the identity.
CocycleAccumulator accumulate(const DisorderSample& sample, double energy, int steps);

/// T [u] = basis * R with orthonormal basis columns; `scale` is det R.
struct PropagatedFrame {
  Eigen::MatrixXd basis;
  SignedLogDet scale;
};

/// Pushes the 2W x k frame [u] through columns 1..N with a QR per step, so
/// W x W minors of long products are available without overflow.
PropagatedFrame propagate_frame(const DisorderSample& sample, double energy,
                                int steps, const Eigen::MatrixXd& frame);
/// Same, for a stream of columns 1..N.
PropagatedFrame propagate_frame(const DisorderStream& stream, double energy,
                                long steps, const Eigen::MatrixXd& frame);

struct LyapunovOptions {
  int segments = 16;
  int bootstrap_resamples = 1000;
  long min_steps_times_width = 64;
  /// > 1 averages independent seeds instead of bootstrapping one product.
  int replicas = 1;
};

struct LyapunovSpectrum {
  double energy = 0.0;
  long steps = 0;
  int width = 0;
  std::vector<double> gamma;   // top W rates, descending
  std::vector<double> std_error;  // per exponent
  std::vector<double> radii;   // all 2W log radii, descending
  bool strictly_ordered = false;

  double sum() const;
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

LyapunovSpectrum lyapunov_spectrum(const DisorderSpec& spec,
                                   const StripGeometry& geometry, double energy,
                                   long steps, std::uint64_t seed,
                                   const LyapunovOptions& options = {});

/// ||T^t J T - J||_2 with J = [[0, -I], [I, 0]].
double symplectic_defect(const Eigen::MatrixXd& t);
Eigen::MatrixXd symplectic_form(int width);

struct RecurrenceReport {
  double gap = 0.0;            // ||iterated - T_N^E * initial||
  double solution_norm = 0.0;  // max_k ||(Psi_{k+1}, Psi_k)||
};

/// Iterates Psi_{k+1} = (S_k - E) Psi_k - Psi_{k-1} from
/// (Psi_1, Psi_0) = initial and compares with the dense transfer product.
RecurrenceReport recurrence_check(const DisorderSample& sample, double energy,
                                  int steps, const Eigen::VectorXd& initial);

}  // namespace stripdet
