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

#include <vector>

#include "stripdet/model.hpp"

namespace stripdet::testing {

inline DisorderSpec make_spec(Density::Variant law, CouplingLaw::Kind kind, int width = 1,
                              int bandwidth = 1) {
  DisorderSpec s;
  s.density = Density(std::move(law));
  s.coupling.kind = kind;
  s.validate(width, bandwidth);
  return s;
}

inline DisorderSpec uniform_spec(double lo, double hi,
                                 CouplingLaw::Kind kind = CouplingLaw::Kind::Adjacency,
                                 int width = 1, int bandwidth = 1) {
  return make_spec(UniformDensity{lo, hi}, kind, width, bandwidth);
}

inline DisorderSpec cauchy_spec(CouplingLaw::Kind kind = CouplingLaw::Kind::Adjacency,
                                int width = 1, int bandwidth = 1) {
  return make_spec(TruncatedCauchyDensity{1.0, 1.0e3}, kind, width, bandwidth);
}

inline DisorderSpec point_spec(double at, CouplingLaw::Kind kind = CouplingLaw::Kind::Zero,
                               int width = 1, int bandwidth = 1) {
  return make_spec(PointMassDensity{at}, kind, width, bandwidth);
}

inline Eigen::MatrixXd adjacency(int width) {
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(width, width);
  for (int i = 0; i + 1 < width; ++i) u(i, i + 1) = u(i + 1, i) = 1.0;
  return u;
}

/// Realization with explicit potentials v[(n-1)W + (w-1)] and the same
/// coupling in every column.
inline DisorderSample fixed_sample(int width, int columns, std::vector<double> v,
                                   const Eigen::MatrixXd& u) {
  std::vector<Eigen::MatrixXd> us(static_cast<std::size_t>(columns), u);
  return DisorderSample(StripGeometry{width, 1, columns}, std::move(v), std::move(us));
}

inline DisorderSample zero_sample(int width, int columns, bool coupled) {
  return fixed_sample(width, columns,
                      std::vector<double>(static_cast<std::size_t>(width * columns), 0.0),
                      coupled ? adjacency(width) : Eigen::MatrixXd::Zero(width, width));
}

/// Dense H_N - E assembled independently of the library, for the strip
/// [1, N] x [1, W] in (n, w) row order.
inline Eigen::MatrixXd dense_shifted(const DisorderSample& s, double energy) {
  const int w = s.geometry().width, n = s.geometry().columns;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n * w, n * w);
  for (int c = 1; c <= n; ++c) {
    const int o = (c - 1) * w;
    h.block(o, o, w, w) = -s.coupling(c);
    for (int r = 1; r <= w; ++r) h(o + r - 1, o + r - 1) += s.potential(c, r) - energy;
    if (c < n) {
      h.block(o, o + w, w, w) = -Eigen::MatrixXd::Identity(w, w);
      h.block(o + w, o, w, w) = -Eigen::MatrixXd::Identity(w, w);
    }
  }
  return h;
}


}  // namespace stripdet::testing
