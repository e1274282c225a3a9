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

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace stripdet {

/// Strip [1,N] x [1,W] with intra-column coupling band d.
struct StripGeometry {
  int width = 1;      // W
  int bandwidth = 1;  // d, 1 <= d <= W
  int columns = 1;    // N

  void validate() const;
  long sites() const { return static_cast<long>(width) * columns; }
};

/// Lattice site (n, w): column n in [1, N], row w in [1, W].
struct Site {
  int n = 1;
  int w = 1;
  auto operator<=>(const Site&) const = default;
};

/// Two sites are bonded when horizontally adjacent in the same row, or in
/// the same column with 0 < |w - w'| <= bandwidth.
bool bonded(const Site& a, const Site& b, int bandwidth);

/// Finite site set. Sites are kept sorted by (n, w); that order is the row
/// order of assembled Hamiltonians.
class Region {
 public:
  /// [n0, n1] x [w0, w1], inclusive.
  static Region rectangle(int n0, int n1, int w0, int w1);
  /// Full strip [1, N] x [1, W].
  static Region strip(const StripGeometry& g);
  /// Arbitrary nonempty set; duplicates removed. Recognizes rectangles.
  static Region from_sites(std::vector<Site> sites);

  const std::vector<Site>& sites() const { return sites_; }
  std::size_t size() const { return sites_.size(); }
  bool is_rectangle() const { return rect_.has_value(); }
  bool contains(const Site& s) const;
  bool contains(const Region& other) const;
  /// Checks every site against [1, N] x [1, W].
  bool fits(const StripGeometry& g) const;

  int first_column() const;
  int last_column() const;
  int lowest_row() const;
  int highest_row() const;

  Region without(const Site& s) const;

  bool operator==(const Region& o) const { return sites_ == o.sites_; }

 private:
  struct Rect {
    int n0, n1, w0, w1;
  };
  Region() = default;
  void detect_rectangle();

  std::vector<Site> sites_;
  std::optional<Rect> rect_;
};

// Potential densities.

struct UniformDensity {
  double low = -1.0;
  double high = 1.0;
};

/// Cauchy(0, scale) conditioned on |x| <= cutoff.
struct TruncatedCauchyDensity {
  double scale = 1.0;
  double cutoff = 1.0e3;
};

struct PointMassDensity {
  double at = 0.0;
};

/// Piecewise-constant density on bins [edges[i], edges[i+1]). Weights are
/// relative bin heights; they are normalized on construction.
struct TableDensity {
  std::vector<double> edges;
  std::vector<double> heights;
};

class Density {
 public:
  using Variant = std::variant<UniformDensity, TruncatedCauchyDensity,
                               PointMassDensity, TableDensity>;

  Density() : law_(UniformDensity{}) {}
  explicit Density(Variant law);

  const Variant& law() const { return law_; }
  std::string name() const;

  /// Inverse CDF on (0, 1).
  double quantile(double u) const;
  double pdf(double x) const;
  /// sup rho; +inf for a point mass.
  double sup() const;
  /// A constant D with P(|V| >= T) <= D / T for all T >= 1.
  double tail_constant() const;
  /// inf of rho over [a, b].
  double infimum(double a, double b) const;
  bool degenerate() const {
    return std::holds_alternative<PointMassDensity>(law_);
  }

 private:
  Variant law_;
  std::vector<double> table_cdf_;  // cumulative mass at edges, TableDensity only
};

/// Law of the symmetric intra-column matrices U_n.
struct CouplingLaw {
  enum class Kind { Zero, Adjacency, RandomBand };
  Kind kind = Kind::Adjacency;
  /// Adjacency: U(x, y) = coupling for |x - y| == 1.
  double coupling = 1.0;
  /// RandomBand: entries U(x, y), |x - y| <= d, i.i.d. uniform on
  /// [-amplitude, amplitude], symmetrized.
  double amplitude = 1.0;

  /// Deterministic bound on ||U_n|| for the given width and band.
  double norm_bound(int width, int bandwidth) const;
  std::string name() const;
};

struct DisorderSpec {
  Density density;
  CouplingLaw coupling;
  /// Declared constants; default to the exact values for the law.
  double d0 = 0.0;
  double d1 = 0.0;

  /// Fills d0/d1 from the law when unset and checks declared values are
  /// not below the exact ones.
  void validate(int width = 1, int bandwidth = 1);

  nlohmann::json to_json() const;
  static DisorderSpec from_json(const nlohmann::json& j);
};

/// Counter-based view of one disorder realization. V_(n,w) and U_n are pure
/// functions of (seed, site) and (seed, n), so any column can be produced
/// independently and in any order.
class DisorderStream {
 public:
  DisorderStream(int width, int bandwidth, DisorderSpec spec,
                 std::uint64_t seed);

  double potential(long n, int w) const;
  Eigen::MatrixXd coupling(long n) const;
  /// diag(V_(n, .)) - U_n
  Eigen::MatrixXd s_matrix(long n) const;

  int width() const { return width_; }
  int bandwidth() const { return bandwidth_; }
  const DisorderSpec& spec() const { return spec_; }
  std::uint64_t seed() const { return seed_; }

 private:
  int width_;
  int bandwidth_;
  DisorderSpec spec_;
  std::uint64_t seed_;
};

/// Materialized realization on [1, N] x [1, W].
class DisorderSample {
 public:
  DisorderSample(StripGeometry g, std::vector<double> potentials,
                 std::vector<Eigen::MatrixXd> couplings);

  const StripGeometry& geometry() const { return geometry_; }
  double potential(int n, int w) const;
  double potential(const Site& s) const { return potential(s.n, s.w); }
  const Eigen::MatrixXd& coupling(int n) const;

  /// Copy with the potential at one site replaced.
  DisorderSample with_potential(const Site& s, double value) const;

 private:
  StripGeometry geometry_;
  std::vector<double> v_;  // (n-1)*W + (w-1)
  std::vector<Eigen::MatrixXd> u_;
};

DisorderSample sample_disorder(const StripGeometry& g, const DisorderSpec& spec,
                               std::uint64_t seed);

/// diag(V_(n,1..W)) - U_n.
Eigen::MatrixXd s_matrix(const DisorderSample& sample, int n);

/// Dirichlet restriction H_Lambda with its site <-> row map.
struct HamiltonianMatrix {
  Eigen::MatrixXd matrix;
  std::vector<Site> sites;

  /// Row of a site, or -1 when it is not in the region.
  int row_of(const Site& s) const;
};

HamiltonianMatrix assemble_hamiltonian(const DisorderSample& sample,
                                       const Region& region);

/// Sites of region \ subregion bonded to some site of subregion.
std::vector<Site> boundary(const Region& region, const Region& subregion,
                           const StripGeometry& g);

/// "n,w,V" rows.
std::string potentials_csv(const DisorderSample& sample);
/// One block per column: a "# n=<n>" line followed by W comma-separated rows.
std::string coupling_blocks_csv(const DisorderSample& sample);

}  // namespace stripdet
