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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stripdet/error.hpp"
#include "stripdet/model.hpp"
#include "stripdet/rng.hpp"
#include "test_support.hpp"

namespace stripdet {
namespace {

using testing::adjacency;
using testing::fixed_sample;
using testing::zero_sample;

TEST(Geometry, RejectsBadDimensions) {
  EXPECT_THROW((StripGeometry{-2, 1, 4}.validate()), ConfigError);
  EXPECT_THROW((StripGeometry{2, 3, 4}.validate()), ConfigError);
  EXPECT_THROW((StripGeometry{2, 0, 4}.validate()), ConfigError);
  EXPECT_THROW((StripGeometry{2, 1, 0}.validate()), ConfigError);
  EXPECT_NO_THROW((StripGeometry{3, 2, 5}.validate()));
}

TEST(Region, RectangleDetectionAndOrder) {
  const Region r = Region::rectangle(2, 3, 1, 2);
  EXPECT_TRUE(r.is_rectangle());
  ASSERT_EQ(r.size(), 4u);
  EXPECT_EQ(r.sites()[0], (Site{2, 1}));
  EXPECT_EQ(r.sites()[1], (Site{2, 2}));
  EXPECT_EQ(r.sites()[3], (Site{3, 2}));
  const Region same = Region::from_sites({{3, 2}, {2, 1}, {3, 1}, {2, 2}, {2, 2}});
  EXPECT_TRUE(same.is_rectangle());
  EXPECT_EQ(same, r);
  const Region ell = r.without({3, 2});
  EXPECT_FALSE(ell.is_rectangle());
  EXPECT_TRUE(r.contains(ell));
  EXPECT_FALSE(ell.contains(r));
  EXPECT_TRUE(r.fits(StripGeometry{2, 1, 3}));
  EXPECT_FALSE(r.fits(StripGeometry{1, 1, 3}));
}

TEST(SampleDisorder, DegenerateLawGivesZeroPotential) {
  const auto spec = testing::point_spec(0.0);
  const auto s = sample_disorder(StripGeometry{1, 1, 3}, spec, 7);
  for (int n = 1; n <= 3; ++n) {
    EXPECT_EQ(s.potential(n, 1), 0.0);
    EXPECT_EQ(s.coupling(n)(0, 0), 0.0);
  }
}

TEST(SampleDisorder, SameSeedSameSample) {
  const auto spec = testing::uniform_spec(-1, 1, CouplingLaw::Kind::RandomBand, 3, 2);
  const StripGeometry g{3, 2, 6};
  const auto a = sample_disorder(g, spec, 99);
  const auto b = sample_disorder(g, spec, 99);
  EXPECT_EQ(potentials_csv(a), potentials_csv(b));
  EXPECT_EQ(coupling_blocks_csv(a), coupling_blocks_csv(b));
}

TEST(SampleDisorder, NeighbouringSeedsDiffer) {
  const auto spec = testing::uniform_spec(-1, 1);
  const StripGeometry g{2, 1, 4};
  int collisions = 0;
  for (std::uint64_t s = 0; s < 100; ++s)
    if (potentials_csv(sample_disorder(g, spec, s)) ==
        potentials_csv(sample_disorder(g, spec, s + 1)))
      ++collisions;
  EXPECT_EQ(collisions, 0);
}

TEST(SampleDisorder, MatchesStreamView) {
  const auto spec = testing::uniform_spec(-2, 2, CouplingLaw::Kind::RandomBand, 3, 1);
  const StripGeometry g{3, 1, 5};
  const auto s = sample_disorder(g, spec, 12);
  const DisorderStream stream(3, 1, spec, 12);
  for (int n = 1; n <= 5; ++n) {
    for (int w = 1; w <= 3; ++w) EXPECT_EQ(s.potential(n, w), stream.potential(n, w));
    EXPECT_TRUE(s.coupling(n).isApprox(stream.coupling(n)) ||
                (s.coupling(n) - stream.coupling(n)).norm() == 0.0);
  }
}

TEST(SampleDisorder, RandomBandCouplingIsSymmetricWithinBand) {
  const auto spec = testing::uniform_spec(-1, 1, CouplingLaw::Kind::RandomBand, 5, 2);
  const auto s = sample_disorder(StripGeometry{5, 2, 3}, spec, 4);
  for (int n = 1; n <= 3; ++n) {
    const Eigen::MatrixXd& u = s.coupling(n);
    EXPECT_EQ((u - u.transpose()).norm(), 0.0);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j)
        if (std::abs(i - j) > 2) EXPECT_EQ(u(i, j), 0.0);
    EXPECT_LE(u.operatorNorm(), spec.coupling.norm_bound(5, 2) + 1e-12);
  }
}

TEST(SMatrix, ZeroData) {
  EXPECT_EQ(s_matrix(zero_sample(2, 1, false), 1).norm(), 0.0);
}

TEST(SMatrix, AdjacencySubstitution) {
  const auto s = fixed_sample(2, 1, {0.3, -1.7}, adjacency(2));
  Eigen::Matrix2d expect;
  expect << 0.3, -1.0, -1.0, -1.7;
  EXPECT_EQ((s_matrix(s, 1) - expect).norm(), 0.0);
}

TEST(SMatrix, DiagonalMinusCoupling) {
  const auto spec = testing::cauchy_spec(CouplingLaw::Kind::RandomBand, 4, 2);
  const auto s = sample_disorder(StripGeometry{4, 2, 3}, spec, 5);
  for (int n = 1; n <= 3; ++n) {
    Eigen::MatrixXd expect = -s.coupling(n);
    for (int w = 1; w <= 4; ++w) expect(w - 1, w - 1) += s.potential(n, w);
    EXPECT_EQ((s_matrix(s, n) - expect).norm(), 0.0);
  }
}

TEST(Hamiltonian, SingleSite) {
  const auto s = fixed_sample(1, 2, {1.25, 4.0}, Eigen::MatrixXd::Zero(1, 1));
  const auto h = assemble_hamiltonian(s, Region::from_sites({{2, 1}}));
  ASSERT_EQ(h.matrix.rows(), 1);
  EXPECT_EQ(h.matrix(0, 0), 4.0);
  EXPECT_EQ(h.row_of({2, 1}), 0);
  EXPECT_EQ(h.row_of({1, 1}), -1);
}

TEST(Hamiltonian, TwoSiteChain) {
  const auto h = assemble_hamiltonian(zero_sample(1, 2, false), Region::rectangle(1, 2, 1, 1));
  Eigen::Matrix2d expect;
  expect << 0, -1, -1, 0;
  EXPECT_EQ((h.matrix - expect).norm(), 0.0);
}

TEST(Hamiltonian, LaplacianSpectrum) {
  for (auto [w, n] : {std::pair{2, 3}, std::pair{3, 5}, std::pair{4, 4}}) {
    const auto s = zero_sample(w, n, true);
    const auto h = assemble_hamiltonian(s, Region::strip(s.geometry()));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.matrix);
    std::vector<double> expect;
    for (int j = 1; j <= n; ++j)
      for (int k = 1; k <= w; ++k)
        expect.push_back(-2 * std::cos(std::numbers::pi * j / (n + 1)) -
                         2 * std::cos(std::numbers::pi * k / (w + 1)));
    std::sort(expect.begin(), expect.end());
    for (int i = 0; i < n * w; ++i) EXPECT_NEAR(es.eigenvalues()(i), expect[i], 1e-12);
  }
}

TEST(Hamiltonian, AgreesWithIndependentAssembly) {
  const auto spec = testing::uniform_spec(-2, 2, CouplingLaw::Kind::RandomBand, 3, 2);
  const auto s = sample_disorder(StripGeometry{3, 2, 4}, spec, 21);
  const auto h = assemble_hamiltonian(s, Region::strip(s.geometry()));
  EXPECT_EQ((h.matrix - testing::dense_shifted(s, 0.0)).norm(), 0.0);
}

TEST(Boundary, SubregionEqualsRegion) {
  const StripGeometry g{2, 1, 4};
  const Region r = Region::strip(g);
  EXPECT_TRUE(boundary(r, r, g).empty());
}

TEST(Boundary, ColumnBlock) {
  const StripGeometry g{2, 1, 4};
  const auto b = boundary(Region::rectangle(1, 4, 1, 2), Region::rectangle(1, 2, 1, 2), g);
  EXPECT_EQ(b, (std::vector<Site>{{3, 1}, {3, 2}}));
}

TEST(Boundary, InteriorSite) {
  const StripGeometry g{4, 1, 5};
  const auto b = boundary(Region::strip(g), Region::from_sites({{3, 2}}), g);
  EXPECT_EQ(b, (std::vector<Site>{{2, 2}, {3, 1}, {3, 3}, {4, 2}}));
}

TEST(Boundary, WiderBandReachesFurtherRows) {
  const StripGeometry g{4, 2, 3};
  const auto b = boundary(Region::strip(g), Region::from_sites({{2, 1}}), g);
  EXPECT_EQ(b, (std::vector<Site>{{1, 1}, {2, 2}, {2, 3}, {3, 1}}));
}

TEST(Bonded, Rules) {
  EXPECT_TRUE(bonded({1, 1}, {2, 1}, 1));
  EXPECT_FALSE(bonded({1, 1}, {2, 2}, 2));
  EXPECT_FALSE(bonded({1, 1}, {1, 3}, 1));
  EXPECT_TRUE(bonded({1, 1}, {1, 3}, 2));
  EXPECT_FALSE(bonded({1, 1}, {1, 1}, 1));
}

TEST(Density, CauchyTailConstant) {
  const Density d(TruncatedCauchyDensity{1.0, 1.0e3});
  const double D = d.tail_constant();
  CounterRng rng(derive_seed(3, 1));
  const int n = 200000;
  std::vector<double> draws(n);
  for (auto& x : draws) x = std::abs(d.quantile(rng.uniform()));
  for (double t : {1.0, 3.0, 10.0, 30.0, 100.0}) {
    const double p = static_cast<double>(std::count_if(draws.begin(), draws.end(),
                                                       [&](double x) { return x >= t; })) /
                     n;
    // exact tail of the truncated law
    const double exact = 1.0 - std::atan(t) / std::atan(1.0e3);
    EXPECT_LE(exact, D / t);
    EXPECT_NEAR(p, exact, 5.0 * std::sqrt(exact / n) + 1e-4);
  }
}

TEST(Density, QuantileAndPdfConsistency) {
  const Density u(UniformDensity{-2, 2});
  EXPECT_DOUBLE_EQ(u.quantile(0.25), -1.0);
  EXPECT_DOUBLE_EQ(u.pdf(0.0), 0.25);
  EXPECT_DOUBLE_EQ(u.sup(), 0.25);
  EXPECT_DOUBLE_EQ(u.infimum(-1, 1), 0.25);
  EXPECT_EQ(u.infimum(1, 3), 0.0);
  const Density p(PointMassDensity{0.5});
  EXPECT_TRUE(p.degenerate());
  EXPECT_TRUE(std::isinf(p.sup()));
  const Density t(TableDensity{{0, 1, 3}, {1, 1}});
  // Bin masses 1/3 and 2/3.
  EXPECT_NEAR(t.quantile(0.5), 1.5, 1e-12);
}

TEST(DisorderSpec, JsonRoundTrip) {
  auto spec = testing::cauchy_spec(CouplingLaw::Kind::RandomBand, 3, 2);
  const auto back = DisorderSpec::from_json(spec.to_json());
  EXPECT_EQ(back.to_json(), spec.to_json());
  EXPECT_THROW(DisorderSpec::from_json(nlohmann::json{{"density", "gaussian"}}), ConfigError);
  EXPECT_THROW(
      DisorderSpec::from_json(nlohmann::json{{"density", "uniform"},
                                             {"params", {{"low", 1}, {"high", -1}}}}),
      ConfigError);
}

TEST(DisorderSpec, DeclaredConstantsBelowExactRejected) {
  auto spec = testing::uniform_spec(-2, 2);
  EXPECT_DOUBLE_EQ(spec.d0, 0.25);
  spec.d0 = 0.1;
  EXPECT_THROW(spec.validate(), ConfigError);
}

}  // namespace
}  // namespace stripdet
