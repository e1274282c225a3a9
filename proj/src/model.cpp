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

#include "stripdet/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "stripdet/error.hpp"
#include "stripdet/rng.hpp"

namespace stripdet {

namespace {

constexpr std::uint64_t kCouplingStream = 0xC0FFEE0000000000ULL;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

void StripGeometry::validate() const {
  if (width < 1) throw ConfigError("width W must be >= 1");
  if (columns < 1) throw ConfigError("columns N must be >= 1");
  if (bandwidth < 1 || bandwidth > width)
    throw ConfigError("bandwidth d must satisfy 1 <= d <= W");
}

bool bonded(const Site& a, const Site& b, int bandwidth) {
  if (a.w == b.w) return std::abs(a.n - b.n) == 1;
  if (a.n == b.n) return std::abs(a.w - b.w) <= bandwidth;
  return false;
}

// Region

Region Region::rectangle(int n0, int n1, int w0, int w1) {
  if (n0 < 1 || w0 < 1 || n1 < n0 || w1 < w0)
    throw ConfigError("invalid rectangle bounds");
  Region r;
  r.sites_.reserve(static_cast<std::size_t>(n1 - n0 + 1) * (w1 - w0 + 1));
  for (int n = n0; n <= n1; ++n)
    for (int w = w0; w <= w1; ++w) r.sites_.push_back({n, w});
  r.rect_ = Rect{n0, n1, w0, w1};
  return r;
}

Region Region::strip(const StripGeometry& g) {
  return rectangle(1, g.columns, 1, g.width);
}

Region Region::from_sites(std::vector<Site> sites) {
  if (sites.empty()) throw ConfigError("region must be nonempty");
  for (const auto& s : sites)
    if (s.n < 1 || s.w < 1) throw ConfigError("site coordinates are 1-based");
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  Region r;
  r.sites_ = std::move(sites);
  r.detect_rectangle();
  return r;
}

void Region::detect_rectangle() {
  int n0 = first_column(), n1 = last_column();
  int w0 = lowest_row(), w1 = highest_row();
  std::size_t expected = static_cast<std::size_t>(n1 - n0 + 1) * (w1 - w0 + 1);
  if (expected == sites_.size())
    rect_ = Rect{n0, n1, w0, w1};
  else
    rect_.reset();
}

bool Region::contains(const Site& s) const {
  if (rect_)
    return s.n >= rect_->n0 && s.n <= rect_->n1 && s.w >= rect_->w0 &&
           s.w <= rect_->w1;
  return std::binary_search(sites_.begin(), sites_.end(), s);
}

bool Region::contains(const Region& other) const {
  return std::all_of(other.sites_.begin(), other.sites_.end(),
                     [&](const Site& s) { return contains(s); });
}

bool Region::fits(const StripGeometry& g) const {
  return last_column() <= g.columns && highest_row() <= g.width;
}

int Region::first_column() const { return sites_.front().n; }
int Region::last_column() const { return sites_.back().n; }

int Region::lowest_row() const {
  if (rect_) return rect_->w0;
  int m = sites_.front().w;
  for (const auto& s : sites_) m = std::min(m, s.w);
  return m;
}

int Region::highest_row() const {
  if (rect_) return rect_->w1;
  int m = sites_.front().w;
  for (const auto& s : sites_) m = std::max(m, s.w);
  return m;
}

Region Region::without(const Site& s) const {
  std::vector<Site> rest;
  rest.reserve(sites_.size());
  for (const auto& t : sites_)
    if (t != s) rest.push_back(t);
  return from_sites(std::move(rest));
}

// Density

Density::Density(Variant law) : law_(std::move(law)) {
  std::visit(
      overloaded{
          [](const UniformDensity& d) {
            if (!(d.low < d.high)) throw ConfigError("uniform: need low < high");
          },
          [](const TruncatedCauchyDensity& d) {
            if (!(d.scale > 0) || !(d.cutoff > 0))
              throw ConfigError("cauchy: scale and cutoff must be positive");
          },
          [](const PointMassDensity& d) {
            if (!std::isfinite(d.at)) throw ConfigError("point: non-finite atom");
          },
          [this](const TableDensity& d) {
            if (d.edges.size() < 2 || d.heights.size() + 1 != d.edges.size())
              throw ConfigError("table: need edges.size() == heights.size() + 1");
            double mass = 0.0;
            table_cdf_.assign(1, 0.0);
            for (std::size_t i = 0; i < d.heights.size(); ++i) {
              if (!(d.edges[i + 1] > d.edges[i]))
                throw ConfigError("table: edges must be strictly increasing");
              if (d.heights[i] < 0) throw ConfigError("table: negative height");
              mass += d.heights[i] * (d.edges[i + 1] - d.edges[i]);
              table_cdf_.push_back(mass);
            }
            if (!(mass > 0)) throw ConfigError("table: zero total mass");
            for (auto& c : table_cdf_) c /= mass;
          },
      },
      law_);
  if (auto* t = std::get_if<TableDensity>(&law_)) {
    double mass = 0.0;
    for (std::size_t i = 0; i < t->heights.size(); ++i)
      mass += t->heights[i] * (t->edges[i + 1] - t->edges[i]);
    for (auto& h : t->heights) h /= mass;
  }
}

std::string Density::name() const {
  return std::visit(overloaded{
                        [](const UniformDensity&) { return "uniform"; },
                        [](const TruncatedCauchyDensity&) { return "cauchy"; },
                        [](const PointMassDensity&) { return "point"; },
                        [](const TableDensity&) { return "table"; },
                    },
                    law_);
}

double Density::quantile(double u) const {
  return std::visit(
      overloaded{
          [&](const UniformDensity& d) { return d.low + (d.high - d.low) * u; },
          [&](const TruncatedCauchyDensity& d) {
            double a = std::atan(d.cutoff / d.scale);
            return d.scale * std::tan((2.0 * u - 1.0) * a);
          },
          [&](const PointMassDensity& d) { return d.at; },
          [&](const TableDensity& d) {
            auto it = std::upper_bound(table_cdf_.begin(), table_cdf_.end(), u);
            std::size_t i = std::min<std::size_t>(
                std::max<std::ptrdiff_t>(it - table_cdf_.begin() - 1, 0),
                d.heights.size() - 1);
            double lo = table_cdf_[i], hi = table_cdf_[i + 1];
            double t = hi > lo ? (u - lo) / (hi - lo) : 0.5;
            return d.edges[i] + t * (d.edges[i + 1] - d.edges[i]);
          },
      },
      law_);
}

double Density::pdf(double x) const {
  return std::visit(
      overloaded{
          [&](const UniformDensity& d) {
            return (x >= d.low && x <= d.high) ? 1.0 / (d.high - d.low) : 0.0;
          },
          [&](const TruncatedCauchyDensity& d) {
            if (std::abs(x) > d.cutoff) return 0.0;
            double z = 2.0 / std::numbers::pi * std::atan(d.cutoff / d.scale);
            return d.scale / (std::numbers::pi * (x * x + d.scale * d.scale)) / z;
          },
          [&](const PointMassDensity& d) {
            return x == d.at ? std::numeric_limits<double>::infinity() : 0.0;
          },
          [&](const TableDensity& d) {
            if (x < d.edges.front() || x >= d.edges.back()) return 0.0;
            auto it = std::upper_bound(d.edges.begin(), d.edges.end(), x);
            return d.heights[static_cast<std::size_t>(it - d.edges.begin() - 1)];
          },
      },
      law_);
}

double Density::sup() const {
  return std::visit(
      overloaded{
          [](const UniformDensity& d) { return 1.0 / (d.high - d.low); },
          [](const TruncatedCauchyDensity& d) {
            double z = 2.0 / std::numbers::pi * std::atan(d.cutoff / d.scale);
            return 1.0 / (std::numbers::pi * d.scale * z);
          },
          [](const PointMassDensity&) {
            return std::numeric_limits<double>::infinity();
          },
          [](const TableDensity& d) {
            return *std::max_element(d.heights.begin(), d.heights.end());
          },
      },
      law_);
}

double Density::tail_constant() const {
  return std::visit(
      overloaded{
          [](const UniformDensity& d) {
            return std::max(std::abs(d.low), std::abs(d.high));
          },
          // P(|V| >= T) = (atan(L/s) - atan(T/s)) / atan(L/s) <= (s/T) / atan(L/s)
          [](const TruncatedCauchyDensity& d) {
            return d.scale / std::atan(d.cutoff / d.scale);
          },
          [](const PointMassDensity& d) { return std::abs(d.at); },
          [](const TableDensity& d) {
            return std::max(std::abs(d.edges.front()), std::abs(d.edges.back()));
          },
      },
      law_);
}

double Density::infimum(double a, double b) const {
  if (a > b) std::swap(a, b);
  return std::visit(
      overloaded{
          [&](const UniformDensity& d) {
            return (a >= d.low && b <= d.high) ? 1.0 / (d.high - d.low) : 0.0;
          },
          [&](const TruncatedCauchyDensity&) {
            double far = std::max(std::abs(a), std::abs(b));
            return std::min(pdf(a), pdf(b)) > 0 ? pdf(far) : 0.0;
          },
          [&](const PointMassDensity&) { return 0.0; },
          [&](const TableDensity& d) {
            if (a < d.edges.front() || b >= d.edges.back()) return 0.0;
            double m = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < d.heights.size(); ++i)
              if (d.edges[i + 1] > a && d.edges[i] <= b) m = std::min(m, d.heights[i]);
            return m;
          },
      },
      law_);
}

// CouplingLaw

double CouplingLaw::norm_bound(int width, int bandwidth) const {
  switch (kind) {
    case Kind::Zero:
      return 0.0;
    case Kind::Adjacency:
      return width > 1 ? 2.0 * std::abs(coupling) : 0.0;
    case Kind::RandomBand:
      return (2.0 * std::min(bandwidth, width - 1) + 1.0) * std::abs(amplitude);
  }
  return 0.0;
}

std::string CouplingLaw::name() const {
  switch (kind) {
    case Kind::Zero:
      return "zero";
    case Kind::Adjacency:
      return "adjacency";
    case Kind::RandomBand:
      return "random_band";
  }
  return "zero";
}

// DisorderSpec

void DisorderSpec::validate(int width, int bandwidth) {
  double exact_d0 = density.sup();
  double exact_d1 =
      std::max(density.tail_constant(), coupling.norm_bound(width, bandwidth));
  if (d0 == 0.0) d0 = exact_d0;
  if (d1 == 0.0) d1 = exact_d1;
  if (d0 < exact_d0 * (1.0 - 1e-12))
    throw ConfigError("declared D0 is below sup of the density");
  if (d1 < exact_d1 * (1.0 - 1e-12))
    throw ConfigError("declared D1 is below the tail constant of the law");
  if (coupling.kind == CouplingLaw::Kind::RandomBand && !(coupling.amplitude >= 0))
    throw ConfigError("random_band: amplitude must be non-negative");
}

nlohmann::json DisorderSpec::to_json() const {
  nlohmann::json params;
  std::visit(overloaded{
                 [&](const UniformDensity& d) {
                   params = {{"low", d.low}, {"high", d.high}};
                 },
                 [&](const TruncatedCauchyDensity& d) {
                   params = {{"scale", d.scale}, {"cutoff", d.cutoff}};
                 },
                 [&](const PointMassDensity& d) { params = {{"at", d.at}}; },
                 [&](const TableDensity& d) {
                   params = {{"edges", d.edges}, {"heights", d.heights}};
                 },
             },
             density.law());
  nlohmann::json u = {{"kind", coupling.name()}};
  if (coupling.kind == CouplingLaw::Kind::Adjacency) u["coupling"] = coupling.coupling;
  if (coupling.kind == CouplingLaw::Kind::RandomBand)
    u["amplitude"] = coupling.amplitude;
  nlohmann::json j = {{"density", density.name()}, {"params", params}, {"u_law", u}};
  j["D0"] = std::isfinite(d0) ? nlohmann::json(d0) : nlohmann::json(nullptr);
  j["D1"] = d1;
  return j;
}

DisorderSpec DisorderSpec::from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) throw ConfigError("disorder spec must be a JSON object");
    DisorderSpec spec;
    const std::string kind = j.at("density").get<std::string>();
    const nlohmann::json params = j.value("params", nlohmann::json::object());
    if (kind == "uniform") {
      spec.density = Density(UniformDensity{params.value("low", -1.0),
                                            params.value("high", 1.0)});
    } else if (kind == "cauchy" || kind == "truncated_cauchy") {
      spec.density = Density(TruncatedCauchyDensity{params.value("scale", 1.0),
                                                    params.value("cutoff", 1.0e3)});
    } else if (kind == "point" || kind == "point_mass") {
      spec.density = Density(PointMassDensity{params.value("at", 0.0)});
    } else if (kind == "table") {
      spec.density = Density(
          TableDensity{params.at("edges").get<std::vector<double>>(),
                       params.at("heights").get<std::vector<double>>()});
    } else {
      throw ConfigError("unsupported density descriptor: " + kind);
    }
    const nlohmann::json u = j.value("u_law", nlohmann::json{{"kind", "adjacency"}});
    const std::string ukind =
        u.is_string() ? u.get<std::string>() : u.at("kind").get<std::string>();
    if (ukind == "zero") {
      spec.coupling.kind = CouplingLaw::Kind::Zero;
    } else if (ukind == "adjacency") {
      spec.coupling.kind = CouplingLaw::Kind::Adjacency;
      if (u.is_object()) spec.coupling.coupling = u.value("coupling", 1.0);
    } else if (ukind == "random_band") {
      spec.coupling.kind = CouplingLaw::Kind::RandomBand;
      if (u.is_object()) spec.coupling.amplitude = u.value("amplitude", 1.0);
    } else {
      throw ConfigError("unsupported u_law: " + ukind);
    }
    if (j.contains("D0") && !j["D0"].is_null()) spec.d0 = j["D0"].get<double>();
    if (j.contains("D1") && !j["D1"].is_null()) spec.d1 = j["D1"].get<double>();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("disorder spec: ") + e.what());
  }
}

// DisorderStream

DisorderStream::DisorderStream(int width, int bandwidth, DisorderSpec spec,
                               std::uint64_t seed)
    : width_(width), bandwidth_(bandwidth), spec_(std::move(spec)), seed_(seed) {
  StripGeometry{width, bandwidth, 1}.validate();
}

double DisorderStream::potential(long n, int w) const {
  CounterRng rng(derive_seed(seed_, static_cast<std::uint64_t>(n),
                             static_cast<std::uint64_t>(w)));
  return spec_.density.quantile(rng.uniform());
}

Eigen::MatrixXd DisorderStream::coupling(long n) const {
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(width_, width_);
  switch (spec_.coupling.kind) {
    case CouplingLaw::Kind::Zero:
      break;
    case CouplingLaw::Kind::Adjacency:
      for (int x = 0; x + 1 < width_; ++x)
        u(x, x + 1) = u(x + 1, x) = spec_.coupling.coupling;
      break;
    case CouplingLaw::Kind::RandomBand: {
      CounterRng rng(derive_seed(seed_, static_cast<std::uint64_t>(n), kCouplingStream));
      const double a = spec_.coupling.amplitude;
      for (int x = 0; x < width_; ++x)
        for (int y = x; y < width_ && y - x <= bandwidth_; ++y)
          u(x, y) = u(y, x) = rng.uniform(-a, a);
      break;
    }
  }
  return u;
}

Eigen::MatrixXd DisorderStream::s_matrix(long n) const {
  Eigen::MatrixXd s = -coupling(n);
  for (int w = 1; w <= width_; ++w) s(w - 1, w - 1) += potential(n, w);
  return s;
}

// DisorderSample

DisorderSample::DisorderSample(StripGeometry g, std::vector<double> potentials,
                               std::vector<Eigen::MatrixXd> couplings)
    : geometry_(g), v_(std::move(potentials)), u_(std::move(couplings)) {
  g.validate();
  if (v_.size() != static_cast<std::size_t>(g.sites()) ||
      u_.size() != static_cast<std::size_t>(g.columns))
    throw ConfigError("sample arrays do not match geometry");
  for (const auto& u : u_) {
    if (u.rows() != g.width || u.cols() != g.width)
      throw ConfigError("coupling block has wrong shape");
    for (int x = 0; x < g.width; ++x)
      for (int y = 0; y < g.width; ++y) {
        if (u(x, y) != u(y, x)) throw ConfigError("coupling block not symmetric");
        if (std::abs(x - y) > g.bandwidth && u(x, y) != 0.0)
          throw ConfigError("coupling block exceeds bandwidth");
      }
  }
}

double DisorderSample::potential(int n, int w) const {
  if (n < 1 || n > geometry_.columns || w < 1 || w > geometry_.width)
    throw RangeError("site outside sampled extent");
  return v_[static_cast<std::size_t>(n - 1) * geometry_.width + (w - 1)];
}

const Eigen::MatrixXd& DisorderSample::coupling(int n) const {
  if (n < 1 || n > geometry_.columns) throw RangeError("column outside sampled extent");
  return u_[static_cast<std::size_t>(n - 1)];
}

DisorderSample DisorderSample::with_potential(const Site& s, double value) const {
  DisorderSample copy = *this;
  (void)potential(s);
  copy.v_[static_cast<std::size_t>(s.n - 1) * geometry_.width + (s.w - 1)] = value;
  return copy;
}

DisorderSample sample_disorder(const StripGeometry& g, const DisorderSpec& spec,
                               std::uint64_t seed) {
  g.validate();
  DisorderStream stream(g.width, g.bandwidth, spec, seed);
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(g.sites()));
  std::vector<Eigen::MatrixXd> u;
  u.reserve(static_cast<std::size_t>(g.columns));
  for (int n = 1; n <= g.columns; ++n) {
    for (int w = 1; w <= g.width; ++w) v.push_back(stream.potential(n, w));
    u.push_back(stream.coupling(n));
  }
  return DisorderSample(g, std::move(v), std::move(u));
}

Eigen::MatrixXd s_matrix(const DisorderSample& sample, int n) {
  Eigen::MatrixXd s = -sample.coupling(n);
  for (int w = 1; w <= sample.geometry().width; ++w)
    s(w - 1, w - 1) += sample.potential(n, w);
  return s;
}

// Hamiltonian

int HamiltonianMatrix::row_of(const Site& s) const {
  auto it = std::lower_bound(sites.begin(), sites.end(), s);
  if (it == sites.end() || *it != s) return -1;
  return static_cast<int>(it - sites.begin());
}

HamiltonianMatrix assemble_hamiltonian(const DisorderSample& sample,
                                       const Region& region) {
  const StripGeometry& g = sample.geometry();
  if (!region.fits(g)) throw RangeError("region exceeds sampled extent");
  HamiltonianMatrix h;
  h.sites = region.sites();
  const int size = static_cast<int>(h.sites.size());
  h.matrix = Eigen::MatrixXd::Zero(size, size);

  std::vector<int> row(static_cast<std::size_t>(g.sites()), -1);
  auto linear = [&](int n, int w) {
    return static_cast<std::size_t>(n - 1) * g.width + (w - 1);
  };
  for (int i = 0; i < size; ++i) row[linear(h.sites[i].n, h.sites[i].w)] = i;

  for (int i = 0; i < size; ++i) {
    const Site k = h.sites[i];
    const Eigen::MatrixXd& u = sample.coupling(k.n);
    h.matrix(i, i) = sample.potential(k) - u(k.w - 1, k.w - 1);
    if (k.n < g.columns) {
      int j = row[linear(k.n + 1, k.w)];
      if (j >= 0) h.matrix(i, j) = h.matrix(j, i) = -1.0;
    }
    for (int w = k.w + 1; w <= std::min(g.width, k.w + g.bandwidth); ++w) {
      int j = row[linear(k.n, w)];
      if (j >= 0) h.matrix(i, j) = h.matrix(j, i) = -u(k.w - 1, w - 1);
    }
  }
  return h;
}

std::vector<Site> boundary(const Region& region, const Region& subregion,
                           const StripGeometry& g) {
  if (!region.contains(subregion))
    throw ConfigError("subregion is not contained in region");
  std::vector<Site> out;
  for (const Site& i : region.sites()) {
    if (subregion.contains(i)) continue;
    bool touches = false;
    auto probe = [&](int n, int w) {
      if (n >= 1 && n <= g.columns && w >= 1 && w <= g.width &&
          subregion.contains(Site{n, w}))
        touches = true;
    };
    probe(i.n - 1, i.w);
    probe(i.n + 1, i.w);
    for (int dw = 1; dw <= g.bandwidth && !touches; ++dw) {
      probe(i.n, i.w - dw);
      probe(i.n, i.w + dw);
    }
    if (touches) out.push_back(i);
  }
  return out;
}

std::string potentials_csv(const DisorderSample& sample) {
  std::string out = "n,w,V\n";
  const auto& g = sample.geometry();
  for (int n = 1; n <= g.columns; ++n)
    for (int w = 1; w <= g.width; ++w)
      out += std::to_string(n) + "," + std::to_string(w) + "," +
             fmt_double(sample.potential(n, w)) + "\n";
  return out;
}

std::string coupling_blocks_csv(const DisorderSample& sample) {
  std::string out;
  const auto& g = sample.geometry();
  for (int n = 1; n <= g.columns; ++n) {
    out += "# n=" + std::to_string(n) + "\n";
    const auto& u = sample.coupling(n);
    for (int x = 0; x < g.width; ++x) {
      for (int y = 0; y < g.width; ++y) {
        if (y) out += ",";
        out += fmt_double(u(x, y));
      }
      out += "\n";
    }
  }
  return out;
}

}  // namespace stripdet
