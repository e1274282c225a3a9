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

#include "stripdet/experiments.hpp"

#include <openssl/evp.h>

#include <cctype>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "stripdet/determinants.hpp"
#include "stripdet/error.hpp"
#include "stripdet/logpotential.hpp"
#include "stripdet/plot.hpp"
#include "stripdet/rng.hpp"
#include "stripdet/statistics.hpp"
#include "stripdet/table.hpp"
#include "stripdet/transfer.hpp"
#include "stripdet/verify.hpp"

#ifndef STRIPDET_VERSION_STRING
#define STRIPDET_VERSION_STRING "0.0.0"
#endif

namespace stripdet {

namespace {

using json = nlohmann::json;

const std::set<std::string> kCommonKeys = {"command", "kind",      "disorder",   "spec",
                                           "geometry", "E",        "n_samples",  "seed",
                                           "workers",  "tolerances", "plot"};

const std::map<std::string, std::set<std::string>> kCommandKeys = {
    {"sample", {}},
    {"lyapunov", {"steps", "segments", "replicas", "bootstrap"}},
    {"dets", {"route"}},
    {"verify",
     {"trials", "route_configs", "identity_samples", "sf_samples", "partition_samples",
      "frame_gap_samples"}},
};

const std::map<std::string, std::set<std::string>> kExperimentKeys = {
    {"variance", {"shapes", "interval"}},
    {"ldt", {"rectangles", "epsilon", "ks"}},
    {"negtail", {"ks", "joint_spectrum"}},
    {"cartan", {"ks"}},
    {"bernstein", {"rectangle", "cell", "delta0", "xs", "delta_terms"}},
    {"convergence", {"columns", "lyapunov_steps", "n2_values", "multiscale_samples"}},
    {"pipeline", {"epsilon", "lyapunov_steps", "regime_constant"}},
};

const std::set<std::string> kToleranceKeys = {"route_factor", "decomposition"};

const std::set<std::string> kSuites = {"wedge", "interlacing", "determinants", "all"};
const std::set<std::string> kRoutes = {"direct", "transfer", "schur", "all"};

long long as_integer(const json& v, const std::string& name) {
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9e15)
      return static_cast<long long>(d);
  }
  throw ConfigError(name + " must be an integer");
}

int as_int(const json& v, const std::string& name, long long lo, long long hi) {
  const long long x = as_integer(v, name);
  if (x < lo || x > hi)
    throw ConfigError(name + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                      "]");
  return static_cast<int>(x);
}

double as_double(const json& v, const std::string& name) {
  if (!v.is_number()) throw ConfigError(name + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(name + " must be finite");
  return d;
}

double positive(const json& v, const std::string& name) {
  const double d = as_double(v, name);
  if (!(d > 0)) throw ConfigError(name + " must be positive");
  return d;
}

std::vector<double> number_list(const json& v, const std::string& name) {
  if (!v.is_array() || v.empty()) throw ConfigError(name + " must be a nonempty array");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(as_double(x, name + " entry"));
  return out;
}

std::vector<int> int_list(const json& v, const std::string& name, int lo, int hi) {
  if (!v.is_array() || v.empty()) throw ConfigError(name + " must be a nonempty array");
  std::vector<int> out;
  for (const auto& x : v) out.push_back(as_int(x, name + " entry", lo, hi));
  return out;
}

std::vector<double> default_grid(double step, double last) {
  std::vector<double> out;
  for (int i = 1; i * step <= last + 1e-12; ++i) out.push_back(i * step);
  return out;
}

/// [N, W] or {"N": .., "W": ..} -> rectangle [1, N] x [1, W].
Region parse_rectangle(const json& v, const std::string& name) {
  int n = 0, w = 0;
  if (v.is_array() && v.size() == 2) {
    n = as_int(v[0], name + " N", 1, 1 << 20);
    w = as_int(v[1], name + " W", 1, 64);
  } else if (v.is_object()) {
    for (const auto& [k, _] : v.items())
      if (k != "N" && k != "W") throw ConfigError(name + ": unknown key " + k);
    n = as_int(v.at("N"), name + " N", 1, 1 << 20);
    w = as_int(v.at("W"), name + " W", 1, 64);
  } else {
    throw ConfigError(name + " must be [N, W] or {\"N\", \"W\"}");
  }
  return Region::rectangle(1, n, 1, w);
}

std::vector<Region> parse_rectangles(const json& v, const std::string& name) {
  if (!v.is_array() || v.empty()) throw ConfigError(name + " must be a nonempty array");
  std::vector<Region> out;
  for (const auto& r : v) out.push_back(parse_rectangle(r, name));
  return out;
}

/// Label made safe for a file name.
std::string file_stem(std::string label) {
  for (char& ch : label)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '.') ch = '_';
  return label;
}

std::string shape_label(const Region& r) {
  return std::to_string(r.last_column() - r.first_column() + 1) + "x" +
         std::to_string(r.highest_row() - r.lowest_row() + 1);
}

const json& param(const RunConfig& c, const std::string& key) {
  static const json kNull;
  auto it = c.params.find(key);
  return it == c.params.end() ? kNull : *it;
}

template <class T, class F>
T param_or(const RunConfig& c, const std::string& key, T fallback, F&& parse) {
  const json& v = param(c, key);
  return v.is_null() ? fallback : parse(v, key);
}

double tolerance(const RunConfig& c, const std::string& key, double fallback) {
  auto it = c.tolerances.find(key);
  return it == c.tolerances.end() ? fallback : positive(*it, "tolerances." + key);
}

bool needs_columns(const RunConfig& c) {
  if (c.command == "sample" || c.command == "dets") return true;
  return c.command == "experiment" &&
         (c.kind == "negtail" || c.kind == "cartan" || c.kind == "pipeline");
}

// Typed parameter sets, built once for validation and again when running.

LyapunovOptions lyapunov_options(const RunConfig& c, long* steps) {
  LyapunovOptions o;
  *steps = param_or<long>(c, "steps", 100000L, [](const json& v, const std::string& k) {
    return static_cast<long>(as_integer(v, k));
  });
  if (*steps < 1) throw ConfigError("steps must be >= 1");
  o.segments = param_or(c, "segments", o.segments,
                        [](const json& v, const std::string& k) { return as_int(v, k, 2, 1 << 16); });
  o.replicas = param_or(c, "replicas", o.replicas,
                        [](const json& v, const std::string& k) { return as_int(v, k, 1, 1 << 16); });
  o.bootstrap_resamples =
      param_or(c, "bootstrap", o.bootstrap_resamples,
               [](const json& v, const std::string& k) { return as_int(v, k, 10, 1 << 20); });
  return o;
}

VerifyOptions verify_options(const RunConfig& c) {
  VerifyOptions o;
  o.seed = c.seed;
  o.workers = c.workers;
  auto count = [](const json& v, const std::string& k) { return as_int(v, k, 1, 100000000); };
  o.interlacing_trials = param_or(c, "trials", o.interlacing_trials, count);
  o.route_configs = param_or(c, "route_configs", o.route_configs, count);
  o.identity_samples = param_or(c, "identity_samples", o.identity_samples, count);
  o.sf_samples = param_or(c, "sf_samples", o.sf_samples, count);
  o.partition_samples = param_or(c, "partition_samples", o.partition_samples, count);
  o.frame_gap_samples = param_or(c, "frame_gap_samples", o.frame_gap_samples, count);
  return o;
}

std::vector<double> ks_of(const RunConfig& c, const char* key, double step, double last) {
  return param_or(c, key, default_grid(step, last), number_list);
}

double epsilon_of(const RunConfig& c) {
  return param_or(c, "epsilon", 0.25, positive);
}

PipelineOptions pipeline_options(const RunConfig& c) {
  PipelineOptions o;
  o.lyapunov_steps =
      param_or<long>(c, "lyapunov_steps", o.lyapunov_steps, [](const json& v, const std::string& k) {
        const long long s = as_integer(v, k);
        if (s < 64) throw ConfigError(k + " must be >= 64");
        return static_cast<long>(s);
      });
  o.regime_constant = param_or(c, "regime_constant", o.regime_constant, positive);
  return o;
}

IntervalSpec interval_of(const RunConfig& c) {
  IntervalSpec iv{-1.0, 1.0, 16};
  const json& v = param(c, "interval");
  if (v.is_null()) return iv;
  if (v.is_array() && v.size() == 2) {
    iv.m0 = as_double(v[0], "interval m0");
    iv.m1 = as_double(v[1], "interval m1");
  } else if (v.is_object()) {
    for (const auto& [k, _] : v.items())
      if (k != "m0" && k != "m1" && k != "nodes") throw ConfigError("interval: unknown key " + k);
    iv.m0 = as_double(v.at("m0"), "interval m0");
    iv.m1 = as_double(v.at("m1"), "interval m1");
    if (v.contains("nodes")) iv.nodes = as_int(v["nodes"], "interval nodes", 2, 128);
  } else {
    throw ConfigError("interval must be [m0, m1] or {m0, m1, nodes}");
  }
  iv.validate();
  return iv;
}

/// Parses every parameter the command uses; throws ConfigError on the first
/// problem. Also checks disorder/geometry compatibility.
void validate_params(const RunConfig& c) {
  if (c.command == "lyapunov") {
    long steps = 0;
    lyapunov_options(c, &steps);
  } else if (c.command == "dets") {
  } else if (c.command == "verify") {
    verify_options(c);
  } else if (c.command == "experiment") {
    if (c.kind == "variance") {
      param_or(c, "shapes", std::vector<Region>{}, parse_rectangles);
      interval_of(c);
    } else if (c.kind == "ldt") {
      param_or(c, "rectangles", std::vector<Region>{}, parse_rectangles);
      epsilon_of(c);
      ks_of(c, "ks", 0.5, 16);
    } else if (c.kind == "negtail" || c.kind == "cartan") {
      ks_of(c, "ks", 0.5, 16);
      if (c.kind == "negtail" && !param(c, "joint_spectrum").is_null() &&
          !param(c, "joint_spectrum").is_boolean())
        throw ConfigError("joint_spectrum must be a boolean");
    } else if (c.kind == "bernstein") {
      const Region rect = param_or(c, "rectangle", Region::rectangle(1, 32, 1, 2), parse_rectangle);
      const int cell = param_or(c, "cell", 2, [](const json& v, const std::string& k) {
        return as_int(v, k, 1, 1 << 20);
      });
      if (cell > rect.last_column()) throw ConfigError("cell exceeds the rectangle");
      param_or(c, "delta0", 0.5, positive);
      ks_of(c, "xs", 0.5, 20);
      param_or(c, "delta_terms", 100,
               [](const json& v, const std::string& k) { return as_int(v, k, 0, 1000); });
    } else if (c.kind == "convergence") {
      param_or(c, "columns", std::vector<int>{}, [](const json& v, const std::string& k) {
        return int_list(v, k, 1, 1 << 20);
      });
      param_or(c, "n2_values", std::vector<int>{}, [](const json& v, const std::string& k) {
        return int_list(v, k, 2, 1 << 10);
      });
      param_or(c, "multiscale_samples", 2, [](const json& v, const std::string& k) {
        return as_int(v, k, 2, 100000000);
      });
      pipeline_options(c);
    } else if (c.kind == "pipeline") {
      epsilon_of(c);
      pipeline_options(c);
    }
  }
}

std::string iso_time(std::chrono::system_clock::time_point t) {
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void add_tail_plot(RunResult& r, const RunConfig& c, const std::string& stem, const Table& t,
                   const std::string& title) {
  if (!c.plot) return;
  PlotOutput p = plot_export(t, PlotKind::Tail, title);
  r.files.push_back({stem + ".svg", p.svg});
  r.files.push_back({stem + ".plot.csv", p.data_csv});
}

json tail_json(const TailTable& t) {
  const double onset = t.onset();
  return {{"label", t.label},
          {"n", t.n},
          {"onset_K", std::isnan(onset) ? json(nullptr) : json(onset)},
          {"non_increasing", t.non_increasing()}};
}

// Commands

RunResult run_sample(const RunConfig& c) {
  const DisorderSample s = sample_disorder(c.geometry, c.disorder, c.seed);
  RunResult r;
  r.files.push_back({"potentials.csv", potentials_csv(s)});
  r.files.push_back({"couplings.csv", coupling_blocks_csv(s)});
  r.summary = {{"W", c.geometry.width},
               {"d", c.geometry.bandwidth},
               {"N", c.geometry.columns},
               {"seed", c.seed},
               {"disorder", c.disorder.to_json()}};
  r.files.push_back({"sample.json", dump(r.summary)});
  return r;
}

RunResult run_lyapunov(const RunConfig& c) {
  long steps = 0;
  const LyapunovOptions o = lyapunov_options(c, &steps);
  const LyapunovSpectrum sp = lyapunov_spectrum(c.disorder, c.geometry, c.energy, steps, c.seed, o);
  RunResult r;
  r.summary = sp.to_json();
  r.files.push_back({"lyapunov.json", dump(r.summary)});
  r.files.push_back({"lyapunov.csv", sp.to_csv()});
  if (c.plot) {
    PlotOutput p = plot_export_csv(sp.to_csv(), PlotKind::Spectrum);
    r.files.push_back({"lyapunov.svg", p.svg});
  }
  return r;
}

RunResult run_dets(const RunConfig& c) {
  const DisorderSample s = sample_disorder(c.geometry, c.disorder, c.seed);
  const RouteComparison cmp = compare_routes(s, c.energy, c.geometry.columns);
  const double factor = tolerance(c, "route_factor", 1.0);
  const bool agree = cmp.signs_equal && (cmp.gap <= factor * cmp.tolerance || cmp.direct.is_zero());
  auto entry = [&](const std::string& route, const SignedLogDet& d) {
    return json{{"route", route},
                {"sign", d.sign},
                {"log_abs", std::isfinite(d.log_abs) ? json(d.log_abs) : json(nullptr)},
                {"agreement_gap", cmp.gap}};
  };
  json out;
  if (c.kind == "all") {
    out = {{"route", "all"},
           {"routes",
            {entry("direct", cmp.direct), entry("transfer", cmp.transfer),
             entry("schur", cmp.schur.det)}},
           {"agreement_gap", cmp.gap}};
  } else {
    const SignedLogDet& d = c.kind == "direct"     ? cmp.direct
                            : c.kind == "transfer" ? cmp.transfer
                                                   : cmp.schur.det;
    out = entry(c.kind, d);
  }
  out["tolerance"] = factor * cmp.tolerance;
  out["rcond"] = cmp.rcond;
  out["agree"] = agree;
  out["schur_fallback"] = cmp.schur.fallback;
  RunResult r;
  r.summary = out;
  r.invariants_ok = agree;
  r.files.push_back({"dets.json", dump(out)});
  return r;
}

RunResult run_verify(const RunConfig& c) {
  const auto reports = run_suites(c.kind, verify_options(c));
  RunResult r;
  json suites = json::array();
  for (const auto& rep : reports) {
    r.files.push_back({"verify_" + rep.suite + ".json", dump(rep.to_json())});
    suites.push_back({{"suite", rep.suite}, {"passed", rep.passed()}});
    if (!rep.passed()) r.invariants_ok = false;
  }
  r.summary = {{"suites", suites}, {"passed", r.invariants_ok}};
  return r;
}

RunResult run_variance(const RunConfig& c) {
  const auto shapes = param_or(
      c, "shapes",
      std::vector<Region>{Region::rectangle(1, 8, 1, 2), Region::rectangle(1, 16, 1, 2),
                          Region::rectangle(1, 32, 1, 2), Region::rectangle(1, 64, 1, 2)},
      parse_rectangles);
  const VarianceGrowth v = variance_growth_experiment(c.disorder, c.geometry.bandwidth, shapes,
                                                      c.energy, interval_of(c), c.n_samples,
                                                      c.seed, c.workers);
  RunResult r;
  r.summary = v.to_json();
  r.files.push_back({"variance.csv", v.to_csv()});
  r.files.push_back({"variance.json", dump(r.summary)});
  if (c.plot) {
    PlotOutput p = plot_export_csv(v.to_csv(), PlotKind::Fit, "Var log|f| against |Lambda|");
    r.files.push_back({"variance.svg", p.svg});
    r.files.push_back({"variance.plot.csv", p.data_csv});
  }
  return r;
}

RunResult run_ldt(const RunConfig& c) {
  const auto rects = param_or(
      c, "rectangles",
      std::vector<Region>{Region::rectangle(1, 16, 1, 2), Region::rectangle(1, 32, 1, 2)},
      parse_rectangles);
  const LdtResult res = ldt_experiment(c.disorder, c.geometry.bandwidth, rects, c.energy,
                                       epsilon_of(c), ks_of(c, "ks", 0.5, 16), c.n_samples,
                                       c.seed, c.workers);
  RunResult r;
  json tables = json::array();
  for (std::size_t i = 0; i < res.tables.size(); ++i) {
    const std::string stem = "ldt_" + shape_label(rects[i]);
    const Table t = res.tables[i].to_table();
    r.files.push_back({stem + ".csv", t.to_csv()});
    add_tail_plot(r, c, stem, t, "large deviations " + shape_label(rects[i]));
    json tj = tail_json(res.tables[i]);
    tj["variance"] = res.variances[i];
    tj["scaled_variance"] = res.scaled_variances[i];
    tables.push_back(tj);
    if (!res.tables[i].non_increasing()) r.invariants_ok = false;
  }
  r.summary = {{"epsilon", epsilon_of(c)},
               {"tables", tables},
               {"variance_exponent", res.variance_exponent}};
  r.files.push_back({"ldt.json", dump(r.summary)});
  return r;
}

RunResult run_negtail(const RunConfig& c) {
  const bool joint = param_or(c, "joint_spectrum", false,
                              [](const json& v, const std::string&) { return v.get<bool>(); });
  const NegtailResult res =
      negtail_experiment(c.disorder, c.geometry.columns, c.geometry.width, c.geometry.bandwidth,
                         c.energy, ks_of(c, "ks", 0.5, 16), c.n_samples, c.seed, c.workers,
                         joint);
  RunResult r;
  const Table t = res.table.to_table();
  r.files.push_back({"negtail.csv", t.to_csv()});
  add_tail_plot(r, c, "negtail", t, "P(log|f_N| < -10 K W)");
  r.summary = tail_json(res.table);
  r.summary["naive_k2_count"] = res.naive_k2_count;
  r.summary["fraction_k2"] = res.fraction_k2;
  r.summary["bound_k2"] = res.bound_k2;
  r.summary["improvement_shown"] = res.fraction_k2 <= res.bound_k2 && res.naive_k2_count == 0;
  r.summary["small_distance_share"] =
      res.small_distance_share < 0 ? json(nullptr) : json(res.small_distance_share);
  r.summary["summary"] = res.summary.to_json();
  r.invariants_ok = res.table.non_increasing();
  r.files.push_back({"negtail.json", dump(r.summary)});
  return r;
}

RunResult run_cartan(const RunConfig& c) {
  const TailTable tt =
      cartan_a_tail(c.disorder, c.geometry, Region::strip(c.geometry), c.energy,
                    ks_of(c, "ks", 0.5, 16), c.n_samples, c.seed, c.workers);
  RunResult r;
  const Table t = tt.to_table();
  r.files.push_back({"cartan.csv", t.to_csv()});
  add_tail_plot(r, c, "cartan", t, "P(|log|f|| > |Lambda| K)");
  r.summary = tail_json(tt);
  r.invariants_ok = tt.non_increasing();
  r.files.push_back({"cartan.json", dump(r.summary)});
  return r;
}

RunResult run_bernstein(const RunConfig& c) {
  const Region rect = param_or(c, "rectangle", Region::rectangle(1, 32, 1, 2), parse_rectangle);
  const int cell = param_or(c, "cell", 2, [](const json& v, const std::string& k) {
    return as_int(v, k, 1, 1 << 20);
  });
  const double delta0 = param_or(c, "delta0", 0.5, positive);
  const int terms = param_or(c, "delta_terms", 100, [](const json& v, const std::string& k) {
    return as_int(v, k, 0, 1000);
  });
  const auto reports =
      bernstein_partition_experiment(c.disorder, c.geometry.bandwidth, rect, cell, c.energy,
                                     delta0, ks_of(c, "xs", 0.5, 20), c.n_samples, c.seed,
                                     c.workers);
  RunResult r;
  json families = json::array();
  for (const auto& rep : reports) {
    r.files.push_back({"bernstein_" + file_stem(rep.label) + ".csv", rep.to_table().to_csv()});
    families.push_back({{"label", rep.label},
                        {"sigma2", rep.constants.sigma2},
                        {"T", rep.constants.t},
                        {"summands", rep.summands},
                        {"realizations", rep.realizations},
                        {"holds", rep.holds()}});
  }
  Table delta({"n", "delta", "closed_form", "exact"});
  bool exact = true;
  const auto d = delta_schedule(terms);
  for (std::size_t n = 0; n < d.size(); ++n) {
    const Rational closed(1, 2 * static_cast<long long>(n) + 2);
    const bool eq = d[n] == closed;
    exact = exact && eq;
    auto str = [](const Rational& q) {
      return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
    };
    delta.add_row({std::to_string(n), str(d[n]), str(closed), eq ? "1" : "0"});
  }
  r.files.push_back({"delta.csv", delta.to_csv()});
  r.invariants_ok = exact;
  r.summary = {{"families", families}, {"delta_exact", exact}, {"delta_terms", terms},
               {"cell", cell}, {"rectangle", shape_label(rect)}};
  r.files.push_back({"bernstein.json", dump(r.summary)});
  return r;
}

bool decomposition_ok(const Decomposition& d, double tol) {
  return d.partition_error <= tol * std::max(1.0, std::abs(d.total));
}

RunResult run_convergence(const RunConfig& c) {
  const auto columns = param_or(c, "columns", std::vector<int>{16, 64, 256},
                                [](const json& v, const std::string& k) {
                                  return int_list(v, k, 1, 1 << 20);
                                });
  const ConvergenceResult res =
      convergence_experiment(c.disorder, c.energy, c.geometry.width, c.geometry.bandwidth,
                             columns, c.n_samples, c.seed, c.workers, pipeline_options(c));
  RunResult r;
  const Table t = res.to_table();
  r.files.push_back({"convergence.csv", t.to_csv()});
  const double tol = tolerance(c, "decomposition", 1e-9);
  json reports = json::array();
  for (const auto& rep : res.reports) {
    reports.push_back(rep.to_json());
    if (!decomposition_ok(rep.decomposition, tol)) r.invariants_ok = false;
  }
  r.summary = {{"reports", reports},
               {"C_min", res.c_min},
               {"C_max", res.c_max},
               {"C_spread", res.c_spread()}};
  const json& n2 = param(c, "n2_values");
  if (!n2.is_null()) {
    const int ms = param_or(c, "multiscale_samples", c.n_samples,
                            [](const json& v, const std::string& k) {
                              return as_int(v, k, 2, 100000000);
                            });
    const MultiscaleResult m =
        multiscale_compare(c.disorder, c.energy, c.geometry.width, c.geometry.bandwidth,
                           int_list(n2, "n2_values", 2, 1 << 10), ms,
                           derive_seed(c.seed, 0xA11), c.workers);
    r.files.push_back({"multiscale.csv", m.to_table().to_csv()});
    r.summary["multiscale_C_max"] = m.c_max;
  }
  if (c.plot) {
    PlotOutput p = plot_export(t, PlotKind::Fit, "gamma-sum gap against N");
    r.files.push_back({"convergence.svg", p.svg});
    r.files.push_back({"convergence.plot.csv", p.data_csv});
  }
  r.files.push_back({"convergence.json", dump(r.summary)});
  return r;
}

RunResult run_pipeline(const RunConfig& c) {
  const PipelineReport rep =
      lyapunov_sum_pipeline(c.disorder, c.energy, c.geometry.width, c.geometry.bandwidth,
                            c.geometry.columns, epsilon_of(c), c.n_samples, c.seed, c.workers,
                            pipeline_options(c));
  RunResult r;
  r.summary = rep.to_json();
  r.invariants_ok = decomposition_ok(rep.decomposition, tolerance(c, "decomposition", 1e-9));
  r.files.push_back({"pipeline.json", dump(r.summary)});
  return r;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream os(p, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  os << content;
  if (!os) throw std::runtime_error("write failed: " + p.string());
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  c.raw = j;
  if (!j.contains("command") || !j["command"].is_string())
    throw ConfigError("config needs a string \"command\"");
  c.command = j["command"].get<std::string>();
  const bool experiment = c.command == "experiment";
  if (!experiment && !kCommandKeys.count(c.command))
    throw ConfigError("unknown command: " + c.command);

  if (j.contains("kind")) {
    if (!j["kind"].is_string()) throw ConfigError("kind must be a string");
    c.kind = j["kind"].get<std::string>();
  }
  const std::set<std::string>* extra = nullptr;
  if (experiment) {
    auto it = kExperimentKeys.find(c.kind);
    if (it == kExperimentKeys.end()) throw ConfigError("unknown experiment kind: " + c.kind);
    extra = &it->second;
  } else {
    extra = &kCommandKeys.at(c.command);
    if (c.command == "verify") {
      if (!kSuites.count(c.kind)) throw ConfigError("unknown verify suite: " + c.kind);
    } else if (c.command == "dets") {
      if (c.kind.empty()) c.kind = "all";
      if (j.contains("route")) {
        if (!j["route"].is_string()) throw ConfigError("route must be a string");
        c.kind = j["route"].get<std::string>();
      }
      if (!kRoutes.count(c.kind)) throw ConfigError("unknown route: " + c.kind);
    } else if (!c.kind.empty() && c.kind != c.command) {
      throw ConfigError("command " + c.command + " takes no kind");
    }
  }

  for (const auto& [k, v] : j.items()) {
    if (kCommonKeys.count(k)) continue;
    if (!extra->count(k)) throw ConfigError("unknown config key: " + k);
    if (k != "route") c.params[k] = v;
  }
  if (j.contains("disorder") && j.contains("spec"))
    throw ConfigError("give either disorder or spec, not both");

  if (j.contains("geometry")) {
    const json& g = j["geometry"];
    if (!g.is_object()) throw ConfigError("geometry must be an object {W, d, N}");
    for (const auto& [k, _] : g.items())
      if (k != "W" && k != "d" && k != "N") throw ConfigError("geometry: unknown key " + k);
    if (g.contains("W")) c.geometry.width = as_int(g["W"], "geometry.W", -(1 << 20), 1 << 20);
    if (g.contains("d")) c.geometry.bandwidth = as_int(g["d"], "geometry.d", -(1 << 20), 1 << 20);
    if (g.contains("N")) c.geometry.columns = as_int(g["N"], "geometry.N", -(1 << 30), 1 << 30);
    if (needs_columns(c) && !g.contains("N")) throw ConfigError("geometry.N is required");
  } else if (needs_columns(c)) {
    throw ConfigError("geometry {W, d, N} is required");
  }
  c.geometry.validate();

  const json disorder =
      j.contains("disorder") ? j["disorder"]
      : j.contains("spec")   ? j["spec"]
                             : json{{"density", "uniform"}, {"params", {{"low", -2.0}, {"high", 2.0}}}};
  c.disorder = DisorderSpec::from_json(disorder);
  c.disorder.validate(c.geometry.width, c.geometry.bandwidth);

  if (j.contains("E")) c.energy = as_double(j["E"], "E");
  if (j.contains("n_samples")) c.n_samples = as_int(j["n_samples"], "n_samples", 2, 100000000);
  if (j.contains("seed")) {
    const json& s = j["seed"];
    if (s.is_number_unsigned()) {
      c.seed = s.get<std::uint64_t>();
    } else {
      const long long v = as_integer(s, "seed");
      if (v < 0) throw ConfigError("seed must be non-negative");
      c.seed = static_cast<std::uint64_t>(v);
    }
  }
  if (j.contains("workers")) c.workers = as_int(j["workers"], "workers", 0, 4096);
  if (j.contains("plot")) {
    if (!j["plot"].is_boolean()) throw ConfigError("plot must be a boolean");
    c.plot = j["plot"].get<bool>();
  }
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    if (!t.is_object()) throw ConfigError("tolerances must be an object");
    for (const auto& [k, v] : t.items()) {
      if (!kToleranceKeys.count(k)) throw ConfigError("unknown tolerance: " + k);
      positive(v, "tolerances." + k);
    }
    c.tolerances = t;
  }
  validate_params(c);
  return c;
}

RunConfig RunConfig::from_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return from_json(j);
}

RunResult execute(const RunConfig& c) {
  try {
    if (c.command == "sample") return run_sample(c);
    if (c.command == "lyapunov") return run_lyapunov(c);
    if (c.command == "dets") return run_dets(c);
    if (c.command == "verify") return run_verify(c);
    if (c.kind == "variance") return run_variance(c);
    if (c.kind == "ldt") return run_ldt(c);
    if (c.kind == "negtail") return run_negtail(c);
    if (c.kind == "cartan") return run_cartan(c);
    if (c.kind == "bernstein") return run_bernstein(c);
    if (c.kind == "convergence") return run_convergence(c);
    if (c.kind == "pipeline") return run_pipeline(c);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  throw ConfigError("nothing to run for command " + c.command);
}

RunManifest dispatch(const RunConfig& config, const std::filesystem::path& out_dir) {
  const auto started = std::chrono::system_clock::now();
  const auto t0 = std::chrono::steady_clock::now();
  RunResult result = execute(config);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto finished = std::chrono::system_clock::now();

  result.files.push_back({"config.json", dump(config.raw)});
  result.files.push_back({"summary.json", dump(result.summary)});
  std::filesystem::create_directories(out_dir);
  json outputs = json::array();
  for (const auto& f : result.files) {
    write_file(out_dir / f.name, f.content);
    outputs.push_back({{"file", f.name}, {"sha256", sha256_hex(f.content)}, {"bytes", f.content.size()}});
  }
  RunManifest m;
  m.invariants_ok = result.invariants_ok;
  m.document = {{"version", artifact_version()},
                {"config_hash", config_hash(config.raw)},
                {"command", config.command},
                {"kind", config.kind},
                {"started", iso_time(started)},
                {"finished", iso_time(finished)},
                {"wall_seconds", wall},
                {"invariants_ok", result.invariants_ok},
                {"outputs", outputs},
                {"config", config.raw}};
  if (config.command == "verify") m.document["suites"] = result.summary["suites"];
  write_file(out_dir / "manifest.json", dump(m.document));
  return m;
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  static const char* kHex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 15];
  }
  return out;
}

std::string config_hash(const json& config) { return sha256_hex(config.dump()); }

std::string artifact_version() { return STRIPDET_VERSION_STRING; }

}  // namespace stripdet
