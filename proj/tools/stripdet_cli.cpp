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

// Command-line front end. Talks to the library only through the C API.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "stripdet/stripdet.h"

namespace {

using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string out;
  std::optional<int> width, bandwidth, columns;
  std::optional<double> energy;
  std::optional<int> n_samples;
  bool plot = false;
};

void add_common(CLI::App* app, Common& c, bool geometry) {
  app->add_option("--config", c.config, "JSON run config");
  app->add_option("--seed", c.seed, "master seed");
  app->add_option("--workers", c.workers, "worker threads (0: all cores)");
  app->add_option("--out", c.out, "output directory");
  if (geometry) {
    app->add_option("-W,--width", c.width, "strip width W");
    app->add_option("-d,--bandwidth", c.bandwidth, "coupling band d");
    app->add_option("-N,--columns", c.columns, "columns N");
    app->add_option("-E,--energy", c.energy, "energy E");
  }
}

int status_exit(stripdet_status s) {
  switch (s) {
    case STRIPDET_OK: return kExitOk;
    case STRIPDET_ERR_CONFIG: return kExitConfig;
    case STRIPDET_ERR_INVARIANT: return kExitInvariant;
    default: return kExitRuntime;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::string default_out(const std::string& leaf) {
  const char* env = std::getenv("STRIPDET_OUT");
  const std::string root = env && *env ? env : "stripdet-out";
  return root + "/" + leaf;
}

/// Config file (or {}) with the command-line flags laid over it.
json build_config(const Common& c, const std::string& command, const std::string& kind) {
  json j = json::object();
  if (!c.config.empty()) {
    j = json::parse(read_file(c.config));
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  }
  j["command"] = command;
  if (!kind.empty()) j["kind"] = kind;
  if (c.seed) j["seed"] = *c.seed;
  if (c.workers) j["workers"] = *c.workers;
  if (c.energy) j["E"] = *c.energy;
  if (c.n_samples) j["n_samples"] = *c.n_samples;
  if (c.plot) j["plot"] = true;
  if (c.width || c.bandwidth || c.columns) {
    json& g = j["geometry"];
    if (!g.is_object()) g = json::object();
    if (c.width) g["W"] = *c.width;
    if (c.bandwidth) g["d"] = *c.bandwidth;
    if (c.columns) g["N"] = *c.columns;
  }
  return j;
}

int run(const json& config, const std::string& out) {
  const std::string text = config.dump();
  stripdet_status s = stripdet_validate_config(text.c_str());
  if (s != STRIPDET_OK) {
    std::cerr << "config error: " << stripdet_last_error() << "\n";
    return status_exit(s);
  }
  char* manifest = nullptr;
  s = stripdet_run(text.c_str(), out.c_str(), &manifest);
  if (s != STRIPDET_OK && s != STRIPDET_ERR_INVARIANT) {
    std::cerr << "error: " << stripdet_last_error() << "\n";
    stripdet_string_free(manifest);
    return status_exit(s);
  }
  stripdet_string_free(manifest);
  try {
    std::cout << read_file(out + "/summary.json");
  } catch (const std::exception&) {
  }
  std::cerr << "outputs: " << out << "\n";
  if (s == STRIPDET_ERR_INVARIANT) std::cerr << "invariant check failed\n";
  return status_exit(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stripdet: Dirichlet determinants and Lyapunov spectra of the Anderson model on a strip"};
  app.set_version_flag("--version", std::string(stripdet_version()));
  app.require_subcommand(1);

  Common c;
  std::string kind, route = "all", plot_kind = "tail", csv;
  std::optional<long> steps;
  std::optional<int> trials;
  double overlay_rate = 0.0;

  auto* sample = app.add_subcommand("sample", "draw one disorder realization");
  add_common(sample, c, true);

  auto* lyap = app.add_subcommand("lyapunov", "Lyapunov spectrum of the transfer cocycle");
  add_common(lyap, c, true);
  lyap->add_option("--steps", steps, "cocycle length");
  lyap->add_flag("--plot", c.plot, "also write an SVG");

  auto* dets = app.add_subcommand("dets", "log|det(H_N - E)| by one or all routes");
  add_common(dets, c, true);
  dets->add_option("--route", route, "direct | transfer | schur | all")
      ->check(CLI::IsMember({"direct", "transfer", "schur", "all"}));

  auto* verify = app.add_subcommand("verify", "identity and inequality suites");
  add_common(verify, c, false);
  verify->add_option("suite", kind, "wedge | interlacing | determinants | all")->required();
  verify->add_option("--trials", trials, "interlacing trials");

  auto* exp = app.add_subcommand("experiment", "Monte Carlo experiments");
  add_common(exp, c, true);
  exp->add_option("kind", kind,
                  "variance | ldt | negtail | cartan | bernstein | convergence | pipeline")
      ->required();
  exp->add_option("-n,--n-samples", c.n_samples, "samples per estimate");
  exp->add_flag("--plot", c.plot, "also write SVG plots");

  auto* plot = app.add_subcommand("plot", "SVG and plot data from a CSV table");
  plot->add_option("csv", csv, "input table")->required();
  plot->add_option("--kind", plot_kind, "tail | fit | spectrum")
      ->check(CLI::IsMember({"tail", "fit", "spectrum"}));
  plot->add_option("--overlay-rate", overlay_rate, "tail overlay exp(-K / rate)");
  plot->add_option("--out", c.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (plot->parsed()) {
      const std::string out = c.out.empty() ? default_out("plot") : c.out;
      char* info = nullptr;
      stripdet_status s =
          stripdet_plot(csv.c_str(), plot_kind.c_str(), overlay_rate, out.c_str(), &info);
      if (s != STRIPDET_OK) {
        std::cerr << "error: " << stripdet_last_error() << "\n";
        return status_exit(s);
      }
      std::cout << info << "\n";
      stripdet_string_free(info);
      return kExitOk;
    }

    std::string command, leaf;
    json config;
    if (sample->parsed()) {
      command = "sample";
      config = build_config(c, command, "");
    } else if (lyap->parsed()) {
      command = "lyapunov";
      config = build_config(c, command, "");
      if (steps) config["steps"] = *steps;
    } else if (dets->parsed()) {
      command = "dets";
      config = build_config(c, command, "");
      if (dets->count("--route") || !config.contains("route")) config["route"] = route;
      kind = config["route"].is_string() ? config["route"].get<std::string>() : route;
    } else if (verify->parsed()) {
      command = "verify";
      config = build_config(c, command, kind);
      if (trials) config["trials"] = *trials;
    } else {
      command = "experiment";
      config = build_config(c, command, kind);
    }
    leaf = kind.empty() ? command : command + "-" + kind;
    return run(config, c.out.empty() ? default_out(leaf) : c.out);
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
