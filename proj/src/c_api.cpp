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

#include "stripdet/stripdet.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "stripdet/determinants.hpp"
#include "stripdet/error.hpp"
#include "stripdet/experiments.hpp"
#include "stripdet/model.hpp"
#include "stripdet/plot.hpp"
#include "stripdet/transfer.hpp"

namespace {

constexpr std::uint32_t kSpecMagic = 0x53504543;    // "SPEC"
constexpr std::uint32_t kSampleMagic = 0x53414d50;  // "SAMP"

thread_local std::string last_error;

stripdet_status fail(stripdet_status code, const std::string& what) {
  last_error = what;
  return code;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class Fn>
stripdet_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    return fn();
  } catch (const stripdet::ConfigError& e) {
    return fail(STRIPDET_ERR_CONFIG, e.what());
  } catch (const stripdet::SingularityError& e) {
    return fail(STRIPDET_ERR_SINGULAR, e.what());
  } catch (const stripdet::NumericError& e) {
    return fail(STRIPDET_ERR_NUMERIC, e.what());
  } catch (const stripdet::RangeError& e) {
    return fail(STRIPDET_ERR_RANGE, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(STRIPDET_ERR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(STRIPDET_ERR_RUNTIME, e.what());
  } catch (...) {
    return fail(STRIPDET_ERR_RUNTIME, "unknown error");
  }
}

}  // namespace

struct stripdet_spec {
  std::uint32_t magic = kSpecMagic;
  stripdet::DisorderSpec spec;
};

struct stripdet_sample {
  std::uint32_t magic = kSampleMagic;
  stripdet::DisorderSample sample;
};

namespace {

bool valid(const stripdet_spec* s) { return s && s->magic == kSpecMagic; }
bool valid(const stripdet_sample* s) { return s && s->magic == kSampleMagic; }

stripdet_status bad_handle() { return fail(STRIPDET_ERR_INVALID_HANDLE, "invalid handle"); }
stripdet_status null_output() { return fail(STRIPDET_ERR_CONFIG, "null output pointer"); }

}  // namespace

extern "C" {

const char* stripdet_version(void) {
  static const std::string v = stripdet::artifact_version();
  return v.c_str();
}

const char* stripdet_last_error(void) { return last_error.c_str(); }

void stripdet_string_free(char* s) { std::free(s); }

stripdet_status stripdet_spec_from_json(const char* json, int width, int bandwidth,
                                        stripdet_spec** out) {
  if (!json || !out) return null_output();
  return guarded([&] {
    stripdet::StripGeometry{width, bandwidth, 1}.validate();
    auto spec = stripdet::DisorderSpec::from_json(nlohmann::json::parse(json));
    spec.validate(width, bandwidth);
    *out = new stripdet_spec{kSpecMagic, std::move(spec)};
    return STRIPDET_OK;
  });
}

stripdet_status stripdet_spec_to_json(const stripdet_spec* spec, char** out) {
  if (!valid(spec)) return bad_handle();
  if (!out) return null_output();
  return guarded([&] {
    *out = copy_string(spec->spec.to_json().dump());
    return STRIPDET_OK;
  });
}

void stripdet_spec_free(stripdet_spec* spec) {
  if (valid(spec)) {
    spec->magic = 0;
    delete spec;
  }
}

stripdet_status stripdet_sample_draw(const stripdet_spec* spec, int width, int bandwidth,
                                     int columns, uint64_t seed, stripdet_sample** out) {
  if (!valid(spec)) return bad_handle();
  if (!out) return null_output();
  return guarded([&] {
    const stripdet::StripGeometry g{width, bandwidth, columns};
    g.validate();
    stripdet::DisorderSpec s = spec->spec;
    s.validate(width, bandwidth);
    *out = new stripdet_sample{kSampleMagic, stripdet::sample_disorder(g, s, seed)};
    return STRIPDET_OK;
  });
}

void stripdet_sample_free(stripdet_sample* sample) {
  if (valid(sample)) {
    sample->magic = 0;
    delete sample;
  }
}

stripdet_status stripdet_sample_dims(const stripdet_sample* sample, int* width, int* bandwidth,
                                     int* columns) {
  if (!valid(sample)) return bad_handle();
  const auto& g = sample->sample.geometry();
  if (width) *width = g.width;
  if (bandwidth) *bandwidth = g.bandwidth;
  if (columns) *columns = g.columns;
  return STRIPDET_OK;
}

stripdet_status stripdet_sample_potential(const stripdet_sample* sample, int n, int w,
                                          double* out) {
  if (!valid(sample)) return bad_handle();
  if (!out) return null_output();
  return guarded([&] {
    *out = sample->sample.potential(n, w);
    return STRIPDET_OK;
  });
}

stripdet_status stripdet_logdet(const stripdet_sample* sample, double energy, int columns,
                                stripdet_route route, int* sign, double* log_abs) {
  if (!valid(sample)) return bad_handle();
  if (!sign || !log_abs) return null_output();
  return guarded([&] {
    const auto& s = sample->sample;
    const int w = s.geometry().width;
    if (columns < 1 || columns > s.geometry().columns)
      throw stripdet::RangeError("columns outside the sampled extent");
    stripdet::SignedLogDet d;
    switch (route) {
      case STRIPDET_ROUTE_DIRECT:
        d = stripdet::logdet_direct(
            stripdet::assemble_hamiltonian(s, stripdet::Region::rectangle(1, columns, 1, w)),
            energy);
        break;
      case STRIPDET_ROUTE_TRANSFER:
        d = stripdet::logdet_via_transfer(s, energy, columns);
        break;
      case STRIPDET_ROUTE_SCHUR:
        d = stripdet::logdet_via_schur(s, energy, columns).det;
        break;
      default:
        throw stripdet::ConfigError("unknown route");
    }
    *sign = d.sign;
    *log_abs = d.log_abs;
    return STRIPDET_OK;
  });
}

stripdet_status stripdet_compare_routes(const stripdet_sample* sample, double energy,
                                        int columns, char** json) {
  if (!valid(sample)) return bad_handle();
  if (!json) return null_output();
  return guarded([&] {
    if (columns < 1 || columns > sample->sample.geometry().columns)
      throw stripdet::RangeError("columns outside the sampled extent");
    const auto c = stripdet::compare_routes(sample->sample, energy, columns);
    auto entry = [](const stripdet::SignedLogDet& d) {
      return nlohmann::json{{"sign", d.sign},
                            {"log_abs", std::isfinite(d.log_abs) ? nlohmann::json(d.log_abs)
                                                                 : nlohmann::json(nullptr)}};
    };
    nlohmann::json j = {{"direct", entry(c.direct)},   {"transfer", entry(c.transfer)},
                        {"schur", entry(c.schur.det)}, {"schur_fallback", c.schur.fallback},
                        {"rcond", c.rcond},            {"gap", c.gap},
                        {"tolerance", c.tolerance},    {"signs_equal", c.signs_equal},
                        {"agree", c.agree}};
    *json = copy_string(j.dump());
    return STRIPDET_OK;
  });
}

stripdet_status stripdet_lyapunov(const stripdet_spec* spec, int width, int bandwidth,
                                  double energy, long steps, uint64_t seed, char** json) {
  if (!valid(spec)) return bad_handle();
  if (!json) return null_output();
  return guarded([&] {
    const stripdet::StripGeometry g{width, bandwidth, 1};
    g.validate();
    stripdet::DisorderSpec s = spec->spec;
    s.validate(width, bandwidth);
    *json = copy_string(stripdet::lyapunov_spectrum(s, g, energy, steps, seed).to_json().dump());
    return STRIPDET_OK;
  });
}

stripdet_status stripdet_validate_config(const char* config_json) {
  if (!config_json) return null_output();
  return guarded([&] {
    stripdet::RunConfig::from_text(config_json);
    return STRIPDET_OK;
  });
}

stripdet_status stripdet_run(const char* config_json, const char* out_dir, char** manifest) {
  if (!config_json || !out_dir) return null_output();
  return guarded([&] {
    const auto config = stripdet::RunConfig::from_text(config_json);
    const auto m = stripdet::dispatch(config, out_dir);
    if (manifest) *manifest = copy_string(m.document.dump(2));
    if (!m.invariants_ok) return fail(STRIPDET_ERR_INVARIANT, "invariant check failed");
    return STRIPDET_OK;
  });
}

stripdet_status stripdet_plot(const char* csv_path, const char* kind, double tail_rate,
                              const char* out_dir, char** info) {
  if (!csv_path || !kind || !out_dir) return null_output();
  return guarded([&] {
    const std::filesystem::path in(csv_path);
    std::ifstream is(in, std::ios::binary);
    if (!is) throw stripdet::ConfigError("cannot read table " + in.string());
    std::ostringstream text;
    text << is.rdbuf();
    const auto plot = stripdet::plot_export_csv(
        text.str(), stripdet::parse_plot_kind(kind), in.stem().string(),
        tail_rate > 0 ? std::optional<double>(tail_rate) : std::nullopt);
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    const auto svg = dir / (in.stem().string() + ".svg");
    const auto data = dir / (in.stem().string() + ".plot.csv");
    std::ofstream(svg, std::ios::binary) << plot.svg;
    std::ofstream(data, std::ios::binary) << plot.data_csv;
    if (info)
      *info = copy_string(nlohmann::json{{"svg", svg.string()},
                                         {"data", data.string()},
                                         {"overlay", plot.overlay}}
                              .dump());
    return STRIPDET_OK;
  });
}

}  // extern "C"
