// Copyright 2026 The pulsersim Authors
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


#include "pulsersim/pulsersim.h"

#include <charconv>
#include <exception>
#include <filesystem>
#include <new>
#include <string>
#include <system_error>

#include "pulsersim/config.hpp"
#include "pulsersim/experiment.hpp"

struct psim_config {
  psim::ExperimentConfig cfg;
};

namespace {

thread_local std::string g_last_error;

psim_status set_error(psim_status status, std::string msg) {
  g_last_error = std::move(msg);
  return status;
}

// Maps the exception in flight to a status code.
psim_status translate() {
  try {
    throw;
  } catch (const psim::ConfigError& e) {
    return set_error(PSIM_ERR_CONFIG, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return set_error(PSIM_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(PSIM_ERR_RUNTIME, "out of memory");
  } catch (const std::exception& e) {
    const std::string what = e.what();
    if (what.rfind("cannot ", 0) == 0) return set_error(PSIM_ERR_IO, what);
    return set_error(PSIM_ERR_RUNTIME, what);
  } catch (...) {
    return set_error(PSIM_ERR_RUNTIME, "unknown failure");
  }
}

std::vector<std::string_view> split(std::string_view text) {
  std::vector<std::string_view> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view item = text.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

extern "C" {

const char* psim_last_error(void) { return g_last_error.c_str(); }

const char* psim_version(void) { return "0.1.0"; }

psim_status psim_config_create(psim_config** out) {
  if (!out) return set_error(PSIM_ERR_ARGUMENT, "out is null");
  try {
    *out = new psim_config{};
    return PSIM_OK;
  } catch (...) {
    return translate();
  }
}

psim_status psim_config_load(const char* path, psim_config** out) {
  if (!path || !out) return set_error(PSIM_ERR_ARGUMENT, "path or out is null");
  try {
    auto* h = new psim_config{};
    try {
      h->cfg = psim::load_config(path);
    } catch (...) {
      delete h;
      throw;
    }
    *out = h;
    return PSIM_OK;
  } catch (const psim::ConfigError& e) {
    // A missing file surfaces as a config error with line 0.
    const std::string what = e.what();
    return set_error(what.rfind("cannot open", 0) == 0 ? PSIM_ERR_IO : PSIM_ERR_CONFIG, what);
  } catch (...) {
    return translate();
  }
}

void psim_config_destroy(psim_config* cfg) { delete cfg; }

psim_status psim_config_set(psim_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return set_error(PSIM_ERR_ARGUMENT, "null argument");
  try {
    psim::set_value(cfg->cfg, key, value);
    return PSIM_OK;
  } catch (...) {
    return translate();
  }
}

psim_status psim_config_validate(const psim_config* cfg) {
  if (!cfg) return set_error(PSIM_ERR_ARGUMENT, "config is null");
  try {
    psim::validate(cfg->cfg);
    return PSIM_OK;
  } catch (...) {
    return translate();
  }
}

psim_status psim_simulate(const psim_config* cfg, const char* out_dir, psim_summary* summary) {
  if (!cfg) return set_error(PSIM_ERR_ARGUMENT, "config is null");
  try {
    psim::validate(cfg->cfg);
    const std::filesystem::path dir = out_dir ? out_dir : "";
    const psim::RunResult r = psim::run_experiment(cfg->cfg, cfg->cfg.run.seeds.front(), dir);
    if (summary) {
      summary->median_fct_ns = r.row.median_fct_ns;
      summary->p99_fct_ns = r.row.p99_fct_ns;
      summary->mean_long_tput_bps = r.row.mean_long_tput_bps;
      summary->drops = r.row.drops;
      summary->ein_marks = r.row.ein_marks;
      summary->ce_marks = r.row.ce_marks;
    }
    return PSIM_OK;
  } catch (...) {
    return translate();
  }
}

psim_status psim_sweep(const psim_config* cfg, const char* schemes, const char* loads,
                       const char* seeds, const char* out_dir) {
  if (!cfg || !schemes || !loads || !seeds || !out_dir) {
    return set_error(PSIM_ERR_ARGUMENT, "null argument");
  }
  psim::SweepSpec spec;
  for (std::string_view s : split(schemes)) {
    const auto scheme = psim::parse_cc_scheme(s);
    if (!scheme) {
      return set_error(PSIM_ERR_ARGUMENT,
                       "unknown scheme '" + std::string(s) + "' (valid: dctcp, pulser)");
    }
    spec.schemes.push_back(*scheme);
  }
  for (std::string_view l : split(loads)) {
    double v = 0;
    const auto [ptr, ec] = std::from_chars(l.data(), l.data() + l.size(), v);
    if (ec != std::errc{} || ptr != l.data() + l.size()) {
      return set_error(PSIM_ERR_ARGUMENT, "bad load '" + std::string(l) + "'");
    }
    if (!(v > 0.0 && v < 1.0)) {
      return set_error(PSIM_ERR_ARGUMENT, "load " + std::string(l) + " must lie in (0, 1)");
    }
    spec.loads.push_back(v);
  }
  if (spec.schemes.empty() || spec.loads.empty()) {
    return set_error(PSIM_ERR_ARGUMENT, "schemes and loads must not be empty");
  }
  try {
    spec.seeds = psim::parse_seed_list(seeds);
  } catch (const std::invalid_argument& e) {
    return set_error(PSIM_ERR_ARGUMENT, e.what());
  }
  try {
    psim::validate(cfg->cfg);
  } catch (...) {
    return translate();
  }
  try {
    psim::run_sweep(cfg->cfg, spec, out_dir);
    return PSIM_OK;
  } catch (const psim::SweepError& e) {
    // Config errors depending on the swept load still name the triple.
    return set_error(PSIM_ERR_RUNTIME, e.what());
  } catch (...) {
    return translate();
  }
}

psim_status psim_export_flows(const psim_config* cfg, uint64_t seed, const char* path) {
  if (!cfg || !path) return set_error(PSIM_ERR_ARGUMENT, "null argument");
  try {
    psim::validate(cfg->cfg);
    psim::export_flows(cfg->cfg, seed, path);
    return PSIM_OK;
  } catch (...) {
    return translate();
  }
}

}  // extern "C"
