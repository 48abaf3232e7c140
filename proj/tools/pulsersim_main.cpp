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


// Command-line front end. Talks to the simulator only through the C API.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pulsersim/pulsersim.h"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

int exit_code(psim_status s) {
  switch (s) {
    case PSIM_OK:
      return 0;
    case PSIM_ERR_CONFIG:
    case PSIM_ERR_ARGUMENT:
      return kExitConfig;
    case PSIM_ERR_RUNTIME:
    case PSIM_ERR_IO:
      return kExitRuntime;
  }
  return kExitRuntime;
}

int report(psim_status s) {
  if (s != PSIM_OK) std::fprintf(stderr, "pulsersim: %s\n", psim_last_error());
  return exit_code(s);
}

struct ConfigHandle {
  psim_config* ptr = nullptr;
  ~ConfigHandle() { psim_config_destroy(ptr); }
};

// Loads the file (or the defaults) and applies each `key=value` override.
psim_status build_config(const std::string& path, const std::vector<std::string>& overrides,
                         ConfigHandle& out) {
  psim_status s = path.empty() ? psim_config_create(&out.ptr)
                               : psim_config_load(path.c_str(), &out.ptr);
  if (s != PSIM_OK) return s;
  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "pulsersim: --set %s: expected key=value\n", kv.c_str());
      return PSIM_ERR_CONFIG;
    }
    s = psim_config_set(out.ptr, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    if (s != PSIM_OK) return s;
  }
  return PSIM_OK;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pulsersim: packet-level leaf-spine simulator (DCTCP and Pulser)"};
  app.set_version_flag("--version", std::string(psim_version()));
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;

  auto* simulate = app.add_subcommand("simulate", "Run one simulation (first seed of run.seeds)");
  simulate->add_option("--config", config_path, "Config file (defaults when omitted)");
  simulate->add_option("--set", overrides, "Override a config key: section.key=value");
  simulate->add_option("--out", out_dir, "Output directory for the per-run CSVs")->required();

  std::string schemes;
  std::string loads;
  std::string seeds = "1";
  auto* sweep = app.add_subcommand("sweep", "Run every scheme x load x seed combination");
  sweep->add_option("--config", config_path, "Config file (defaults when omitted)");
  sweep->add_option("--set", overrides, "Override a config key: section.key=value");
  sweep->add_option("--schemes", schemes, "Comma list, e.g. dctcp,pulser")->required();
  sweep->add_option("--loads", loads, "Comma list, e.g. 0.2,0.4")->required();
  sweep->add_option("--seeds", seeds, "Range 1..5 or list 1,2,7")->capture_default_str();
  sweep->add_option("--out", out_dir, "Output directory")->required();

  std::uint64_t seed = 1;
  auto* flows = app.add_subcommand("flows", "Write the generated flow schedule as CSV");
  flows->add_option("--config", config_path, "Config file (defaults when omitted)");
  flows->add_option("--set", overrides, "Override a config key: section.key=value");
  flows->add_option("--seed", seed, "Workload seed")->capture_default_str();
  flows->add_option("--out", out_dir, "Output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  ConfigHandle cfg;
  if (const psim_status s = build_config(config_path, overrides, cfg); s != PSIM_OK) {
    return report(s);
  }

  if (*simulate) {
    psim_summary sum{};
    const psim_status s = psim_simulate(cfg.ptr, out_dir.c_str(), &sum);
    if (s == PSIM_OK) {
      std::printf("median_fct_ns=%lld p99_fct_ns=%lld mean_long_tput_bps=%.6g drops=%llu "
                  "ein_marks=%llu ce_marks=%llu\n",
                  static_cast<long long>(sum.median_fct_ns),
                  static_cast<long long>(sum.p99_fct_ns), sum.mean_long_tput_bps,
                  static_cast<unsigned long long>(sum.drops),
                  static_cast<unsigned long long>(sum.ein_marks),
                  static_cast<unsigned long long>(sum.ce_marks));
    }
    return report(s);
  }
  if (*sweep) {
    return report(psim_sweep(cfg.ptr, schemes.c_str(), loads.c_str(), seeds.c_str(),
                             out_dir.c_str()));
  }
  return report(psim_export_flows(cfg.ptr, seed, out_dir.c_str()));
}
