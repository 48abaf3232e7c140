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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pulsersim/congestion.hpp"
#include "pulsersim/port.hpp"
#include "pulsersim/topology.hpp"
#include "pulsersim/workload.hpp"

namespace psim {

/// Configuration problem. `line()` is the 1-based line in the config file,
/// or 0 for command-line overrides and cross-field checks.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, const std::string& what)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct FabricSettings {
  LeafSpineParams shape;
  Bytes buffer = 250'000;
  Bytes host_queue_limit = 15'000;  // NIC bytes above which senders wait
  std::optional<Bytes> ecn_k;            // default: 65 x mss at 10 Gb/s, scaled
  std::optional<Bytes> high_water_mark;  // default: 1.5 x K
  std::uint32_t ein_window = 50;
  double ein_threshold_fraction = 0.25;
};

struct TransportSettings {
  CcScheme cc = CcScheme::kPulser;
  CcParams params;
};

struct RunSettings {
  SimTime drain = milliseconds(20);
  double warmup_fraction = 0.05;
  std::vector<std::uint64_t> seeds{1};
  std::vector<std::string> sample_ports;
  std::vector<FlowId> sample_conns;
  SimTime sample_period = microseconds(10);
  std::string out_dir = "out";
  std::string flow_file;  // replay this schedule instead of generating one
};

/// Every knob of an experiment. Defaults reproduce the reference setup
/// (400 hosts, 20 leaves, 10 spines, 10 Gb/s, 10 us links, Pulser).
struct ExperimentConfig {
  FabricSettings fabric;
  WorkloadConfig workload;  // workload.duration is `run.duration`
  TransportSettings transport;
  RunSettings run;

  /// The per-switch-port configuration with derived defaults filled in.
  PortConfig port_config() const;
};

/// Reads flat `section.key = value` lines; `#` starts a comment. Unknown keys,
/// malformed lines and out-of-range values throw ConfigError with the line.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(std::string_view text);

/// Applies one `section.key=value` override (also accepts `key = value`).
void apply_override(ExperimentConfig& cfg, std::string_view assignment);
void set_value(ExperimentConfig& cfg, std::string_view key, std::string_view value,
               std::size_t line = 0);

/// Cross-field checks (K < high-water mark, workload vs topology...).
void validate(const ExperimentConfig& cfg);

/// All accepted keys, in documentation order.
std::vector<std::string_view> config_keys();

/// Parses "1..5" or "1,2,7".
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

}  // namespace psim
