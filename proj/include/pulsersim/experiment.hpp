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
#include <stdexcept>
#include <string>
#include <vector>

#include "pulsersim/config.hpp"
#include "pulsersim/metrics.hpp"
#include "pulsersim/simulation.hpp"

namespace psim {

/// A simulation failed inside a sweep; the message names the triple.
class SweepError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flows for one seed: generated from the workload block, or read from
/// run.flow_file when set.
std::vector<FlowSpec> make_flows(const ExperimentConfig& cfg, std::uint64_t seed);

/// Resolves a validated config into simulator inputs. The run ends at
/// duration + drain; warm-up covers the first warmup_fraction of duration.
SimSetup make_setup(const ExperimentConfig& cfg, std::uint64_t seed);

struct RunResult {
  MetricsLog log;
  SummaryRow row;
};

/// One simulation. When `out_dir` is non-empty, writes fct.csv,
/// throughput.csv, qlen.csv, cwnd.csv and a one-row summary.csv there.
RunResult run_experiment(const ExperimentConfig& cfg, std::uint64_t seed,
                         const std::filesystem::path& out_dir);

struct SweepSpec {
  std::vector<CcScheme> schemes;
  std::vector<double> loads;
  std::vector<std::uint64_t> seeds;
};

/// Directory name of one run inside a sweep, e.g. `pulser-load0.6-seed3`.
std::string run_dir_name(CcScheme scheme, double load, std::uint64_t seed);

/// Runs every (scheme, load, seed) triple in order, each into its own
/// directory under `out_dir`, then writes `out_dir/summary.csv` with the
/// median across seeds. Returns the aggregated rows.
std::vector<SummaryRow> run_sweep(const ExperimentConfig& cfg, const SweepSpec& spec,
                                  const std::filesystem::path& out_dir);

/// Writes the flow schedule for one seed as CSV.
void export_flows(const ExperimentConfig& cfg, std::uint64_t seed,
                  const std::filesystem::path& path);

}  // namespace psim
