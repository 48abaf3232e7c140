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

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "pulsersim/topology.hpp"
#include "pulsersim/types.hpp"

namespace psim {

/// Seedable generator with a fixed, documented output stream: the standard
/// mt19937_64 engine plus the explicit transforms below (the <random>
/// distributions are implementation-defined, so none are used).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [lo, hi] (inclusive), rejection-sampled.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);
  /// Exponential variate with the given rate (events per unit).
  double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

 private:
  std::mt19937_64 engine_;
};

enum class FlowClass : std::uint8_t { kShort, kLong, kIncast };

std::string_view to_string(FlowClass c);
std::optional<FlowClass> parse_flow_class(std::string_view name);

struct FlowSpec {
  FlowId flow_id = 0;
  NodeId src = 0;
  NodeId dst = 0;
  Bytes size = 0;
  SimTime start_time = 0;
  FlowClass cls = FlowClass::kShort;

  friend bool operator==(const FlowSpec&, const FlowSpec&) = default;
};

struct WorkloadConfig {
  double target_load = 0.6;
  Bytes short_size_min = 8'000;
  Bytes short_size_max = 32'000;
  Bytes long_size = 1'000'000;
  double long_load_fraction = 0.30;
  std::uint32_t incast_degree = 24;
  Bytes incast_response_size = 100'000;
  SimTime incast_interval = milliseconds(10);
  SimTime incast_jitter = microseconds(10);
  SimTime duration = milliseconds(50);
  std::uint64_t seed = 1;
};

/// Offered byte rates (bytes/s) implied by a configuration on a topology.
/// Incast bytes are carved out of the target load budget; long flows carry
/// long_load_fraction of the total.
struct LoadBudget {
  double total = 0;
  double incast = 0;
  double long_flows = 0;
  double short_flows = 0;
};

LoadBudget load_budget(const WorkloadConfig& cfg, const Topology& topo);

/// Throws std::invalid_argument when the configuration is out of range.
void validate(const WorkloadConfig& cfg, const Topology& topo);

/// Poisson arrivals of short and long flows over [0, duration), sorted by
/// start time. Flow ids are assigned in order starting at `first_id`.
std::vector<FlowSpec> generate_background(const WorkloadConfig& cfg, const Topology& topo,
                                          FlowId first_id = 0);

/// One group per burst epoch: incast_degree distinct responders, each
/// sending incast_response_size bytes to one aggregator.
std::vector<std::vector<FlowSpec>> generate_incast(const WorkloadConfig& cfg,
                                                   const Topology& topo,
                                                   FlowId first_id = 0);

/// Background plus incast merged by start time; flow ids renumbered densely
/// in that order.
std::vector<FlowSpec> generate_workload(const WorkloadConfig& cfg, const Topology& topo);

/// CSV with header `flow_id,src,dst,size,start_ns,class`.
void write_flows_csv(std::ostream& os, const std::vector<FlowSpec>& flows);
/// Throws std::runtime_error naming the offending line.
std::vector<FlowSpec> read_flows_csv(std::istream& is);

}  // namespace psim
