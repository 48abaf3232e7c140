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

#include "pulsersim/workload.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace psim {
namespace {

// Independent streams for background and incast so that changing one part
// of the workload leaves the other untouched.
constexpr std::uint64_t kBackgroundStream = 0x6261636b67726e64ULL;
constexpr std::uint64_t kIncastStream = 0x696e636173742121ULL;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t x = seed ^ stream;
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double mean_short_size(const WorkloadConfig& cfg) {
  return 0.5 * static_cast<double>(cfg.short_size_min + cfg.short_size_max);
}

}  // namespace

std::uint64_t Rng::uniform_int(std::uint64_t lo, std::uint64_t hi) {
  if (hi <= lo) return lo;
  const std::uint64_t span = hi - lo;
  if (span == UINT64_MAX) return engine_();
  const std::uint64_t range = span + 1;
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % range);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return lo + x % range;
}

std::string_view to_string(FlowClass c) {
  switch (c) {
    case FlowClass::kShort:
      return "short";
    case FlowClass::kLong:
      return "long";
    case FlowClass::kIncast:
      return "incast";
  }
  return "?";
}

std::optional<FlowClass> parse_flow_class(std::string_view name) {
  if (name == "short") return FlowClass::kShort;
  if (name == "long") return FlowClass::kLong;
  if (name == "incast") return FlowClass::kIncast;
  return std::nullopt;
}

LoadBudget load_budget(const WorkloadConfig& cfg, const Topology& topo) {
  LoadBudget b;
  const double edge_bytes_per_s = static_cast<double>(topo.host_count()) *
                                  static_cast<double>(topo.params().line_rate) / 8.0;
  b.total = cfg.target_load * edge_bytes_per_s;
  if (cfg.incast_interval > 0) {
    b.incast = static_cast<double>(cfg.incast_degree) *
               static_cast<double>(cfg.incast_response_size) /
               (static_cast<double>(cfg.incast_interval) / kNanosPerSecond);
  }
  b.long_flows = cfg.long_load_fraction * b.total;
  b.short_flows = std::max(0.0, b.total - b.long_flows - b.incast);
  return b;
}

void validate(const WorkloadConfig& cfg, const Topology& topo) {
  if (!(cfg.target_load > 0.0 && cfg.target_load < 1.0)) {
    throw std::invalid_argument("target_load must lie strictly between 0 and 1");
  }
  if (cfg.short_size_min <= 0 || cfg.short_size_max < cfg.short_size_min) {
    throw std::invalid_argument("short flow size range is empty");
  }
  if (cfg.long_size <= 0) throw std::invalid_argument("long flow size must be positive");
  if (!(cfg.long_load_fraction >= 0.0 && cfg.long_load_fraction <= 1.0)) {
    throw std::invalid_argument("long_load_fraction must lie in [0, 1]");
  }
  if (cfg.duration <= 0) throw std::invalid_argument("duration must be positive");
  if (topo.host_count() < 2) throw std::invalid_argument("workload needs at least two hosts");
  if (cfg.incast_interval < 0) throw std::invalid_argument("incast_interval must be >= 0");
  if (cfg.incast_interval > 0) {
    if (cfg.incast_degree < 2) throw std::invalid_argument("incast_degree must be at least 2");
    if (cfg.incast_degree > topo.host_count() - 1) {
      throw std::invalid_argument("incast_degree " + std::to_string(cfg.incast_degree) +
                                  " exceeds the " + std::to_string(topo.host_count() - 1) +
                                  " hosts available as responders");
    }
    if (cfg.incast_response_size <= 0) {
      throw std::invalid_argument("incast_response_size must be positive");
    }
    if (cfg.incast_jitter < 0) throw std::invalid_argument("incast_jitter must be >= 0");
    const LoadBudget b = load_budget(cfg, topo);
    if (b.incast + b.long_flows > b.total) {
      throw std::invalid_argument("incast and long flows exceed the target load budget");
    }
  }
}

std::vector<FlowSpec> generate_background(const WorkloadConfig& cfg, const Topology& topo,
                                          FlowId first_id) {
  validate(cfg, topo);
  const LoadBudget b = load_budget(cfg, topo);
  // Arrival rates in flows per nanosecond.
  const double long_rate =
      b.long_flows / static_cast<double>(cfg.long_size) / kNanosPerSecond;
  const double short_rate = b.short_flows / mean_short_size(cfg) / kNanosPerSecond;
  const double total_rate = long_rate + short_rate;

  std::vector<FlowSpec> flows;
  if (total_rate <= 0.0) return flows;
  const double p_long = long_rate / total_rate;
  const std::uint64_t hosts = topo.host_count();

  Rng rng(mix_seed(cfg.seed, kBackgroundStream));
  double t = 0.0;
  FlowId id = first_id;
  while (true) {
    t += rng.exponential(total_rate);
    if (t >= static_cast<double>(cfg.duration)) break;
    FlowSpec f;
    f.flow_id = id++;
    f.start_time = static_cast<SimTime>(t);
    if (rng.uniform01() < p_long) {
      f.cls = FlowClass::kLong;
      f.size = cfg.long_size;
    } else {
      f.cls = FlowClass::kShort;
      f.size = static_cast<Bytes>(rng.uniform_int(static_cast<std::uint64_t>(cfg.short_size_min),
                                                  static_cast<std::uint64_t>(cfg.short_size_max)));
    }
    f.src = static_cast<NodeId>(rng.uniform_int(0, hosts - 1));
    auto dst = static_cast<NodeId>(rng.uniform_int(0, hosts - 2));
    if (dst >= f.src) ++dst;
    f.dst = dst;
    flows.push_back(f);
  }
  return flows;
}

std::vector<std::vector<FlowSpec>> generate_incast(const WorkloadConfig& cfg,
                                                   const Topology& topo, FlowId first_id) {
  validate(cfg, topo);
  std::vector<std::vector<FlowSpec>> bursts;
  if (cfg.incast_interval <= 0) return bursts;

  const std::uint32_t hosts = topo.host_count();
  Rng rng(mix_seed(cfg.seed, kIncastStream));
  std::vector<NodeId> pool(hosts - 1);
  FlowId id = first_id;
  // Epochs sit half an interval off the grid so the first one is not at t=0.
  for (SimTime epoch = cfg.incast_interval / 2; epoch < cfg.duration;
       epoch += cfg.incast_interval) {
    const auto aggregator = static_cast<NodeId>(rng.uniform_int(0, hosts - 1));
    NodeId k = 0;
    for (NodeId h = 0; h < hosts; ++h) {
      if (h != aggregator) pool[k++] = h;
    }
    // Partial Fisher-Yates: the first incast_degree slots become responders.
    std::vector<FlowSpec> group;
    group.reserve(cfg.incast_degree);
    for (std::uint32_t i = 0; i < cfg.incast_degree; ++i) {
      const auto j = static_cast<std::size_t>(rng.uniform_int(i, pool.size() - 1));
      std::swap(pool[i], pool[j]);
      FlowSpec f;
      f.flow_id = id++;
      f.src = pool[i];
      f.dst = aggregator;
      f.size = cfg.incast_response_size;
      f.start_time = epoch + static_cast<SimTime>(rng.uniform_int(
                                 0, static_cast<std::uint64_t>(cfg.incast_jitter)));
      f.cls = FlowClass::kIncast;
      group.push_back(f);
    }
    bursts.push_back(std::move(group));
  }
  return bursts;
}

std::vector<FlowSpec> generate_workload(const WorkloadConfig& cfg, const Topology& topo) {
  std::vector<FlowSpec> flows = generate_background(cfg, topo);
  for (auto& group : generate_incast(cfg, topo)) {
    flows.insert(flows.end(), group.begin(), group.end());
  }
  std::stable_sort(flows.begin(), flows.end(), [](const FlowSpec& a, const FlowSpec& b) {
    return a.start_time < b.start_time;
  });
  for (std::size_t i = 0; i < flows.size(); ++i) flows[i].flow_id = static_cast<FlowId>(i);
  return flows;
}

void write_flows_csv(std::ostream& os, const std::vector<FlowSpec>& flows) {
  os << "flow_id,src,dst,size,start_ns,class\n";
  for (const FlowSpec& f : flows) {
    os << f.flow_id << ',' << f.src << ',' << f.dst << ',' << f.size << ',' << f.start_time
       << ',' << to_string(f.cls) << '\n';
  }
}

namespace {

template <typename T>
T parse_field(std::string_view text, std::size_t line, const char* what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::runtime_error("flows csv line " + std::to_string(line) + ": bad " + what +
                             " '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::vector<FlowSpec> read_flows_csv(std::istream& is) {
  std::vector<FlowSpec> flows;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(is, line) || line != "flow_id,src,dst,size,start_ns,class") {
    throw std::runtime_error("flows csv line 1: expected header "
                             "'flow_id,src,dst,size,start_ns,class'");
  }
  ++lineno;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string_view> cols;
    std::string_view rest = line;
    while (true) {
      const auto comma = rest.find(',');
      cols.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (cols.size() != 6) {
      throw std::runtime_error("flows csv line " + std::to_string(lineno) +
                               ": expected 6 columns");
    }
    FlowSpec f;
    f.flow_id = parse_field<FlowId>(cols[0], lineno, "flow_id");
    f.src = parse_field<NodeId>(cols[1], lineno, "src");
    f.dst = parse_field<NodeId>(cols[2], lineno, "dst");
    f.size = parse_field<Bytes>(cols[3], lineno, "size");
    f.start_time = parse_field<SimTime>(cols[4], lineno, "start_ns");
    const auto cls = parse_flow_class(cols[5]);
    if (!cls) {
      throw std::runtime_error("flows csv line " + std::to_string(lineno) +
                               ": class must be short, long or incast");
    }
    f.cls = *cls;
    if (f.src == f.dst || f.size <= 0) {
      throw std::runtime_error("flows csv line " + std::to_string(lineno) +
                               ": flow needs distinct endpoints and a positive size");
    }
    flows.push_back(f);
  }
  return flows;
}

}  // namespace psim
