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

#include "pulsersim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <span>
#include <sstream>

namespace psim {
namespace {

enum class Unit { kNone, kTime, kBytes, kRate };

std::string_view trim(std::string_view s) {
  const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r'; };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(std::size_t line, std::string_view key, const std::string& msg) {
  std::string where = line > 0 ? "line " + std::to_string(line) : std::string("override");
  throw ConfigError(line, where + ": " + std::string(key) + ": " + msg);
}

double unit_scale(Unit unit, std::string_view suffix, bool& ok) {
  struct Suffix {
    std::string_view name;
    double scale;
  };
  static constexpr Suffix kTime[] = {{"ns", 1}, {"us", 1e3}, {"ms", 1e6}, {"s", 1e9}};
  static constexpr Suffix kBytes[] = {{"B", 1}, {"KB", 1e3}, {"MB", 1e6}, {"GB", 1e9}};
  static constexpr Suffix kRate[] = {{"bps", 1}, {"Kbps", 1e3}, {"Mbps", 1e6}, {"Gbps", 1e9}};
  ok = true;
  if (suffix.empty()) return 1.0;
  std::span<const Suffix> table;
  switch (unit) {
    case Unit::kTime:
      table = kTime;
      break;
    case Unit::kBytes:
      table = kBytes;
      break;
    case Unit::kRate:
      table = kRate;
      break;
    case Unit::kNone:
      break;
  }
  for (const Suffix& s : table) {
    if (s.name == suffix) return s.scale;
  }
  ok = false;
  return 0.0;
}

double parse_number(std::string_view value, Unit unit, std::size_t line, std::string_view key) {
  value = trim(value);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr == value.data()) fail(line, key, "expected a number, got '" +
                                                               std::string(value) + "'");
  const std::string_view suffix = trim(value.substr(static_cast<std::size_t>(ptr - value.data())));
  bool ok = false;
  const double scale = unit_scale(unit, suffix, ok);
  if (!ok) fail(line, key, "unknown unit '" + std::string(suffix) + "'");
  const double out = v * scale;
  if (!std::isfinite(out)) fail(line, key, "value is not finite");
  return out;
}

std::int64_t parse_integer(std::string_view value, Unit unit, std::size_t line,
                           std::string_view key, std::int64_t min_value) {
  const double v = parse_number(value, unit, line, key);
  const double r = std::round(v);
  if (std::fabs(v - r) > 1e-6 * std::max(1.0, std::fabs(v))) {
    fail(line, key, "expected a whole number");
  }
  if (r < static_cast<double>(min_value) || r > 9.0e18) {
    fail(line, key, "must be at least " + std::to_string(min_value));
  }
  return static_cast<std::int64_t>(r);
}

double parse_real(std::string_view value, std::size_t line, std::string_view key, double lo,
                  double hi, bool lo_open, bool hi_open) {
  const double v = parse_number(value, Unit::kNone, line, key);
  const bool below = lo_open ? v <= lo : v < lo;
  const bool above = hi_open ? v >= hi : v > hi;
  if (below || above) {
    std::ostringstream os;
    os << "must lie in " << (lo_open ? '(' : '[') << lo << ", " << hi << (hi_open ? ')' : ']');
    fail(line, key, os.str());
  }
  return v;
}

std::vector<std::string_view> split_list(std::string_view text) {
  std::vector<std::string_view> out;
  text = trim(text);
  if (text.empty()) return out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(trim(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

using Setter = std::function<void(ExperimentConfig&, std::string_view, std::size_t,
                                  std::string_view)>;

struct KeyDef {
  std::string_view name;
  Setter set;
};

std::uint32_t as_u32(std::int64_t v, std::size_t line, std::string_view key) {
  if (v > std::numeric_limits<std::uint32_t>::max()) fail(line, key, "value too large");
  return static_cast<std::uint32_t>(v);
}

const std::vector<KeyDef>& key_table() {
  using C = ExperimentConfig;
  using SV = std::string_view;
  static const std::vector<KeyDef> table = {
      {"topology.n_leaves", [](C& c, SV v, std::size_t l, SV k) {
         c.fabric.shape.n_leaves = as_u32(parse_integer(v, Unit::kNone, l, k, 1), l, k);
       }},
      {"topology.hosts_per_leaf", [](C& c, SV v, std::size_t l, SV k) {
         c.fabric.shape.hosts_per_leaf = as_u32(parse_integer(v, Unit::kNone, l, k, 1), l, k);
       }},
      {"topology.n_spines", [](C& c, SV v, std::size_t l, SV k) {
         c.fabric.shape.n_spines = as_u32(parse_integer(v, Unit::kNone, l, k, 1), l, k);
       }},
      {"topology.line_rate", [](C& c, SV v, std::size_t l, SV k) {
         c.fabric.shape.line_rate = parse_integer(v, Unit::kRate, l, k, 1);
       }},
      {"topology.link_delay", [](C& c, SV v, std::size_t l, SV k) {
         c.fabric.shape.link_delay = parse_integer(v, Unit::kTime, l, k, 0);
       }},
      {"topology.buffer", [](C& c, SV v, std::size_t l, SV k) {
         c.fabric.buffer = parse_integer(v, Unit::kBytes, l, k, 1);
       }},
      {"topology.host_queue_limit", [](C& c, SV v, std::size_t l, SV k) {
         c.fabric.host_queue_limit = parse_integer(v, Unit::kBytes, l, k, 1);
       }},
      {"topology.ecn_k", [](C& c, SV v, std::size_t l, SV k) {
         c.fabric.ecn_k = parse_integer(v, Unit::kBytes, l, k, 0);
       }},
      {"topology.high_water_mark", [](C& c, SV v, std::size_t l, SV k) {
         c.fabric.high_water_mark = parse_integer(v, Unit::kBytes, l, k, 0);
       }},
      {"topology.ein_n", [](C& c, SV v, std::size_t l, SV k) {
         c.fabric.ein_window = as_u32(parse_integer(v, Unit::kNone, l, k, 1), l, k);
       }},
      {"topology.ein_threshold_fraction", [](C& c, SV v, std::size_t l, SV k) {
         c.fabric.ein_threshold_fraction = parse_real(v, l, k, 0.0, 1e6, true, false);
       }},

      {"workload.target_load", [](C& c, SV v, std::size_t l, SV k) {
         c.workload.target_load = parse_real(v, l, k, 0.0, 1.0, true, true);
       }},
      {"workload.short_size_min", [](C& c, SV v, std::size_t l, SV k) {
         c.workload.short_size_min = parse_integer(v, Unit::kBytes, l, k, 1);
       }},
      {"workload.short_size_max", [](C& c, SV v, std::size_t l, SV k) {
         c.workload.short_size_max = parse_integer(v, Unit::kBytes, l, k, 1);
       }},
      {"workload.long_size", [](C& c, SV v, std::size_t l, SV k) {
         c.workload.long_size = parse_integer(v, Unit::kBytes, l, k, 1);
       }},
      {"workload.long_load_fraction", [](C& c, SV v, std::size_t l, SV k) {
         c.workload.long_load_fraction = parse_real(v, l, k, 0.0, 1.0, false, false);
       }},
      {"workload.incast_degree", [](C& c, SV v, std::size_t l, SV k) {
         c.workload.incast_degree = as_u32(parse_integer(v, Unit::kNone, l, k, 2), l, k);
       }},
      {"workload.incast_response_size", [](C& c, SV v, std::size_t l, SV k) {
         c.workload.incast_response_size = parse_integer(v, Unit::kBytes, l, k, 1);
       }},
      {"workload.incast_interval", [](C& c, SV v, std::size_t l, SV k) {
         c.workload.incast_interval = parse_integer(v, Unit::kTime, l, k, 0);
       }},
      {"workload.incast_jitter", [](C& c, SV v, std::size_t l, SV k) {
         c.workload.incast_jitter = parse_integer(v, Unit::kTime, l, k, 0);
       }},

      {"transport.cc", [](C& c, SV v, std::size_t l, SV k) {
         const auto s = parse_cc_scheme(trim(v));
         if (!s) fail(l, k, "unknown scheme '" + std::string(trim(v)) + "' (valid: dctcp, pulser)");
         c.transport.cc = *s;
       }},
      {"transport.mss", [](C& c, SV v, std::size_t l, SV k) {
         c.transport.params.mss = parse_integer(v, Unit::kBytes, l, k, 1);
       }},
      {"transport.cwnd_safe_mss", [](C& c, SV v, std::size_t l, SV k) {
         c.transport.params.cwnd_safe_mss = as_u32(parse_integer(v, Unit::kNone, l, k, 1), l, k);
       }},
      {"transport.init_cwnd_mss", [](C& c, SV v, std::size_t l, SV k) {
         c.transport.params.init_cwnd_mss = as_u32(parse_integer(v, Unit::kNone, l, k, 1), l, k);
       }},
      {"transport.g", [](C& c, SV v, std::size_t l, SV k) {
         c.transport.params.g = parse_real(v, l, k, 0.0, 1.0, true, false);
       }},
      {"transport.alpha_init", [](C& c, SV v, std::size_t l, SV k) {
         c.transport.params.alpha_init = parse_real(v, l, k, 0.0, 1.0, false, false);
       }},
      {"transport.rto_init", [](C& c, SV v, std::size_t l, SV k) {
         c.transport.params.rto_init = parse_integer(v, Unit::kTime, l, k, 1);
       }},
      {"transport.rto_min", [](C& c, SV v, std::size_t l, SV k) {
         c.transport.params.rto_min = parse_integer(v, Unit::kTime, l, k, 1);
       }},
      {"transport.rto_max", [](C& c, SV v, std::size_t l, SV k) {
         c.transport.params.rto_max = parse_integer(v, Unit::kTime, l, k, 1);
       }},

      {"run.duration", [](C& c, SV v, std::size_t l, SV k) {
         c.workload.duration = parse_integer(v, Unit::kTime, l, k, 1);
       }},
      {"run.drain", [](C& c, SV v, std::size_t l, SV k) {
         c.run.drain = parse_integer(v, Unit::kTime, l, k, 0);
       }},
      {"run.warmup_fraction", [](C& c, SV v, std::size_t l, SV k) {
         c.run.warmup_fraction = parse_real(v, l, k, 0.0, 1.0, false, true);
       }},
      {"run.seeds", [](C& c, SV v, std::size_t l, SV k) {
         try {
           c.run.seeds = parse_seed_list(v);
         } catch (const std::invalid_argument& e) {
           fail(l, k, e.what());
         }
       }},
      {"run.sample_ports", [](C& c, SV v, std::size_t, SV) {
         c.run.sample_ports.clear();
         for (SV item : split_list(v)) c.run.sample_ports.emplace_back(item);
       }},
      {"run.sample_conns", [](C& c, SV v, std::size_t l, SV k) {
         c.run.sample_conns.clear();
         for (SV item : split_list(v)) {
           c.run.sample_conns.push_back(as_u32(parse_integer(item, Unit::kNone, l, k, 0), l, k));
         }
       }},
      {"run.sample_period", [](C& c, SV v, std::size_t l, SV k) {
         c.run.sample_period = parse_integer(v, Unit::kTime, l, k, 1);
       }},
      {"run.out", [](C& c, SV v, std::size_t, SV) { c.run.out_dir = std::string(trim(v)); }},
      {"run.flow_file", [](C& c, SV v, std::size_t, SV) { c.run.flow_file = std::string(trim(v)); }},
  };
  return table;
}

}  // namespace

PortConfig ExperimentConfig::port_config() const {
  PortConfig p;
  p.line_rate = fabric.shape.line_rate;
  p.buffer_capacity = fabric.buffer;
  const double rate_scale = static_cast<double>(fabric.shape.line_rate) / 1e10;
  p.ecn_threshold = fabric.ecn_k.value_or(static_cast<Bytes>(
      std::llround(65.0 * static_cast<double>(transport.params.mss) * rate_scale)));
  p.high_water_mark = fabric.high_water_mark.value_or(
      static_cast<Bytes>(std::llround(1.5 * static_cast<double>(p.ecn_threshold))));
  p.ein_window = fabric.ein_window;
  p.ein_threshold_fraction = fabric.ein_threshold_fraction;
  p.marking = true;
  return p;
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  text = trim(text);
  auto parse_u64 = [](std::string_view s) {
    s = trim(s);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
      throw std::invalid_argument("bad seed '" + std::string(s) + "'");
    }
    return v;
  };
  std::vector<std::uint64_t> seeds;
  if (const auto dots = text.find(".."); dots != std::string_view::npos) {
    const std::uint64_t lo = parse_u64(text.substr(0, dots));
    const std::uint64_t hi = parse_u64(text.substr(dots + 2));
    if (hi < lo) throw std::invalid_argument("seed range is empty");
    if (hi - lo > 100'000) throw std::invalid_argument("seed range is too large");
    for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  } else {
    for (std::string_view item : split_list(text)) seeds.push_back(parse_u64(item));
  }
  if (seeds.empty()) throw std::invalid_argument("seed list is empty");
  return seeds;
}

void set_value(ExperimentConfig& cfg, std::string_view key, std::string_view value,
               std::size_t line) {
  key = trim(key);
  const auto& table = key_table();
  const auto it = std::find_if(table.begin(), table.end(),
                               [&](const KeyDef& d) { return d.name == key; });
  if (it == table.end()) fail(line, key, "unknown key");
  it->set(cfg, trim(value), line, key);
}

void apply_override(ExperimentConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError(0, "override '" + std::string(assignment) + "': expected key=value");
  }
  set_value(cfg, assignment.substr(0, eq), assignment.substr(eq + 1), 0);
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::size_t lineno = 0;
  while (!text.empty()) {
    ++lineno;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(lineno, "line " + std::to_string(lineno) +
                                    ": expected 'section.key = value'");
    }
    const std::string_view key = trim(line.substr(0, eq));
    if (key.find('.') == std::string_view::npos) {
      throw ConfigError(lineno, "line " + std::to_string(lineno) + ": key '" +
                                    std::string(key) + "' must be 'section.key'");
    }
    set_value(cfg, key, line.substr(eq + 1), lineno);
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, "cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate(const ExperimentConfig& cfg) {
  auto check = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(0, msg);
  };
  Topology topo;
  try {
    topo = Topology::build_leaf_spine(cfg.fabric.shape);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, std::string("topology: ") + e.what());
  }
  const PortConfig port = cfg.port_config();
  check(port.high_water_mark > port.ecn_threshold,
        "topology.high_water_mark must exceed the ECN threshold (" +
            std::to_string(port.ecn_threshold) + " bytes)");
  const CcParams& p = cfg.transport.params;
  check(p.rto_min <= p.rto_max, "transport.rto_min must not exceed transport.rto_max");
  check(p.rto_init >= p.rto_min && p.rto_init <= p.rto_max,
        "transport.rto_init must lie within [rto_min, rto_max]");
  check(!cfg.run.seeds.empty(), "run.seeds must not be empty");
  for (const std::string& name : cfg.run.sample_ports) {
    check(topo.find_port(name).has_value(), "run.sample_ports: no port named '" + name + "'");
  }
  if (cfg.run.flow_file.empty()) {
    try {
      validate(cfg.workload, topo);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(0, std::string("workload: ") + e.what());
    }
  }
}

std::vector<std::string_view> config_keys() {
  std::vector<std::string_view> keys;
  for (const KeyDef& d : key_table()) keys.push_back(d.name);
  return keys;
}

}  // namespace psim
