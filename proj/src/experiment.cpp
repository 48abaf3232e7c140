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


#include "pulsersim/experiment.hpp"

#include <cmath>
#include <fstream>

namespace psim {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
  return os;
}

void write_run_files(const std::filesystem::path& dir, const RunResult& r) {
  std::filesystem::create_directories(dir);
  auto fct = open_out(dir / "fct.csv");
  write_fct_csv(fct, r.log);
  auto tput = open_out(dir / "throughput.csv");
  write_throughput_csv(tput, r.log);
  auto qlen = open_out(dir / "qlen.csv");
  write_qlen_csv(qlen, r.log);
  auto cwnd = open_out(dir / "cwnd.csv");
  write_cwnd_csv(cwnd, r.log);
  auto summary = open_out(dir / "summary.csv");
  write_summary_csv(summary, std::span<const SummaryRow>(&r.row, 1));
}

}  // namespace

std::vector<FlowSpec> make_flows(const ExperimentConfig& cfg, std::uint64_t seed) {
  if (!cfg.run.flow_file.empty()) {
    std::ifstream in(cfg.run.flow_file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open flow file '" + cfg.run.flow_file + "'");
    return read_flows_csv(in);
  }
  WorkloadConfig w = cfg.workload;
  w.seed = seed;
  return generate_workload(w, Topology::build_leaf_spine(cfg.fabric.shape));
}

SimSetup make_setup(const ExperimentConfig& cfg, std::uint64_t seed) {
  const Topology topo = Topology::build_leaf_spine(cfg.fabric.shape);
  SimSetup s;
  s.topology = cfg.fabric.shape;
  s.switch_port = cfg.port_config();
  s.host_queue_limit = cfg.fabric.host_queue_limit;
  s.scheme = cfg.transport.cc;
  s.cc = cfg.transport.params;
  s.flows = make_flows(cfg, seed);
  s.end_time = cfg.workload.duration + cfg.run.drain;
  s.warmup_end = static_cast<SimTime>(
      std::llround(cfg.run.warmup_fraction * static_cast<double>(cfg.workload.duration)));
  s.sample_period = cfg.run.sample_period;
  for (const std::string& name : cfg.run.sample_ports) {
    const auto id = topo.find_port(name);
    if (!id) throw ConfigError(0, "run.sample_ports: no port named '" + name + "'");
    s.sampled_ports.push_back(*id);
  }
  s.sampled_conns = cfg.run.sample_conns;
  return s;
}

RunResult run_experiment(const ExperimentConfig& cfg, std::uint64_t seed,
                         const std::filesystem::path& out_dir) {
  Simulation sim(make_setup(cfg, seed));
  sim.run();
  RunResult r{sim.metrics(), summarize(sim.metrics(), std::string(to_string(cfg.transport.cc)),
                                       cfg.workload.target_load)};
  if (!out_dir.empty()) write_run_files(out_dir, r);
  return r;
}

std::string run_dir_name(CcScheme scheme, double load, std::uint64_t seed) {
  return std::string(to_string(scheme)) + "-load" + format_double(load) + "-seed" +
         std::to_string(seed);
}

std::vector<SummaryRow> run_sweep(const ExperimentConfig& cfg, const SweepSpec& spec,
                                  const std::filesystem::path& out_dir) {
  std::vector<SummaryRow> per_seed;
  for (CcScheme scheme : spec.schemes) {
    for (double load : spec.loads) {
      for (std::uint64_t seed : spec.seeds) {
        ExperimentConfig c = cfg;
        c.transport.cc = scheme;
        c.workload.target_load = load;
        try {
          validate(c);
          per_seed.push_back(
              run_experiment(c, seed, out_dir / run_dir_name(scheme, load, seed)).row);
        } catch (const std::exception& e) {
          throw SweepError("run (scheme=" + std::string(to_string(scheme)) +
                           ", load=" + format_double(load) + ", seed=" + std::to_string(seed) +
                           ") failed: " + e.what());
        }
      }
    }
  }
  std::vector<SummaryRow> rows = aggregate_seeds(per_seed);
  std::filesystem::create_directories(out_dir);
  auto os = open_out(out_dir / "summary.csv");
  write_summary_csv(os, rows);
  return rows;
}

void export_flows(const ExperimentConfig& cfg, std::uint64_t seed,
                  const std::filesystem::path& path) {
  const auto flows = make_flows(cfg, seed);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto os = open_out(path);
  write_flows_csv(os, flows);
}

}  // namespace psim
