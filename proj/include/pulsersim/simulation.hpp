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
#include <deque>
#include <optional>
#include <vector>

#include "pulsersim/congestion.hpp"
#include "pulsersim/connection.hpp"
#include "pulsersim/engine.hpp"
#include "pulsersim/metrics.hpp"
#include "pulsersim/port.hpp"
#include "pulsersim/topology.hpp"
#include "pulsersim/workload.hpp"

namespace psim {

/// Fully resolved inputs of one simulation run.
struct SimSetup {
  LeafSpineParams topology;
  PortConfig switch_port;  // applied to every switch output port
  CcScheme scheme = CcScheme::kPulser;
  CcParams cc;
  std::vector<FlowSpec> flows;
  SimTime end_time = milliseconds(10);
  SimTime warmup_end = 0;
  /// Senders stop handing new segments to their host's NIC while it holds
  /// this many bytes, and resume as it drains. ACKs are never held back.
  Bytes host_queue_limit = 15'000;
  SimTime sample_period = microseconds(10);
  std::vector<PortId> sampled_ports;
  std::vector<FlowId> sampled_conns;  // FlowSpec ids
};

/// Optional hooks into the event loop, for tests and traces.
class SimObserver {
 public:
  virtual ~SimObserver() = default;
  virtual void on_enqueue(PortId, SimTime, const Packet&, EnqueueResult, Bytes /*qlen*/) {}
  virtual void on_dequeue(PortId, SimTime, const Packet&, Bytes /*qlen_after*/) {}
  /// After the congestion controller has consumed an ACK or a timeout.
  virtual void on_cc_update(FlowId, SimTime, const CongestionState&) {}
  virtual void on_flow_complete(const FctRecord&) {}
};

class Simulation final : public EventSink {
 public:
  explicit Simulation(SimSetup setup, SimObserver* observer = nullptr);

  /// Runs the event loop to setup().end_time and finalizes the metrics.
  void run();

  const SimSetup& setup() const { return setup_; }
  const Topology& topology() const { return topo_; }
  const Engine& engine() const { return engine_; }
  const OutputPort& port(PortId id) const { return ports_[id]; }
  const MetricsLog& metrics() const { return metrics_; }

  /// Index into setup().flows (sorted by start time).
  const FlowSpec& flow(std::size_t index) const { return setup_.flows[index]; }
  const std::optional<Sender>& sender(std::size_t index) const { return senders_[index]; }
  const Receiver& receiver(std::size_t index) const { return receivers_[index]; }
  /// Every byte that arrived at a host, headers included.
  Bytes host_rx_bytes(NodeId host) const { return host_rx_bytes_[host]; }

  void on_event(const Event& ev) override;

 private:
  std::uint32_t store_packet(const Packet& p);
  Packet take_packet(std::uint32_t slot);

  void transmit(PortId port, const Packet& pkt);
  void start_service(PortId port);
  void deliver(NodeId node, const Packet& pkt);
  void on_data_at_host(const Packet& pkt);
  void on_ack_at_host(const Packet& pkt);
  void start_flow(std::uint32_t index);
  void pump(std::uint32_t index);
  void wake_host(NodeId host);
  bool nic_has_room(NodeId host) const;
  void arm_timer(std::uint32_t index);
  void on_timer(std::uint32_t index);
  void sample_metrics();
  void finalize();

  SimSetup setup_;
  SimObserver* observer_;
  Topology topo_;
  Engine engine_;
  std::vector<OutputPort> ports_;
  std::vector<Packet> packet_pool_;
  std::vector<std::uint32_t> free_packets_;

  std::vector<std::optional<Sender>> senders_;
  std::vector<Receiver> receivers_;
  std::vector<bool> finished_;
  std::vector<SimTime> rto_deadline_;
  std::vector<bool> timer_pending_;
  std::vector<Bytes> host_rx_bytes_;
  std::vector<std::deque<std::uint32_t>> nic_waiters_;  // per host, FIFO
  std::vector<bool> waiting_;
  std::vector<std::size_t> conn_trace_index_;  // flow index -> trace slot or npos

  MetricsLog metrics_;
  bool ran_ = false;
};

}  // namespace psim
