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

#include "pulsersim/simulation.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace psim {
namespace {

constexpr SimTime kDisarmed = std::numeric_limits<SimTime>::max();
constexpr std::size_t kNoTrace = static_cast<std::size_t>(-1);
constexpr Bytes kNicBuffer = std::numeric_limits<Bytes>::max() / 4;

}  // namespace

Simulation::Simulation(SimSetup setup, SimObserver* observer)
    : setup_(std::move(setup)),
      observer_(observer),
      topo_(Topology::build_leaf_spine(setup_.topology)) {
  std::stable_sort(setup_.flows.begin(), setup_.flows.end(),
                   [](const FlowSpec& a, const FlowSpec& b) { return a.start_time < b.start_time; });
  const std::size_t n = setup_.flows.size();
  for (const FlowSpec& f : setup_.flows) {
    if (f.src >= topo_.host_count() || f.dst >= topo_.host_count() || f.src == f.dst) {
      throw std::invalid_argument("flow " + std::to_string(f.flow_id) +
                                  " has endpoints outside the fabric or a self-loop");
    }
    if (f.size <= 0) throw std::invalid_argument("flow " + std::to_string(f.flow_id) +
                                                 " has a non-positive size");
    if (f.start_time < 0) throw std::invalid_argument("flow start times must be >= 0");
  }

  PortConfig sw = setup_.switch_port;
  sw.line_rate = setup_.topology.line_rate;
  PortConfig nic = sw;
  nic.marking = false;
  nic.buffer_capacity = kNicBuffer;
  ports_.reserve(topo_.port_count());
  for (const PortInfo& info : topo_.ports()) {
    ports_.emplace_back(info.role == PortRole::kHostUplink ? nic : sw);
  }

  senders_.resize(n);
  receivers_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const FlowSpec& f = setup_.flows[i];
    receivers_.emplace_back(static_cast<FlowId>(i), f.dst, f.src);
  }
  finished_.assign(n, false);
  rto_deadline_.assign(n, kDisarmed);
  timer_pending_.assign(n, false);
  host_rx_bytes_.assign(topo_.host_count(), 0);
  nic_waiters_.resize(topo_.host_count());
  waiting_.assign(n, false);
  if (setup_.host_queue_limit <= 0) throw std::invalid_argument("host queue limit must be positive");
  conn_trace_index_.assign(n, kNoTrace);

  metrics_.warmup_end = setup_.warmup_end;
  for (PortId p : setup_.sampled_ports) {
    if (p >= ports_.size()) throw std::invalid_argument("sampled port id out of range");
    metrics_.port_traces.push_back(PortTrace{topo_.port(p).name, {}});
  }
  for (FlowId id : setup_.sampled_conns) {
    const auto it = std::find_if(setup_.flows.begin(), setup_.flows.end(),
                                 [&](const FlowSpec& f) { return f.flow_id == id; });
    if (it == setup_.flows.end()) {
      throw std::invalid_argument("sampled connection " + std::to_string(id) + " does not exist");
    }
    conn_trace_index_[static_cast<std::size_t>(it - setup_.flows.begin())] =
        metrics_.cwnd_traces.size();
    metrics_.cwnd_traces.push_back(CwndTrace{id, {}});
  }

  if (n > 0) engine_.schedule(setup_.flows[0].start_time, EventKind::kFlowStart, 0);
  if (setup_.sample_period > 0 &&
      (!setup_.sampled_ports.empty() || !setup_.sampled_conns.empty())) {
    engine_.schedule(0, EventKind::kMetricsSample, 0);
  }
}

void Simulation::run() {
  if (ran_) throw std::logic_error("Simulation::run called twice");
  ran_ = true;
  engine_.run_until(setup_.end_time, *this);
  finalize();
}

std::uint32_t Simulation::store_packet(const Packet& p) {
  if (!free_packets_.empty()) {
    const std::uint32_t slot = free_packets_.back();
    free_packets_.pop_back();
    packet_pool_[slot] = p;
    return slot;
  }
  packet_pool_.push_back(p);
  return static_cast<std::uint32_t>(packet_pool_.size() - 1);
}

Packet Simulation::take_packet(std::uint32_t slot) {
  free_packets_.push_back(slot);
  return packet_pool_[slot];
}

void Simulation::on_event(const Event& ev) {
  switch (ev.kind) {
    case EventKind::kPacketArrival:
      deliver(ev.target, take_packet(static_cast<std::uint32_t>(ev.payload)));
      break;
    case EventKind::kServiceComplete: {
      OutputPort& port = ports_[ev.target];
      port.set_busy(false);
      if (topo_.port(ev.target).role == PortRole::kHostUplink) wake_host(topo_.port(ev.target).owner);
      if (!port.busy() && !port.empty()) start_service(ev.target);
      break;
    }
    case EventKind::kTimerExpiry:
      on_timer(ev.target);
      break;
    case EventKind::kFlowStart:
      start_flow(ev.target);
      break;
    case EventKind::kMetricsSample:
      sample_metrics();
      break;
  }
}

void Simulation::transmit(PortId id, const Packet& pkt) {
  OutputPort& port = ports_[id];
  const EnqueueResult res = port.enqueue(pkt);
  if (observer_) observer_->on_enqueue(id, engine_.now(), pkt, res, port.qlen());
  if (res == EnqueueResult::kAccepted && !port.busy()) start_service(id);
}

void Simulation::start_service(PortId id) {
  OutputPort& port = ports_[id];
  const SimTime now = engine_.now();
  const Packet pkt = port.dequeue(now);
  if (observer_) observer_->on_dequeue(id, now, pkt, port.qlen());
  port.set_busy(true);
  const SimTime done = now + transmission_time(pkt.size, port.config().line_rate);
  engine_.schedule(done, EventKind::kServiceComplete, id);
  engine_.schedule(done + setup_.topology.link_delay, EventKind::kPacketArrival,
                   topo_.port(id).peer, store_packet(pkt));
}

void Simulation::deliver(NodeId node, const Packet& pkt) {
  if (topo_.is_host(node)) {
    host_rx_bytes_[node] += pkt.size;
    if (pkt.is_ack()) {
      on_ack_at_host(pkt);
    } else {
      on_data_at_host(pkt);
    }
    return;
  }
  transmit(topo_.route(node, pkt.flow_id, pkt.dst), pkt);
}

void Simulation::on_data_at_host(const Packet& pkt) {
  const std::uint32_t index = pkt.flow_id;
  Receiver& rcv = receivers_[index];
  const Packet ack = rcv.on_data_packet(pkt);
  const FlowSpec& f = setup_.flows[index];
  if (!finished_[index] && rcv.next_expected() >= f.size) {
    finished_[index] = true;
    const FctRecord rec{f.flow_id, f.cls, f.size, f.start_time, engine_.now()};
    metrics_.fct.push_back(rec);
    if (observer_) observer_->on_flow_complete(rec);
  }
  transmit(topo_.host_uplink(f.dst), ack);
}

void Simulation::on_ack_at_host(const Packet& pkt) {
  const std::uint32_t index = pkt.flow_id;
  auto& snd = senders_[index];
  if (!snd || snd->done()) return;
  const SimTime now = engine_.now();
  const AckOutcome out = snd->on_ack(pkt, now);
  if (observer_) observer_->on_cc_update(setup_.flows[index].flow_id, now, snd->cc());
  if (out.completed) {
    rto_deadline_[index] = kDisarmed;
    return;
  }
  if (out.retransmit_head) {
    transmit(topo_.host_uplink(setup_.flows[index].src), snd->head_segment(now));
  }
  // Progress restarts the retransmission timer (pump re-arms it).
  if (out.progressed) rto_deadline_[index] = kDisarmed;
  pump(index);
}

void Simulation::start_flow(std::uint32_t index) {
  const FlowSpec& f = setup_.flows[index];
  senders_[index].emplace(static_cast<FlowId>(index), f.src, f.dst, f.size, setup_.scheme,
                          setup_.cc);
  pump(index);
  const std::uint32_t next = index + 1;
  if (next < setup_.flows.size()) {
    engine_.schedule(setup_.flows[next].start_time, EventKind::kFlowStart, next);
  }
}

bool Simulation::nic_has_room(NodeId host) const {
  return ports_[topo_.host_uplink(host)].qlen() < setup_.host_queue_limit;
}

void Simulation::pump(std::uint32_t index) {
  Sender& snd = *senders_[index];
  const NodeId src = setup_.flows[index].src;
  const SimTime now = engine_.now();
  // Senders already waiting for this NIC go first.
  if (!waiting_[index] && nic_waiters_[src].empty()) {
    while (nic_has_room(src)) {
      auto seg = snd.next_segment(now);
      if (!seg) break;
      transmit(topo_.host_uplink(src), *seg);
    }
  }
  if (!waiting_[index] && snd.can_send()) {
    waiting_[index] = true;
    nic_waiters_[src].push_back(index);
  }
  if (snd.bytes_in_flight() > 0 && rto_deadline_[index] == kDisarmed) arm_timer(index);
}

void Simulation::wake_host(NodeId host) {
  auto& waiters = nic_waiters_[host];
  const SimTime now = engine_.now();
  // One segment per waiter in turn.
  while (!waiters.empty() && nic_has_room(host)) {
    const std::uint32_t index = waiters.front();
    waiters.pop_front();
    waiting_[index] = false;
    Sender& snd = *senders_[index];
    auto seg = snd.next_segment(now);
    if (!seg) continue;
    transmit(topo_.host_uplink(host), *seg);
    if (rto_deadline_[index] == kDisarmed) arm_timer(index);
    if (snd.can_send()) {
      waiting_[index] = true;
      waiters.push_back(index);
    }
  }
}

void Simulation::arm_timer(std::uint32_t index) {
  const SimTime deadline = engine_.now() + senders_[index]->cc().rto;
  rto_deadline_[index] = deadline;
  if (!timer_pending_[index]) {
    timer_pending_[index] = true;
    engine_.schedule(deadline, EventKind::kTimerExpiry, index);
  }
}

void Simulation::on_timer(std::uint32_t index) {
  timer_pending_[index] = false;
  auto& snd = senders_[index];
  const SimTime deadline = rto_deadline_[index];
  if (!snd || snd->done() || deadline == kDisarmed) return;
  const SimTime now = engine_.now();
  if (now < deadline) {
    // Restarted since this event was scheduled.
    timer_pending_[index] = true;
    engine_.schedule(deadline, EventKind::kTimerExpiry, index);
    return;
  }
  snd->on_timeout();
  if (observer_) observer_->on_cc_update(setup_.flows[index].flow_id, now, snd->cc());
  rto_deadline_[index] = kDisarmed;
  pump(index);
}

void Simulation::sample_metrics() {
  const SimTime now = engine_.now();
  for (std::size_t i = 0; i < setup_.sampled_ports.size(); ++i) {
    metrics_.port_traces[i].samples.push_back({now, ports_[setup_.sampled_ports[i]].qlen()});
  }
  for (std::size_t index = 0; index < conn_trace_index_.size(); ++index) {
    const std::size_t slot = conn_trace_index_[index];
    if (slot == kNoTrace) continue;
    const auto& snd = senders_[index];
    if (!snd || snd->done()) continue;
    metrics_.cwnd_traces[slot].samples.push_back({now, snd->cc().cwnd, snd->cc().braked});
  }
  const SimTime next = now + setup_.sample_period;
  if (next < setup_.end_time) engine_.schedule(next, EventKind::kMetricsSample, 0);
}

void Simulation::finalize() {
  for (std::size_t i = 0; i < setup_.flows.size(); ++i) {
    if (finished_[i]) continue;
    switch (setup_.flows[i].cls) {
      case FlowClass::kShort:
        ++metrics_.incomplete_short;
        break;
      case FlowClass::kLong:
        ++metrics_.incomplete_long;
        break;
      case FlowClass::kIncast:
        ++metrics_.incomplete_incast;
        break;
    }
  }
  PortTotals totals;
  for (PortId p = 0; p < ports_.size(); ++p) {
    if (topo_.port(p).role == PortRole::kHostUplink) continue;
    const PortCounters& c = ports_[p].counters();
    totals.drops += c.dropped_packets;
    totals.ce_marks += c.ce_marks;
    totals.ein_marks += c.ein_marks;
  }
  metrics_.totals = totals;
}

}  // namespace psim
