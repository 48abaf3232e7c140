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
#include <map>
#include <optional>

#include "pulsersim/congestion.hpp"
#include "pulsersim/packet.hpp"
#include "pulsersim/types.hpp"

namespace psim {

/// Receive side of one flow: cumulative ACK per data packet, echoing that
/// packet's CE and EIN marks.
class Receiver {
 public:
  Receiver() = default;
  Receiver(FlowId flow, NodeId self, NodeId peer) : flow_(flow), self_(self), peer_(peer) {}

  Packet on_data_packet(const Packet& data);

  Bytes next_expected() const { return next_expected_; }
  std::size_t out_of_order_segments() const { return out_of_order_.size(); }
  bool last_ce() const { return last_ce_; }
  bool last_ein() const { return last_ein_; }

 private:
  FlowId flow_ = 0;
  NodeId self_ = 0;
  NodeId peer_ = 0;
  Bytes next_expected_ = 0;
  std::map<Bytes, Bytes> out_of_order_;  // seq_lo -> seq_hi, disjoint
  bool last_ce_ = false;
  bool last_ein_ = false;
};

/// What the owner of a Sender has to do after feeding it an ACK.
struct AckOutcome {
  bool progressed = false;        // cumulative ACK advanced
  bool retransmit_head = false;   // send the segment at snd_una now
  bool completed = false;         // every byte acknowledged
};

/// Send side of one flow: sequence bookkeeping, duplicate-ACK loss detection
/// (NewReno-style partial ACK handling) and go-back-N after a timeout. The
/// congestion controller is driven through CongestionState.
class Sender {
 public:
  Sender(FlowId flow, NodeId self, NodeId peer, Bytes size, CcScheme scheme,
         const CcParams& params);

  /// Next new segment the window allows, or nothing.
  std::optional<Packet> next_segment(SimTime now);
  /// next_segment() would return a packet.
  bool can_send() const;

  /// The segment starting at snd_una, regardless of the window.
  Packet head_segment(SimTime now);

  AckOutcome on_ack(const Packet& ack, SimTime now);

  /// Retransmission timer fired with data outstanding.
  void on_timeout();

  FlowId flow_id() const { return flow_; }
  Bytes size() const { return size_; }
  Bytes snd_una() const { return snd_una_; }
  Bytes snd_nxt() const { return snd_nxt_; }
  Bytes snd_max() const { return snd_max_; }
  Bytes bytes_in_flight() const { return snd_nxt_ - snd_una_; }
  bool done() const { return snd_una_ >= size_; }
  CcScheme scheme() const { return scheme_; }
  const CongestionState& cc() const { return cc_; }
  std::uint64_t timeouts() const { return timeouts_; }
  std::uint64_t fast_retransmits() const { return fast_retransmits_; }

 private:
  Packet segment_at(Bytes seq, SimTime now) const;

  FlowId flow_;
  NodeId self_;
  NodeId peer_;
  Bytes size_;
  CcScheme scheme_;
  CongestionState cc_;
  Bytes snd_una_ = 0;
  Bytes snd_nxt_ = 0;
  Bytes snd_max_ = 0;
  std::uint32_t dupacks_ = 0;
  std::uint64_t timeouts_ = 0;
  std::uint64_t fast_retransmits_ = 0;
};

inline constexpr std::uint32_t kDupAckThreshold = 3;

}  // namespace psim
