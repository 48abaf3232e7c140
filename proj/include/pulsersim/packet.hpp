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

#include "pulsersim/types.hpp"

namespace psim {

// Mark bits. Data packets use the first three; ACKs carry the echoes.
enum PacketFlag : std::uint8_t {
  kFlagAck = 1u << 0,
  kFlagEcnCapable = 1u << 1,
  kFlagCe = 1u << 2,
  kFlagEin = 1u << 3,
  kFlagEcnEcho = 1u << 4,
  kFlagEinEcho = 1u << 5,
};

struct Packet {
  FlowId flow_id = 0;
  NodeId src = 0;  // host the packet was emitted by
  NodeId dst = 0;  // host the packet is addressed to
  Bytes size = 0;  // on-the-wire bytes, header included
  Bytes seq_lo = 0;
  Bytes seq_hi = 0;  // exclusive
  Bytes ack_no = 0;  // ACKs only: next byte expected by the receiver
  SimTime send_time = 0;  // data: time sent; ACK: echo of the data send time
  std::uint8_t flags = 0;

  bool is_ack() const { return (flags & kFlagAck) != 0; }
  bool has(PacketFlag f) const { return (flags & f) != 0; }
  void set(PacketFlag f) { flags |= f; }

  Bytes payload() const { return seq_hi - seq_lo; }
};

inline Packet make_data_packet(FlowId flow, NodeId src, NodeId dst, Bytes seq_lo,
                               Bytes seq_hi, SimTime now) {
  Packet p;
  p.flow_id = flow;
  p.src = src;
  p.dst = dst;
  p.seq_lo = seq_lo;
  p.seq_hi = seq_hi;
  p.size = (seq_hi - seq_lo) + kHeaderBytes;
  p.send_time = now;
  p.flags = kFlagEcnCapable;
  return p;
}

}  // namespace psim
