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

#include "pulsersim/connection.hpp"

#include <algorithm>
#include <stdexcept>

namespace psim {

Packet Receiver::on_data_packet(const Packet& data) {
  last_ce_ = data.has(kFlagCe);
  last_ein_ = data.has(kFlagEin);

  if (data.seq_hi > next_expected_) {
    if (data.seq_lo <= next_expected_) {
      next_expected_ = data.seq_hi;
    } else {
      // Merge into the reassembly set.
      Bytes lo = data.seq_lo;
      Bytes hi = data.seq_hi;
      auto it = out_of_order_.upper_bound(lo);
      if (it != out_of_order_.begin()) {
        auto prev = std::prev(it);
        if (prev->second >= lo) {
          lo = prev->first;
          hi = std::max(hi, prev->second);
          it = out_of_order_.erase(prev);
        }
      }
      while (it != out_of_order_.end() && it->first <= hi) {
        hi = std::max(hi, it->second);
        it = out_of_order_.erase(it);
      }
      out_of_order_.emplace(lo, hi);
    }
    while (!out_of_order_.empty() && out_of_order_.begin()->first <= next_expected_) {
      next_expected_ = std::max(next_expected_, out_of_order_.begin()->second);
      out_of_order_.erase(out_of_order_.begin());
    }
  }

  Packet ack;
  ack.flow_id = flow_;
  ack.src = self_;
  ack.dst = peer_;
  ack.size = kHeaderBytes;
  ack.ack_no = next_expected_;
  ack.send_time = data.send_time;
  ack.flags = kFlagAck;
  if (last_ce_) ack.set(kFlagEcnEcho);
  if (last_ein_) ack.set(kFlagEinEcho);
  return ack;
}

Sender::Sender(FlowId flow, NodeId self, NodeId peer, Bytes size, CcScheme scheme,
               const CcParams& params)
    : flow_(flow),
      self_(self),
      peer_(peer),
      size_(size),
      scheme_(scheme),
      cc_(CongestionState::initial(params)) {
  if (size <= 0) throw std::invalid_argument("flow size must be positive");
}

Packet Sender::segment_at(Bytes seq, SimTime now) const {
  const Bytes hi = std::min(seq + cc_.mss, size_);
  return make_data_packet(flow_, self_, peer_, seq, hi, now);
}

std::optional<Packet> Sender::next_segment(SimTime now) {
  if (snd_nxt_ >= size_) return std::nullopt;
  if (send_allowed(cc_, bytes_in_flight()) < cc_.mss) {
    // A final short segment still needs a whole segment of room.
    return std::nullopt;
  }
  Packet p = segment_at(snd_nxt_, now);
  snd_nxt_ = p.seq_hi;
  snd_max_ = std::max(snd_max_, snd_nxt_);
  return p;
}

bool Sender::can_send() const {
  return snd_nxt_ < size_ && send_allowed(cc_, bytes_in_flight()) >= cc_.mss;
}

Packet Sender::head_segment(SimTime now) { return segment_at(snd_una_, now); }

AckOutcome Sender::on_ack(const Packet& ack, SimTime now) {
  AckOutcome out;
  if (done()) return out;

  const Bytes ack_no = std::min(ack.ack_no, size_);
  const bool cwnd_limited = bytes_in_flight() + cc_.mss > cc_.cwnd;
  Bytes newly = 0;
  if (ack_no > snd_una_) {
    newly = ack_no - snd_una_;
    snd_una_ = ack_no;
    snd_nxt_ = std::max(snd_nxt_, snd_una_);
    dupacks_ = 0;
    out.progressed = true;
    on_rtt_sample(cc_, now - ack.send_time);
  } else if (ack_no == snd_una_ && bytes_in_flight() > 0) {
    ++dupacks_;
  }

  const AckSample sample{ack_no,  newly,    ack.has(kFlagEcnEcho), ack.has(kFlagEinEcho),
                         snd_nxt_, cwnd_limited};
  psim::on_ack(scheme_, cc_, sample);

  if (cc_.in_recovery && newly > 0) {
    if (snd_una_ >= cc_.recover_seq) {
      cc_.in_recovery = false;
    } else {
      out.retransmit_head = true;  // partial ACK: next hole
    }
  } else if (!cc_.in_recovery && dupacks_ == kDupAckThreshold &&
             snd_una_ >= cc_.recover_seq) {
    on_fast_retransmit(cc_, snd_max_);
    ++fast_retransmits_;
    out.retransmit_head = true;
  }

  out.completed = done();
  if (out.completed) out.retransmit_head = false;
  return out;
}

void Sender::on_timeout() {
  psim::on_timeout(cc_, snd_una_, snd_max_);
  snd_nxt_ = snd_una_;
  dupacks_ = 0;
  ++timeouts_;
}

}  // namespace psim
