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

#include "pulsersim/port.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace psim {

GradientBps PortConfig::ein_threshold_bps() const {
  return static_cast<GradientBps>(
      std::llround(ein_threshold_fraction * static_cast<double>(line_rate) / 8.0));
}

EinParams PortConfig::ein_params() const {
  return EinParams{ein_window, ein_threshold_bps(), high_water_mark};
}

OutputPort::OutputPort(PortConfig config)
    : config_(config), detector_(config.ein_params()) {}

EnqueueResult OutputPort::enqueue(const Packet& pkt) {
  if (qlen_ + pkt.size > config_.buffer_capacity) {
    ++counters_.dropped_packets;
    counters_.dropped_bytes += pkt.size;
    return EnqueueResult::kDropped;
  }
  queue_.push_back(pkt);
  qlen_ += pkt.size;
  ++counters_.enqueued_packets;
  counters_.enqueued_bytes += pkt.size;
  return EnqueueResult::kAccepted;
}

Packet OutputPort::dequeue(SimTime now) {
  if (queue_.empty()) {
    std::fprintf(stderr, "pulsersim: dequeue on an empty port\n");
    std::abort();
  }
  Packet pkt = queue_.front();
  queue_.pop_front();
  qlen_ -= pkt.size;
  ++counters_.dequeued_packets;
  counters_.dequeued_bytes += pkt.size;

  if (config_.marking) {
    // The detector samples every dequeue; only data packets carry marks.
    const bool incast = detector_.on_dequeue(qlen_, now);
    if (!pkt.is_ack()) {
      if (pkt.has(kFlagEcnCapable) && qlen_ > config_.ecn_threshold) {
        pkt.set(kFlagCe);
        ++counters_.ce_marks;
      }
      if (incast) {
        pkt.set(kFlagEin);
        ++counters_.ein_marks;
      }
    }
  }
  return pkt;
}

}  // namespace psim
