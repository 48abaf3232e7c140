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

#include "pulsersim/ein_detector.hpp"
#include "pulsersim/packet.hpp"
#include "pulsersim/types.hpp"

namespace psim {

struct PortConfig {
  BitRate line_rate = gigabits_per_second(10);
  Bytes ecn_threshold = 65 * 1460;  // K
  Bytes buffer_capacity = 250'000;
  std::uint32_t ein_window = 50;
  double ein_threshold_fraction = 0.25;  // of line rate
  Bytes high_water_mark = 142'350;
  bool marking = true;  // false for host NICs: no AQM, no detector

  /// Threshold in bytes/s: fraction x line_rate / 8.
  GradientBps ein_threshold_bps() const;
  EinParams ein_params() const;
};

struct PortCounters {
  std::uint64_t enqueued_packets = 0;
  std::uint64_t dequeued_packets = 0;
  std::uint64_t dropped_packets = 0;
  Bytes enqueued_bytes = 0;
  Bytes dequeued_bytes = 0;
  Bytes dropped_bytes = 0;
  std::uint64_t ce_marks = 0;
  std::uint64_t ein_marks = 0;
};

enum class EnqueueResult { kAccepted, kDropped };

/// Output-queued FIFO with tail drop, instantaneous-queue ECN marking and
/// the incast detector, both evaluated at dequeue. A dequeued packet is the
/// one entering the wire; `busy` covers its serialization.
class OutputPort {
 public:
  explicit OutputPort(PortConfig config);

  EnqueueResult enqueue(const Packet& pkt);

  /// Removes the head packet and applies CE/EIN marks against the
  /// post-removal queue length. Aborts on an empty queue.
  Packet dequeue(SimTime now);

  bool empty() const { return queue_.empty(); }
  std::size_t size() const { return queue_.size(); }
  Bytes qlen() const { return qlen_; }
  bool busy() const { return busy_; }
  void set_busy(bool b) { busy_ = b; }

  const PortConfig& config() const { return config_; }
  const PortCounters& counters() const { return counters_; }
  const EinDetector& detector() const { return detector_; }

 private:
  PortConfig config_;
  EinDetector detector_;
  std::deque<Packet> queue_;
  Bytes qlen_ = 0;
  bool busy_ = false;
  PortCounters counters_;
};

}  // namespace psim
