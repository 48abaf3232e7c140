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
#include <optional>
#include <vector>

#include "pulsersim/types.hpp"

namespace psim {

/// Queue growth rate in bytes per second, truncated toward zero. Integral so
/// that the sliding-window sum is exact.
using GradientBps = std::int64_t;

/// (qlen - qlen_prev) / (t - t_prev) in bytes/s. Empty when t <= t_prev:
/// two dequeues in the same nanosecond carry no slope information.
std::optional<GradientBps> compute_gradient(Bytes qlen, Bytes qlen_prev, SimTime t,
                                            SimTime t_prev);

struct EinParams {
  std::uint32_t window = 50;        // N, gradient samples averaged
  GradientBps threshold = 0;        // bytes/s the average must exceed
  Bytes high_water_mark = 0;        // hysteresis floor while incast persists
};

/// Per-output-port incast detector, driven once per dequeue.
///
/// The average over the last N queue-length gradients is compared against
/// the threshold. Once asserted, the mark is held while the queue stays
/// above the high-water mark; when the average falls back and the queue is at
/// or below the mark the detector clears. Samples persist across idle
/// periods, and a partially filled window averages over the samples it has.
class EinDetector {
 public:
  explicit EinDetector(EinParams params);

  /// Feed the post-dequeue queue length; returns whether the departing packet
  /// should carry the incast mark.
  bool on_dequeue(Bytes qlen, SimTime now);

  const EinParams& params() const { return params_; }
  bool asserted() const { return ein_prev_; }
  std::size_t sample_count() const { return count_; }
  Int128 window_sum() const { return sum_; }
  Bytes qlen_prev() const { return qlen_prev_; }
  SimTime t_prev() const { return t_prev_; }

  /// Oldest-first copy of the stored samples.
  std::vector<GradientBps> samples() const;

  /// True when the current window average exceeds the threshold.
  bool average_above_threshold() const;

 private:
  void push(GradientBps g);

  EinParams params_;
  std::vector<GradientBps> ring_;
  std::size_t head_ = 0;  // next write position
  std::size_t count_ = 0;
  Int128 sum_ = 0;
  Bytes qlen_prev_ = 0;
  SimTime t_prev_ = 0;
  bool ein_prev_ = false;
};

}  // namespace psim
