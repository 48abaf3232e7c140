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

#include "pulsersim/ein_detector.hpp"

#include <stdexcept>

namespace psim {

std::optional<GradientBps> compute_gradient(Bytes qlen, Bytes qlen_prev, SimTime t,
                                            SimTime t_prev) {
  if (t <= t_prev) return std::nullopt;
  const Int128 scaled = static_cast<Int128>(qlen - qlen_prev) * kNanosPerSecond;
  return static_cast<GradientBps>(scaled / (t - t_prev));
}

EinDetector::EinDetector(EinParams params) : params_(params) {
  if (params_.window == 0) {
    throw std::invalid_argument("EIN window must hold at least one sample");
  }
  ring_.assign(params_.window, 0);
}

void EinDetector::push(GradientBps g) {
  if (count_ == ring_.size()) {
    sum_ -= ring_[head_];
  } else {
    ++count_;
  }
  ring_[head_] = g;
  sum_ += g;
  head_ = (head_ + 1) % ring_.size();
}

bool EinDetector::average_above_threshold() const {
  if (count_ == 0) return false;
  // sum / count > threshold without the division.
  return sum_ > static_cast<Int128>(params_.threshold) * static_cast<Int128>(count_);
}

bool EinDetector::on_dequeue(Bytes qlen, SimTime now) {
  if (const auto g = compute_gradient(qlen, qlen_prev_, now, t_prev_)) {
    push(*g);
    qlen_prev_ = qlen;
    t_prev_ = now;
  }

  if (average_above_threshold()) {
    ein_prev_ = true;
    return true;
  }
  if (ein_prev_ && qlen > params_.high_water_mark) {
    return true;
  }
  ein_prev_ = false;
  return false;
}

std::vector<GradientBps> EinDetector::samples() const {
  std::vector<GradientBps> out;
  out.reserve(count_);
  const std::size_t n = ring_.size();
  const std::size_t start = (head_ + n - count_) % n;
  for (std::size_t i = 0; i < count_; ++i) out.push_back(ring_[(start + i) % n]);
  return out;
}

}  // namespace psim
