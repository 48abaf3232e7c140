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


// The scripted incast: one long flow shares a leaf down-port with a burst
// of simultaneous responders.

#pragma once

#include <cstdint>

#include "pulsersim/congestion.hpp"
#include "pulsersim/types.hpp"

namespace psim::scenario {

struct IncastScript {
  std::uint32_t degree = 16;
  Bytes response_size = 100'000;
  SimTime onset = milliseconds(3);   // responders start here
  SimTime tail = milliseconds(5);    // simulated after onset
};

struct IncastOutcome {
  SimTime first_arrival = -1;      // first responder packet enqueued at the bottleneck
  Bytes cwnd_before = 0;           // long flow's window at its last update before onset
  SimTime reached_safe = -1;       // first update with cwnd == cwnd_safe
  SimTime below_half = -1;         // first update with cwnd < cwnd_before / 2
  std::int64_t first_ein_dequeue = -1;  // 1-based bottleneck dequeue count from first_arrival
  Bytes peak_qlen = 0;             // bottleneck, from onset on
  std::uint64_t drops = 0;         // bottleneck
  std::uint64_t incast_completed = 0;
  Bytes cwnd_safe = 0;
};

/// Desk fabric (4 leaves of 8 hosts, 4 spines, 10 Gb/s, 10 us). The long
/// flow runs from host 8 (leaf 1) to host 0; responders are hosts 16.. on
/// leaves 2 and 3, so the shared bottleneck is leaf0.down0.
IncastOutcome run_scripted_incast(CcScheme scheme, const IncastScript& script = {});

}  // namespace psim::scenario
