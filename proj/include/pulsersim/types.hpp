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

namespace psim {

/// Signed 128-bit integer for exact intermediate products.
__extension__ using Int128 = __int128;

/// Simulated time in integer nanoseconds.
using SimTime = std::int64_t;

/// Byte counts and byte sequence numbers. Signed so that queue-length
/// differences need no casts.
using Bytes = std::int64_t;

/// Link rates in bits per second.
using BitRate = std::int64_t;

using FlowId = std::uint32_t;
using NodeId = std::uint32_t;
using PortId = std::uint32_t;

inline constexpr SimTime kNanosPerSecond = 1'000'000'000;

constexpr SimTime nanoseconds(std::int64_t v) { return v; }
constexpr SimTime microseconds(std::int64_t v) { return v * 1'000; }
constexpr SimTime milliseconds(std::int64_t v) { return v * 1'000'000; }

constexpr BitRate gigabits_per_second(std::int64_t v) { return v * 1'000'000'000; }

/// Fixed per-packet header surrogate (IP + TCP without options).
inline constexpr Bytes kHeaderBytes = 40;

/// Serialization delay of `size` bytes on a link of `rate` bits/s, rounded
/// up to the next nanosecond.
constexpr SimTime transmission_time(Bytes size, BitRate rate) {
  const Int128 bits_ns = static_cast<Int128>(size) * 8 * kNanosPerSecond;
  return static_cast<SimTime>((bits_ns + rate - 1) / rate);
}

}  // namespace psim
