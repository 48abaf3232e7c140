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
#include <limits>
#include <optional>
#include <string_view>

#include "pulsersim/types.hpp"

namespace psim {

enum class CcScheme : std::uint8_t { kDctcp, kPulser };

std::string_view to_string(CcScheme s);
std::optional<CcScheme> parse_cc_scheme(std::string_view name);

struct CcParams {
  Bytes mss = 1460;
  std::uint32_t init_cwnd_mss = 10;
  std::uint32_t cwnd_safe_mss = 4;
  double g = 1.0 / 16.0;
  double alpha_init = 1.0;
  SimTime rto_init = milliseconds(1);
  SimTime rto_min = microseconds(200);
  SimTime rto_max = milliseconds(100);
};

enum class CcPhase : std::uint8_t { kSlowStart, kCongestionAvoidance };

inline constexpr Bytes kUnboundedSsthresh = std::numeric_limits<Bytes>::max() / 4;

/// Per-connection sender congestion state shared by DCTCP and Pulser.
struct CongestionState {
  Bytes mss = 1460;
  Bytes cwnd = 0;
  Bytes ssthresh = kUnboundedSsthresh;
  Bytes ca_credit = 0;  // congestion-avoidance remainder, in mss*bytes units

  // DCTCP observation window.
  double alpha = 1.0;
  double g = 1.0 / 16.0;
  Bytes bytes_acked_in_obs_window = 0;
  Bytes bytes_marked_ce = 0;
  Bytes obs_window_end = 0;

  // Pulser brake.
  Bytes cwnd_safe = 0;
  std::optional<Bytes> cwnd_prev;  // window saved at brake entry
  bool braked = false;
  bool ein_seen_in_batch = false;
  Bytes batch_start_seq = 0;
  Bytes batch_end_seq = 0;

  // Loss recovery.
  bool in_recovery = false;
  Bytes recover_seq = 0;

  // Retransmission timer.
  SimTime rto = milliseconds(1);
  SimTime rto_min = microseconds(200);
  SimTime rto_max = milliseconds(100);
  SimTime srtt = 0;
  SimTime rttvar = 0;
  bool have_rtt = false;

  CcPhase phase() const {
    return cwnd < ssthresh ? CcPhase::kSlowStart : CcPhase::kCongestionAvoidance;
  }

  static CongestionState initial(const CcParams& params);
};

/// One ACK as seen by the congestion controller.
struct AckSample {
  Bytes ack_no = 0;
  Bytes newly_acked = 0;  // 0 for a duplicate ACK
  bool ecn_echo = false;
  bool ein_echo = false;
  Bytes snd_nxt = 0;  // sender's next new sequence at ACK time
  /// The window, not the sender or its host, limited the flight that this
  /// ACK covers. The window only grows when set.
  bool cwnd_limited = true;
};

/// DCTCP: accrue acked/marked bytes over one window of data; at the window
/// boundary fold the marked fraction into alpha and, if anything was marked,
/// cut cwnd by alpha/2. Slow start / congestion avoidance otherwise. While
/// braked the window is frozen but alpha bookkeeping continues.
void dctcp_on_ack(CongestionState& st, const AckSample& ack);

/// DCTCP plus the incast brake: the first EIN echo saves cwnd and drops it to
/// cwnd_safe; a subsequent batch of cwnd_safe bytes acked without any EIN
/// echo restores the saved window.
void pulser_on_ack(CongestionState& st, const AckSample& ack);

void on_ack(CcScheme scheme, CongestionState& st, const AckSample& ack);

/// Third duplicate ACK. Halves the window and ends any brake.
void on_fast_retransmit(CongestionState& st, Bytes snd_max);

/// Retransmission timer expiry. Collapses cwnd to one segment, ends any brake
/// and discards the saved window, backs the timer off.
void on_timeout(CongestionState& st, Bytes snd_una, Bytes snd_max);

/// Folds one round-trip measurement into srtt/rttvar and recomputes rto.
void on_rtt_sample(CongestionState& st, SimTime rtt);

/// Bytes the sender may put on the wire now, in whole segments.
Bytes send_allowed(const CongestionState& st, Bytes bytes_in_flight);

}  // namespace psim
