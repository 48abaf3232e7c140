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

#include "pulsersim/congestion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace psim {

std::string_view to_string(CcScheme s) {
  switch (s) {
    case CcScheme::kDctcp:
      return "dctcp";
    case CcScheme::kPulser:
      return "pulser";
  }
  return "?";
}

std::optional<CcScheme> parse_cc_scheme(std::string_view name) {
  if (name == "dctcp") return CcScheme::kDctcp;
  if (name == "pulser") return CcScheme::kPulser;
  return std::nullopt;
}

CongestionState CongestionState::initial(const CcParams& params) {
  CongestionState st;
  st.mss = params.mss;
  st.cwnd = params.mss * params.init_cwnd_mss;
  st.cwnd_safe = params.mss * params.cwnd_safe_mss;
  st.alpha = params.alpha_init;
  st.g = params.g;
  st.obs_window_end = st.cwnd;
  st.rto = params.rto_init;
  st.rto_min = params.rto_min;
  st.rto_max = params.rto_max;
  return st;
}

namespace {

void grow_window(CongestionState& st, Bytes newly_acked) {
  if (st.cwnd < st.ssthresh) {
    st.cwnd += std::min(newly_acked, st.mss);
    return;
  }
  // About one mss per window of acked data.
  st.ca_credit += st.mss * newly_acked;
  const Bytes inc = st.ca_credit / st.cwnd;
  st.ca_credit -= inc * st.cwnd;
  st.cwnd += inc;
}

void start_brake_batch(CongestionState& st, Bytes snd_nxt) {
  st.batch_start_seq = snd_nxt;
  st.batch_end_seq = snd_nxt + st.cwnd_safe;
  st.ein_seen_in_batch = false;
}

void release_brake(CongestionState& st) {
  st.braked = false;
  st.cwnd_prev.reset();
  st.ein_seen_in_batch = false;
}

}  // namespace

void dctcp_on_ack(CongestionState& st, const AckSample& ack) {
  const bool frozen = st.braked || st.in_recovery;
  if (ack.newly_acked > 0) {
    st.bytes_acked_in_obs_window += ack.newly_acked;
    if (ack.ecn_echo) st.bytes_marked_ce += ack.newly_acked;
    if (!frozen) {
      if (ack.ecn_echo) {
        st.ssthresh = std::min(st.ssthresh, st.cwnd);
      } else if (ack.cwnd_limited) {
        grow_window(st, ack.newly_acked);
      }
    }
  }

  if (ack.ack_no >= st.obs_window_end && st.bytes_acked_in_obs_window > 0) {
    const double fraction = static_cast<double>(st.bytes_marked_ce) /
                            static_cast<double>(st.bytes_acked_in_obs_window);
    st.alpha = std::clamp((1.0 - st.g) * st.alpha + st.g * fraction, 0.0, 1.0);
    if (st.bytes_marked_ce > 0 && !frozen) {
      const auto cut = static_cast<Bytes>(
          std::llround(static_cast<double>(st.cwnd) * (1.0 - st.alpha / 2.0)));
      st.cwnd = std::max(st.mss, cut);
      st.ssthresh = st.cwnd;
      st.ca_credit = 0;
    }
    st.bytes_acked_in_obs_window = 0;
    st.bytes_marked_ce = 0;
    st.obs_window_end = ack.ack_no + st.cwnd;
  }
}

void pulser_on_ack(CongestionState& st, const AckSample& ack) {
  dctcp_on_ack(st, ack);

  if (ack.ein_echo) {
    if (!st.braked) {
      st.cwnd_prev = st.cwnd;
      st.cwnd = st.cwnd_safe;
      st.braked = true;
      start_brake_batch(st, ack.snd_nxt);
      return;
    }
    // Already braked: the saved window is kept as is.
    st.ein_seen_in_batch = true;
  }

  if (st.braked && ack.ack_no >= st.batch_end_seq) {
    if (!st.ein_seen_in_batch) {
      st.cwnd = *st.cwnd_prev;
      release_brake(st);
    } else {
      start_brake_batch(st, ack.snd_nxt);
    }
  }
}

void on_ack(CcScheme scheme, CongestionState& st, const AckSample& ack) {
  if (scheme == CcScheme::kPulser) {
    pulser_on_ack(st, ack);
  } else {
    dctcp_on_ack(st, ack);
  }
}

void on_fast_retransmit(CongestionState& st, Bytes snd_max) {
  release_brake(st);
  st.ssthresh = std::max(st.cwnd / 2, 2 * st.mss);
  st.cwnd = st.ssthresh;
  st.ca_credit = 0;
  st.in_recovery = true;
  st.recover_seq = snd_max;
}

void on_timeout(CongestionState& st, Bytes snd_una, Bytes snd_max) {
  release_brake(st);
  st.ssthresh = std::max(st.cwnd / 2, 2 * st.mss);
  st.cwnd = st.mss;
  st.ca_credit = 0;
  st.in_recovery = false;
  st.recover_seq = snd_max;
  st.bytes_acked_in_obs_window = 0;
  st.bytes_marked_ce = 0;
  st.obs_window_end = snd_una + st.cwnd;
  st.rto = std::min(st.rto * 2, st.rto_max);
}

void on_rtt_sample(CongestionState& st, SimTime rtt) {
  if (!st.have_rtt) {
    st.srtt = rtt;
    st.rttvar = rtt / 2;
    st.have_rtt = true;
  } else {
    st.rttvar = (3 * st.rttvar + std::abs(st.srtt - rtt)) / 4;
    st.srtt = (7 * st.srtt + rtt) / 8;
  }
  st.rto = std::clamp(st.srtt + 4 * st.rttvar, st.rto_min, st.rto_max);
}

Bytes send_allowed(const CongestionState& st, Bytes bytes_in_flight) {
  const Bytes room = st.cwnd - bytes_in_flight;
  if (room <= 0) return 0;
  return (room / st.mss) * st.mss;
}

}  // namespace psim
