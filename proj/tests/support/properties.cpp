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


#include "properties.hpp"

#include <algorithm>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

#include "pulsersim/config.hpp"
#include "pulsersim/congestion.hpp"
#include "pulsersim/ein_detector.hpp"
#include "pulsersim/experiment.hpp"
#include "pulsersim/metrics.hpp"
#include "pulsersim/port.hpp"
#include "pulsersim/workload.hpp"

namespace psim::props {
namespace {

template <typename... Args>
std::string describe(Args&&... args) {
  std::ostringstream os;
  (os << ... << args);
  return os.str();
}

Verdict fail(Verdict v, std::string detail) {
  v.ok = false;
  v.detail = std::move(detail);
  return v;
}

// --- EIN -------------------------------------------------------------------

struct DequeueSample {
  Bytes qlen;
  SimTime t;
};

struct Trace {
  EinParams params;
  std::vector<DequeueSample> samples;
};

Trace random_trace(Rng& rng) {
  Trace tr;
  tr.params.window = static_cast<std::uint32_t>(rng.uniform_int(1, 64));
  tr.params.threshold = rng.uniform01() < 0.5
                            ? 312'500'000
                            : static_cast<GradientBps>(rng.uniform_int(0, 2'000'000'000));
  tr.params.high_water_mark = static_cast<Bytes>(rng.uniform_int(0, 300'000));
  const auto len = rng.uniform_int(1, 400);
  Bytes q = 0;
  SimTime t = 0;
  for (std::uint64_t i = 0; i < len; ++i) {
    if (rng.uniform01() >= 0.1) t += static_cast<SimTime>(rng.uniform_int(1, 2'000));
    const double u = rng.uniform01();
    if (u < 0.05) {
      q = 0;
    } else {
      const auto step = static_cast<Bytes>(rng.uniform_int(0, 3'000));
      q = u < 0.55 ? q + step : std::max<Bytes>(0, q - step);
      q = std::min<Bytes>(q, 400'000);
    }
    tr.samples.push_back({q, t});
  }
  return tr;
}

// Recomputes every gradient and the windowed mean from the full history at
// each step.
class OracleDetector {
 public:
  explicit OracleDetector(EinParams p) : p_(p) { accepted_.push_back({0, 0}); }

  bool step(Bytes qlen, SimTime t) {
    const DequeueSample last = accepted_.back();
    if (t > last.t) {
      const Int128 num = static_cast<Int128>(qlen - last.qlen) * 1'000'000'000;
      const Int128 den = t - last.t;
      Int128 g = num / den;  // C++ division truncates toward zero
      gradients_.push_back(g);
      accepted_.push_back({qlen, t});
    }
    const std::size_t k = std::min<std::size_t>(p_.window, gradients_.size());
    Int128 sum = 0;
    for (std::size_t i = gradients_.size() - k; i < gradients_.size(); ++i) sum += gradients_[i];
    const bool above = k > 0 && sum > static_cast<Int128>(p_.threshold) * static_cast<Int128>(k);
    if (above) {
      prev_ = true;
      return true;
    }
    if (prev_ && qlen > p_.high_water_mark) return true;
    prev_ = false;
    return false;
  }

  bool prev() const { return prev_; }
  std::size_t count() const { return std::min<std::size_t>(p_.window, gradients_.size()); }

 private:
  EinParams p_;
  std::vector<DequeueSample> accepted_;
  std::vector<Int128> gradients_;
  bool prev_ = false;
};

// --- Congestion control ----------------------------------------------------

bool same_state(const CongestionState& a, const CongestionState& b) {
  return a.mss == b.mss && a.cwnd == b.cwnd && a.ssthresh == b.ssthresh &&
         a.ca_credit == b.ca_credit && a.alpha == b.alpha && a.g == b.g &&
         a.bytes_acked_in_obs_window == b.bytes_acked_in_obs_window &&
         a.bytes_marked_ce == b.bytes_marked_ce && a.obs_window_end == b.obs_window_end &&
         a.cwnd_safe == b.cwnd_safe && a.cwnd_prev == b.cwnd_prev && a.braked == b.braked &&
         a.ein_seen_in_batch == b.ein_seen_in_batch && a.batch_start_seq == b.batch_start_seq &&
         a.batch_end_seq == b.batch_end_seq && a.in_recovery == b.in_recovery &&
         a.recover_seq == b.recover_seq && a.rto == b.rto && a.srtt == b.srtt &&
         a.rttvar == b.rttvar && a.have_rtt == b.have_rtt;
}

std::string show(const CongestionState& s) {
  return describe("{cwnd=", s.cwnd, " ssthresh=", s.ssthresh, " alpha=", s.alpha,
                  " braked=", s.braked, " prev=", s.cwnd_prev.value_or(-1), " rto=", s.rto, "}");
}

CcParams random_params(Rng& rng) {
  CcParams p;
  p.init_cwnd_mss = static_cast<std::uint32_t>(rng.uniform_int(1, 20));
  p.cwnd_safe_mss = static_cast<std::uint32_t>(rng.uniform_int(1, 8));
  p.g = 1.0 / static_cast<double>(rng.uniform_int(1, 32));
  p.alpha_init = rng.uniform01();
  return p;
}

enum class Step { kAck, kFastRetransmit, kTimeout, kRtt };

// A loosely TCP-shaped stream of controller inputs, driven by the window of
// the state passed to next().
class InputStream {
 public:
  InputStream(Rng& rng, double p_ecn, double p_ein) : rng_(rng), p_ecn_(p_ecn), p_ein_(p_ein) {}

  Step next(const CongestionState& st, AckSample& ack, SimTime& rtt) {
    const Bytes room = send_allowed(st, nxt_ - una_);
    if (room > 0) nxt_ += st.mss * static_cast<Bytes>(rng_.uniform_int(0, room / st.mss));
    max_ = std::max(max_, nxt_);
    const double u = rng_.uniform01();
    if (u < 0.06) return Step::kFastRetransmit;
    if (u < 0.09) {
      nxt_ = una_;
      return Step::kTimeout;
    }
    if (u < 0.14) {
      rtt = static_cast<SimTime>(rng_.uniform_int(1'000, 5'000'000));
      return Step::kRtt;
    }
    const Bytes flight = nxt_ - una_;
    const Bytes newly =
        flight > 0 && rng_.uniform01() < 0.85
            ? st.mss * static_cast<Bytes>(rng_.uniform_int(1, std::max<Bytes>(1, flight / st.mss)))
            : 0;
    una_ += std::min(newly, flight);
    ack = AckSample{una_, std::min(newly, flight), rng_.uniform01() < p_ecn_,
                    rng_.uniform01() < p_ein_, nxt_, rng_.uniform01() < 0.9};
    return Step::kAck;
  }

  Bytes una() const { return una_; }
  Bytes max() const { return max_; }

 private:
  Rng& rng_;
  double p_ecn_;
  double p_ein_;
  Bytes una_ = 0;
  Bytes nxt_ = 0;
  Bytes max_ = 0;
};

void apply(Step step, CcScheme scheme, CongestionState& st, const AckSample& ack, SimTime rtt,
           const InputStream& in) {
  switch (step) {
    case Step::kAck:
      on_ack(scheme, st, ack);
      if (st.in_recovery && in.una() >= st.recover_seq) st.in_recovery = false;
      break;
    case Step::kFastRetransmit:
      if (!st.in_recovery) on_fast_retransmit(st, in.max());
      break;
    case Step::kTimeout:
      on_timeout(st, in.una(), in.max());
      break;
    case Step::kRtt:
      on_rtt_sample(st, rtt);
      break;
  }
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

Verdict ein_matches_oracle(std::uint64_t traces, std::uint64_t seed) {
  Rng rng(seed);
  Verdict v;
  for (std::uint64_t n = 0; n < traces; ++n) {
    const Trace tr = random_trace(rng);
    EinDetector det(tr.params);
    OracleDetector ref(tr.params);
    for (std::size_t i = 0; i < tr.samples.size(); ++i) {
      const auto& s = tr.samples[i];
      const bool got = det.on_dequeue(s.qlen, s.t);
      const bool want = ref.step(s.qlen, s.t);
      if (got != want || det.asserted() != ref.prev() || det.sample_count() != ref.count()) {
        return fail(v, describe("trace ", n, " step ", i, " (N=", tr.params.window,
                                " thr=", tr.params.threshold, " hwm=", tr.params.high_water_mark,
                                " qlen=", s.qlen, " t=", s.t, "): detector ", got,
                                ", oracle ", want));
      }
    }
    ++v.cases;
  }
  return v;
}

Verdict ein_window_sum_exact(std::uint64_t traces, std::uint64_t seed) {
  Rng rng(seed);
  Verdict v;
  for (std::uint64_t n = 0; n < traces; ++n) {
    const Trace tr = random_trace(rng);
    EinDetector det(tr.params);
    for (std::size_t i = 0; i < tr.samples.size(); ++i) {
      det.on_dequeue(tr.samples[i].qlen, tr.samples[i].t);
      Int128 sum = 0;
      for (GradientBps g : det.samples()) sum += g;
      if (sum != det.window_sum() || det.samples().size() > tr.params.window) {
        return fail(v, describe("trace ", n, " step ", i, ": running sum disagrees"));
      }
    }
    ++v.cases;
  }
  return v;
}

Verdict pulser_equals_dctcp_without_ein(std::uint64_t sequences, std::uint64_t seed) {
  Rng rng(seed);
  Verdict v;
  for (std::uint64_t n = 0; n < sequences; ++n) {
    const CcParams params = random_params(rng);
    CongestionState d = CongestionState::initial(params);
    CongestionState p = d;
    InputStream in(rng, rng.uniform01(), 0.0);
    const auto len = rng.uniform_int(1, 300);
    for (std::uint64_t i = 0; i < len; ++i) {
      AckSample ack;
      SimTime rtt = 0;
      const Step step = in.next(d, ack, rtt);
      apply(step, CcScheme::kDctcp, d, ack, rtt, in);
      apply(step, CcScheme::kPulser, p, ack, rtt, in);
      if (!same_state(d, p)) {
        return fail(v, describe("sequence ", n, " step ", i, ": dctcp ", show(d), " pulser ",
                                show(p)));
      }
    }
    ++v.cases;
  }
  return v;
}

Verdict brake_sound_and_restore_exact(std::uint64_t sequences, std::uint64_t seed) {
  Rng rng(seed);
  Verdict v;
  for (std::uint64_t n = 0; n < sequences; ++n) {
    const CcParams params = random_params(rng);
    CongestionState st = CongestionState::initial(params);
    InputStream in(rng, rng.uniform01(), rng.uniform01() * 0.5);
    std::optional<Bytes> saved;  // window expected back on restore
    const auto len = rng.uniform_int(1, 400);
    for (std::uint64_t i = 0; i < len; ++i) {
      AckSample ack;
      SimTime rtt = 0;
      const Step step = in.next(st, ack, rtt);
      const bool was_braked = st.braked;
      // The window the brake must save: cwnd after the DCTCP part of the ACK.
      CongestionState dctcp_only = st;
      if (step == Step::kAck) dctcp_on_ack(dctcp_only, ack);
      apply(step, CcScheme::kPulser, st, ack, rtt, in);

      const std::string where = describe("sequence ", n, " step ", i, ": ");
      if (st.braked && st.cwnd != st.cwnd_safe) {
        return fail(v, where + "braked with cwnd " + std::to_string(st.cwnd));
      }
      if (!was_braked && st.braked) {
        saved = dctcp_only.cwnd;
        if (st.cwnd_prev != saved) return fail(v, where + "saved window differs at brake entry");
      } else if (was_braked && st.braked) {
        if (st.cwnd_prev != saved) return fail(v, where + "saved window changed while braked");
      } else if (was_braked && !st.braked) {
        if (step == Step::kAck) {
          if (st.cwnd != *saved) {
            return fail(v, where + describe("restored ", st.cwnd, ", saved ", *saved));
          }
        } else if (st.cwnd_prev.has_value()) {
          return fail(v, where + "loss left a saved window behind");
        }
        saved.reset();
      }
    }
    ++v.cases;
  }
  return v;
}

Verdict cc_bounds_hold(std::uint64_t sequences, std::uint64_t seed) {
  Rng rng(seed);
  Verdict v;
  for (std::uint64_t n = 0; n < sequences; ++n) {
    const CcScheme scheme = n % 2 ? CcScheme::kPulser : CcScheme::kDctcp;
    CongestionState st = CongestionState::initial(random_params(rng));
    InputStream in(rng, rng.uniform01(), rng.uniform01());
    const auto len = rng.uniform_int(1, 400);
    for (std::uint64_t i = 0; i < len; ++i) {
      AckSample ack;
      SimTime rtt = 0;
      const Step step = in.next(st, ack, rtt);
      apply(step, scheme, st, ack, rtt, in);
      if (!(st.alpha >= 0.0 && st.alpha <= 1.0) || st.cwnd < st.mss) {
        return fail(v, describe("sequence ", n, " step ", i, ": ", show(st)));
      }
    }
    ++v.cases;
  }
  return v;
}

Verdict port_conserves_and_is_fifo(std::uint64_t scripts, std::uint64_t seed) {
  Rng rng(seed);
  Verdict v;
  for (std::uint64_t n = 0; n < scripts; ++n) {
    PortConfig cfg;
    cfg.buffer_capacity = static_cast<Bytes>(rng.uniform_int(1'500, 200'000));
    cfg.ecn_threshold = static_cast<Bytes>(rng.uniform_int(0, 150'000));
    cfg.high_water_mark = cfg.ecn_threshold + 1;
    OutputPort port(cfg);
    std::deque<Packet> model;
    Bytes model_bytes = 0;
    SimTime now = 0;
    const auto len = rng.uniform_int(1, 500);
    for (std::uint64_t i = 0; i < len; ++i) {
      now += static_cast<SimTime>(rng.uniform_int(0, 2'000));
      const std::string where = describe("script ", n, " op ", i, ": ");
      if (model.empty() || rng.uniform01() < 0.6) {
        const auto payload = static_cast<Bytes>(rng.uniform_int(0, 1'460));
        Packet p = make_data_packet(0, 0, 1, static_cast<Bytes>(i), static_cast<Bytes>(i) + payload,
                                    now);
        if (rng.uniform01() < 0.2) p.flags = kFlagAck;
        const bool fits = model_bytes + p.size <= cfg.buffer_capacity;
        const EnqueueResult r = port.enqueue(p);
        if ((r == EnqueueResult::kAccepted) != fits) return fail(v, where + "tail-drop rule broken");
        if (fits) {
          model.push_back(p);
          model_bytes += p.size;
        }
      } else {
        const Packet got = port.dequeue(now);
        const Packet want = model.front();
        model.pop_front();
        model_bytes -= want.size;
        if (got.seq_lo != want.seq_lo || got.size != want.size) {
          return fail(v, where + "dequeue order differs from enqueue order");
        }
      }
      const PortCounters& c = port.counters();
      if (port.qlen() != model_bytes || port.size() != model.size() ||
          c.enqueued_packets != c.dequeued_packets + model.size() ||
          c.enqueued_bytes != c.dequeued_bytes + model_bytes) {
        return fail(v, where + "conservation broken");
      }
    }
    ++v.cases;
  }
  return v;
}

Verdict percentile_matches_oracle(std::uint64_t lists, std::uint64_t seed) {
  Rng rng(seed);
  Verdict v;
  for (std::uint64_t n = 0; n < lists; ++n) {
    const auto size = rng.uniform_int(1, 300);
    std::vector<SimTime> xs;
    for (std::uint64_t i = 0; i < size; ++i) {
      xs.push_back(static_cast<SimTime>(rng.uniform_int(0, 1'000)));
    }
    const auto k = rng.uniform_int(1, 1'000);  // p = k / 1000
    std::vector<SimTime> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    const std::uint64_t rank = (k * size + 999) / 1'000;  // exact ceil(p * n)
    const SimTime want = sorted[rank - 1];
    const SimTime got = percentile(xs, static_cast<double>(k) / 1'000.0);
    if (got != want) {
      return fail(v, describe("list ", n, " (n=", size, ", p=", k, "/1000): got ", got,
                              ", want ", want));
    }
    ++v.cases;
  }
  return v;
}

Verdict workload_load_calibrated(double tolerance, std::uint64_t seed) {
  Verdict v;
  const Topology topo = Topology::build_leaf_spine({4, 8, 4, gigabits_per_second(10),
                                                    microseconds(10)});
  for (double load : {0.2, 0.4, 0.6, 0.8}) {
    WorkloadConfig cfg;
    cfg.target_load = load;
    cfg.incast_degree = 16;
    cfg.duration = milliseconds(1'000);
    cfg.seed = seed;
    double bytes = 0;
    for (const FlowSpec& f : generate_workload(cfg, topo)) bytes += static_cast<double>(f.size);
    const double offered = bytes / (static_cast<double>(cfg.duration) / 1e9);
    const double target = load * static_cast<double>(topo.host_count()) * 1.25e9;
    const double err = offered / target - 1.0;
    if (std::abs(err) > tolerance) {
      return fail(v, describe("load ", load, ": offered ", offered, " B/s vs target ", target,
                              " B/s (", err * 100.0, "%)"));
    }
    ++v.cases;
  }
  return v;
}

Verdict simulation_replays_identically(const std::string& scratch_dir) {
  Verdict v;
  ExperimentConfig cfg = parse_config(
      "topology.n_leaves = 2\n"
      "topology.hosts_per_leaf = 4\n"
      "topology.n_spines = 2\n"
      "workload.target_load = 0.5\n"
      "workload.incast_degree = 4\n"
      "workload.incast_interval = 1ms\n"
      "run.duration = 6ms\n"
      "run.drain = 4ms\n"
      "run.sample_ports = leaf0.down0, leaf1.up0\n"
      "run.sample_conns = 0, 1, 2\n");
  validate(cfg);
  const std::filesystem::path root(scratch_dir);
  const char* files[] = {"fct.csv", "throughput.csv", "qlen.csv", "cwnd.csv", "summary.csv"};
  for (const CcScheme scheme : {CcScheme::kDctcp, CcScheme::kPulser}) {
    cfg.transport.cc = scheme;
    const auto a = root / describe(to_string(scheme), "-a");
    const auto b = root / describe(to_string(scheme), "-b");
    run_experiment(cfg, 7, a);
    run_experiment(cfg, 7, b);
    for (const char* f : files) {
      const std::string x = read_file(a / f);
      if (x.empty() || x != read_file(b / f)) {
        return fail(v, describe(to_string(scheme), ": ", f, " differs between runs"));
      }
    }
    const std::string fct = read_file(a / "fct.csv");
    if (std::count(fct.begin(), fct.end(), '\n') < 10) {
      return fail(v, "replay scenario completed too few flows to be meaningful");
    }
    ++v.cases;
  }
  return v;
}

}  // namespace psim::props
