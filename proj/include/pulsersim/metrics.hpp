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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pulsersim/types.hpp"
#include "pulsersim/workload.hpp"

namespace psim {

struct FctRecord {
  FlowId flow_id = 0;
  FlowClass cls = FlowClass::kShort;
  Bytes size = 0;
  SimTime start = 0;
  SimTime finish = 0;

  SimTime fct() const { return finish - start; }
};

struct QlenSample {
  SimTime time;
  Bytes qlen;
};

struct PortTrace {
  std::string port_name;
  std::vector<QlenSample> samples;
};

struct CwndSample {
  SimTime time;
  Bytes cwnd;
  bool braked;
};

struct CwndTrace {
  FlowId conn_id = 0;
  std::vector<CwndSample> samples;
};

struct PortTotals {
  std::uint64_t drops = 0;
  std::uint64_t ce_marks = 0;
  std::uint64_t ein_marks = 0;
};

struct MetricsLog {
  std::vector<FctRecord> fct;  // completed flows, in completion order
  std::uint64_t incomplete_short = 0;
  std::uint64_t incomplete_long = 0;
  std::uint64_t incomplete_incast = 0;
  std::vector<PortTrace> port_traces;
  std::vector<CwndTrace> cwnd_traces;
  PortTotals totals;  // switch ports only

  /// Flows that started before this are left out of the statistics.
  SimTime warmup_end = 0;
};

/// Nearest-rank percentile: the ceil(p*n)-th smallest sample (1-based).
/// Throws std::invalid_argument on an empty list or p outside (0, 1].
SimTime percentile(std::span<const SimTime> samples, double p);

/// FCTs of completed flows of `cls` that started at or after warmup_end.
std::vector<SimTime> fct_samples(const MetricsLog& log, FlowClass cls);

/// Mean over completed long flows of size*8/fct, bits/s. Throws
/// std::invalid_argument when no long flow completed.
double long_flow_throughput(const MetricsLog& log);

struct SummaryRow {
  std::string scheme;
  double load = 0;
  SimTime median_fct_ns = 0;  // short flows
  SimTime p99_fct_ns = 0;     // short flows
  double mean_long_tput_bps = 0;
  std::uint64_t drops = 0;
  std::uint64_t ein_marks = 0;
  std::uint64_t ce_marks = 0;

  friend bool operator==(const SummaryRow&, const SummaryRow&) = default;
};

/// Per-run statistics; empty classes report zero.
SummaryRow summarize(const MetricsLog& log, std::string scheme, double load);

/// Median-of-seeds per statistic for each (scheme, load), in first-seen
/// order. The median is the nearest-rank one, so every value is one of the
/// inputs.
std::vector<SummaryRow> aggregate_seeds(std::span<const SummaryRow> rows);

/// Shortest round-trip decimal form.
std::string format_double(double v);

void write_fct_csv(std::ostream& os, const MetricsLog& log);
void write_throughput_csv(std::ostream& os, const MetricsLog& log);
void write_qlen_csv(std::ostream& os, const MetricsLog& log);
void write_cwnd_csv(std::ostream& os, const MetricsLog& log);
void write_summary_csv(std::ostream& os, std::span<const SummaryRow> rows);
std::vector<SummaryRow> read_summary_csv(std::istream& is);

}  // namespace psim
