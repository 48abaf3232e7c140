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

#include "pulsersim/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <type_traits>

namespace psim {

SimTime percentile(std::span<const SimTime> samples, double p) {
  if (samples.empty()) throw std::invalid_argument("percentile of an empty sample list");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("percentile rank must be in (0, 1]");
  std::vector<SimTime> sorted(samples.begin(), samples.end());
  const auto n = static_cast<double>(sorted.size());
  // p is usually a decimal such as 0.07, whose product with n can land a few
  // ulps above an integer; snap those before taking the ceiling.
  const double x = p * n;
  const double nearest = std::round(x);
  const double exact = std::fabs(x - nearest) <= 1e-9 * std::max(1.0, x) ? nearest : std::ceil(x);
  auto rank = static_cast<std::size_t>(exact);
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                   sorted.end());
  return sorted[rank - 1];
}

std::vector<SimTime> fct_samples(const MetricsLog& log, FlowClass cls) {
  std::vector<SimTime> out;
  for (const FctRecord& r : log.fct) {
    if (r.cls == cls && r.start >= log.warmup_end) out.push_back(r.fct());
  }
  return out;
}

double long_flow_throughput(const MetricsLog& log) {
  double sum = 0;
  std::size_t n = 0;
  for (const FctRecord& r : log.fct) {
    if (r.cls != FlowClass::kLong || r.start < log.warmup_end) continue;
    sum += static_cast<double>(r.size) * 8.0 * kNanosPerSecond / static_cast<double>(r.fct());
    ++n;
  }
  if (n == 0) throw std::invalid_argument("no completed long flow");
  return sum / static_cast<double>(n);
}

SummaryRow summarize(const MetricsLog& log, std::string scheme, double load) {
  SummaryRow row;
  row.scheme = std::move(scheme);
  row.load = load;
  const auto shorts = fct_samples(log, FlowClass::kShort);
  if (!shorts.empty()) {
    row.median_fct_ns = percentile(shorts, 0.5);
    row.p99_fct_ns = percentile(shorts, 0.99);
  }
  if (!fct_samples(log, FlowClass::kLong).empty()) {
    row.mean_long_tput_bps = long_flow_throughput(log);
  }
  row.drops = log.totals.drops;
  row.ein_marks = log.totals.ein_marks;
  row.ce_marks = log.totals.ce_marks;
  return row;
}

namespace {

template <typename T>
T median_of(std::vector<T> v) {
  const std::size_t rank = (v.size() + 1) / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(rank - 1), v.end());
  return v[rank - 1];
}

}  // namespace

std::vector<SummaryRow> aggregate_seeds(std::span<const SummaryRow> rows) {
  std::vector<SummaryRow> out;
  std::vector<std::vector<const SummaryRow*>> groups;
  for (const SummaryRow& r : rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const SummaryRow& o) {
      return o.scheme == r.scheme && o.load == r.load;
    });
    if (it == out.end()) {
      out.push_back(SummaryRow{r.scheme, r.load});
      groups.emplace_back();
      it = out.end() - 1;
    }
    groups[static_cast<std::size_t>(it - out.begin())].push_back(&r);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& g = groups[i];
    auto collect = [&](auto field) {
      using V = std::decay_t<decltype((*g.front()).*field)>;
      std::vector<V> v;
      for (const SummaryRow* r : g) v.push_back(r->*field);
      return median_of(std::move(v));
    };
    out[i].median_fct_ns = collect(&SummaryRow::median_fct_ns);
    out[i].p99_fct_ns = collect(&SummaryRow::p99_fct_ns);
    out[i].mean_long_tput_bps = collect(&SummaryRow::mean_long_tput_bps);
    out[i].drops = collect(&SummaryRow::drops);
    out[i].ein_marks = collect(&SummaryRow::ein_marks);
    out[i].ce_marks = collect(&SummaryRow::ce_marks);
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_fct_csv(std::ostream& os, const MetricsLog& log) {
  os << "flow_id,class,size_bytes,start_ns,finish_ns,fct_ns\n";
  for (const FctRecord& r : log.fct) {
    os << r.flow_id << ',' << to_string(r.cls) << ',' << r.size << ',' << r.start << ','
       << r.finish << ',' << r.fct() << '\n';
  }
}

void write_throughput_csv(std::ostream& os, const MetricsLog& log) {
  os << "flow_id,bits_per_second\n";
  for (const FctRecord& r : log.fct) {
    if (r.cls != FlowClass::kLong) continue;
    const double bps =
        static_cast<double>(r.size) * 8.0 * kNanosPerSecond / static_cast<double>(r.fct());
    os << r.flow_id << ',' << format_double(bps) << '\n';
  }
}

void write_qlen_csv(std::ostream& os, const MetricsLog& log) {
  os << "port_id,time_ns,qlen_bytes\n";
  for (const PortTrace& t : log.port_traces) {
    for (const QlenSample& s : t.samples) {
      os << t.port_name << ',' << s.time << ',' << s.qlen << '\n';
    }
  }
}

void write_cwnd_csv(std::ostream& os, const MetricsLog& log) {
  os << "conn_id,time_ns,cwnd_bytes,braked\n";
  for (const CwndTrace& t : log.cwnd_traces) {
    for (const CwndSample& s : t.samples) {
      os << t.conn_id << ',' << s.time << ',' << s.cwnd << ',' << (s.braked ? 1 : 0) << '\n';
    }
  }
}

static constexpr const char* kSummaryHeader =
    "scheme,load,median_fct_ns,p99_fct_ns,mean_long_tput_bps,drops,ein_marks,ce_marks";

void write_summary_csv(std::ostream& os, std::span<const SummaryRow> rows) {
  os << kSummaryHeader << '\n';
  for (const SummaryRow& r : rows) {
    os << r.scheme << ',' << format_double(r.load) << ',' << r.median_fct_ns << ','
       << r.p99_fct_ns << ',' << format_double(r.mean_long_tput_bps) << ',' << r.drops << ','
       << r.ein_marks << ',' << r.ce_marks << '\n';
  }
}

namespace {

template <typename T>
T parse_summary_field(std::string_view text, std::size_t line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::runtime_error("summary csv line " + std::to_string(line) + ": bad value '" +
                             std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::vector<SummaryRow> read_summary_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kSummaryHeader) {
    throw std::runtime_error("summary csv line 1: unexpected header");
  }
  std::vector<SummaryRow> rows;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string_view> c;
    std::string_view rest = line;
    while (true) {
      const auto comma = rest.find(',');
      c.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (c.size() != 8) {
      throw std::runtime_error("summary csv line " + std::to_string(lineno) +
                               ": expected 8 columns");
    }
    SummaryRow r;
    r.scheme = std::string(c[0]);
    r.load = parse_summary_field<double>(c[1], lineno);
    r.median_fct_ns = parse_summary_field<SimTime>(c[2], lineno);
    r.p99_fct_ns = parse_summary_field<SimTime>(c[3], lineno);
    r.mean_long_tput_bps = parse_summary_field<double>(c[4], lineno);
    r.drops = parse_summary_field<std::uint64_t>(c[5], lineno);
    r.ein_marks = parse_summary_field<std::uint64_t>(c[6], lineno);
    r.ce_marks = parse_summary_field<std::uint64_t>(c[7], lineno);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace psim
