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


#include <sstream>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "pulsersim/metrics.hpp"
#include "support/properties.hpp"

using namespace psim;

namespace {

FctRecord rec(FlowId id, FlowClass cls, Bytes size, SimTime start, SimTime finish) {
  return FctRecord{id, cls, size, start, finish};
}

std::vector<SimTime> one_to(SimTime n) {
  std::vector<SimTime> v;
  for (SimTime i = n; i >= 1; --i) v.push_back(i);  // reversed on purpose
  return v;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("nearest-rank percentiles on 1..100") {
    const auto v = one_to(100);
    CHECK(percentile(v, 0.5) == 50);
    CHECK(percentile(v, 0.99) == 99);
    CHECK(percentile(v, 1.0) == 100);
    CHECK(percentile(v, 0.01) == 1);
    CHECK(percentile(v, 0.07) == 7);
    CHECK(percentile(v, 0.999) == 100);
  }

  TEST_CASE("nearest-rank percentiles on short lists") {
    CHECK(percentile(std::vector<SimTime>{42}, 0.99) == 42);
    const std::vector<SimTime> v{10, 30, 20};
    CHECK(percentile(v, 0.5) == 20);
    CHECK(percentile(v, 0.34) == 20);
    CHECK(percentile(v, 0.33) == 10);
  }

  TEST_CASE("percentile rejects empty input and ranks outside (0, 1]") {
    const std::vector<SimTime> empty;
    CHECK_THROWS_AS(percentile(empty, 0.5), std::invalid_argument);
    const auto v = one_to(10);
    CHECK_THROWS_AS(percentile(v, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(percentile(v, 1.01), std::invalid_argument);
  }

  TEST_CASE("percentile agrees with an exact integer-rank oracle") {
    const auto v = props::percentile_matches_oracle(3'000, 31);
    INFO(v.detail);
    CHECK(v.ok);
  }

  TEST_CASE("throughput of 1 MB in 1 ms is 8 Gb/s") {
    MetricsLog log;
    log.fct.push_back(rec(0, FlowClass::kLong, 1'000'000, 0, milliseconds(1)));
    CHECK(long_flow_throughput(log) == doctest::Approx(8e9));
    log.fct.push_back(rec(1, FlowClass::kLong, 1'000'000, 0, milliseconds(2)));
    CHECK(long_flow_throughput(log) == doctest::Approx(6e9));  // mean of per-flow rates
  }

  TEST_CASE("throughput without a long flow throws") {
    MetricsLog log;
    log.fct.push_back(rec(0, FlowClass::kShort, 10'000, 0, 1'000));
    CHECK_THROWS_AS(long_flow_throughput(log), std::invalid_argument);
  }

  TEST_CASE("warm-up flows are left out") {
    MetricsLog log;
    log.warmup_end = 1'000;
    log.fct.push_back(rec(0, FlowClass::kShort, 10, 999, 100'000));
    log.fct.push_back(rec(1, FlowClass::kShort, 10, 1'000, 3'000));
    log.fct.push_back(rec(2, FlowClass::kIncast, 10, 2'000, 3'000));
    const auto s = fct_samples(log, FlowClass::kShort);
    REQUIRE(s.size() == 1);
    CHECK(s[0] == 2'000);
    const SummaryRow row = summarize(log, "dctcp", 0.4);
    CHECK(row.median_fct_ns == 2'000);
    CHECK(row.p99_fct_ns == 2'000);
    CHECK(row.mean_long_tput_bps == 0.0);
  }

  TEST_CASE("summary carries the switch totals") {
    MetricsLog log;
    log.totals = PortTotals{3, 5, 7};
    const SummaryRow row = summarize(log, "pulser", 0.6);
    CHECK(row.scheme == "pulser");
    CHECK(row.drops == 3);
    CHECK(row.ce_marks == 5);
    CHECK(row.ein_marks == 7);
  }

  TEST_CASE("summary csv round-trips exactly") {
    std::vector<SummaryRow> rows{{"dctcp", 0.6, 306'123, 1'460'000, 1.0312345678901234e9, 12, 0, 40},
                                 {"pulser", 0.1, 1, 2, 0.1, 0, 99, 0}};
    std::stringstream ss;
    write_summary_csv(ss, rows);
    CHECK(read_summary_csv(ss) == rows);
  }

  TEST_CASE("summary csv rejects a wrong header and short rows") {
    std::istringstream bad_header("scheme,load\n");
    CHECK_THROWS_AS(read_summary_csv(bad_header), std::runtime_error);
    std::istringstream short_row(
        "scheme,load,median_fct_ns,p99_fct_ns,mean_long_tput_bps,drops,ein_marks,ce_marks\n"
        "dctcp,0.6,1\n");
    CHECK_THROWS_AS(read_summary_csv(short_row), std::runtime_error);
  }

  TEST_CASE("aggregating one seed is the identity") {
    const std::vector<SummaryRow> rows{{"dctcp", 0.6, 10, 20, 30.0, 1, 2, 3}};
    CHECK(aggregate_seeds(rows) == rows);
  }

  TEST_CASE("aggregation takes the per-field median of each group") {
    const std::vector<SummaryRow> rows{
        {"dctcp", 0.6, 10, 500, 3.0, 9, 0, 1},  {"pulser", 0.6, 7, 7, 7.0, 7, 7, 7},
        {"dctcp", 0.6, 30, 100, 1.0, 3, 0, 2},  {"dctcp", 0.6, 20, 300, 2.0, 6, 0, 3},
        {"dctcp", 0.2, 1, 1, 1.0, 1, 1, 1}};
    const auto agg = aggregate_seeds(rows);
    REQUIRE(agg.size() == 3);
    CHECK(agg[0] == SummaryRow{"dctcp", 0.6, 20, 300, 2.0, 6, 0, 2});
    CHECK(agg[1].scheme == "pulser");
    CHECK(agg[2].load == 0.2);
  }

  TEST_CASE("an even number of seeds takes the lower median") {
    const std::vector<SummaryRow> rows{{"dctcp", 0.6, 40, 0, 0, 0, 0, 0},
                                       {"dctcp", 0.6, 10, 0, 0, 0, 0, 0}};
    CHECK(aggregate_seeds(rows)[0].median_fct_ns == 10);
  }

  TEST_CASE("csv headers are fixed") {
    MetricsLog log;
    log.fct.push_back(rec(4, FlowClass::kLong, 1'000'000, 100, 1'000'100));
    log.port_traces.push_back(PortTrace{"leaf0.down0", {{0, 0}, {10, 1'500}}});
    log.cwnd_traces.push_back(CwndTrace{4, {{5, 14'600, false}, {9, 5'840, true}}});
    std::ostringstream fct, tput, qlen, cwnd;
    write_fct_csv(fct, log);
    write_throughput_csv(tput, log);
    write_qlen_csv(qlen, log);
    write_cwnd_csv(cwnd, log);
    CHECK(fct.str() ==
          "flow_id,class,size_bytes,start_ns,finish_ns,fct_ns\n4,long,1000000,100,1000100,1000000\n");
    CHECK(tput.str() == "flow_id,bits_per_second\n4,8e+09\n");
    CHECK(qlen.str() == "port_id,time_ns,qlen_bytes\nleaf0.down0,0,0\nleaf0.down0,10,1500\n");
    CHECK(cwnd.str() == "conn_id,time_ns,cwnd_bytes,braked\n4,5,14600,0\n4,9,5840,1\n");
  }

  TEST_CASE("format_double is shortest round-trip") {
    CHECK(format_double(0.6) == "0.6");
    CHECK(format_double(8e9) == "8e+09");
    CHECK(format_double(94900) == "94900");
    CHECK(std::stod(format_double(0.1 + 0.2)) == 0.1 + 0.2);
  }
}
