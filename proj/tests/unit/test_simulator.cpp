/* Copyright 2026 The collperf Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <random>
#include <sstream>
#include <string>

#include "collperf/error.hpp"
#include "collperf/simulator.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace collperf;
using collperf::testing::fix1;
using collperf::testing::rel_close;

TEST_CASE("schedule shapes") {
  SUBCASE("flat broadcast") {
    const Schedule s = build_schedule(Operation::broadcast, Strategy::flat, 4, 1000);
    REQUIRE(s.transfers.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(s.transfers[i].sender == 0);
      CHECK(s.transfers[i].receiver == static_cast<Rank>(i + 1));
    }
  }
  SUBCASE("segmented chain") {
    const Schedule s =
        build_schedule(Operation::broadcast, Strategy::chain_segmented, 3, 1000, 250);
    CHECK(s.transfers.size() == 8);
    // Segment j leaves rank 1 right after segment j arrived there.
    CHECK(s.transfers[4].sender == 1);
    CHECK(s.transfers[4].depends_on == 0u);
    CHECK(s.transfers[7].depends_on == 3u);
  }
  SUBCASE("binomial broadcast rounds") {
    const Schedule s = build_schedule(Operation::broadcast, Strategy::binomial, 8, 64);
    REQUIRE(s.transfers.size() == 7);
    // Recursive doubling: round r sends into [2^r, 2^(r+1)).
    std::vector<int> round_sizes(3, 0);
    for (const Transfer& t : s.transfers) {
      round_sizes[static_cast<std::size_t>(floor_log2(t.receiver))]++;
      CHECK(t.receiver - t.sender == (1 << floor_log2(t.receiver)));
    }
    CHECK(round_sizes == std::vector<int>{1, 2, 4});
  }
  SUBCASE("binomial scatter bundles") {
    const Schedule s = build_schedule(Operation::scatter, Strategy::binomial, 8, 10);
    std::vector<std::int64_t> root_bundles;
    for (const Transfer& t : s.transfers) {
      if (t.sender == 0) root_bundles.push_back(t.bytes);
    }
    CHECK(root_bundles == std::vector<std::int64_t>{40, 20, 10});
  }
  SUBCASE("direct exchange is rotated") {
    const Schedule s =
        build_schedule(Operation::alltoall, Strategy::direct_exchange, 4, 10);
    CHECK(s.transfers.size() == 12);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(s.transfers[i].receiver == (s.transfers[i].sender + 1) % 4);
    }
  }
  SUBCASE("single process has nothing to send") {
    CHECK(build_schedule(Operation::broadcast, Strategy::chain, 1, 10).transfers.empty());
  }
}

TEST_CASE("unschedulable strategies are rejected") {
  CHECK_THROWS_AS(build_schedule(Operation::broadcast, Strategy::binary, 4, 10), RequestError);
  CHECK_THROWS_AS(build_schedule(Operation::broadcast, Strategy::flat_rendezvous, 4, 10),
                  RequestError);
  CHECK_THROWS_AS(build_schedule(Operation::broadcast, Strategy::chain_segmented, 4, 10),
                  RequestError);
  CHECK_FALSE(is_schedulable(Operation::broadcast, Strategy::binomial_rendezvous));
  CHECK(is_schedulable(Operation::alltoall, Strategy::direct_exchange));
}

TEST_CASE("schedule validation") {
  Schedule s;
  s.procs = 3;
  s.transfers = {{0, 1, 10, std::nullopt}, {1, 2, 10, 0u}};
  CHECK_NOTHROW(s.validate());
  s.transfers[1].depends_on = 1u;
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s.transfers[1] = {2, 1, 10, 0u};  // dependency is not a receive at rank 2
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s.transfers[1] = {1, 1, 10, std::nullopt};
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s.transfers[1] = {1, 3, 10, std::nullopt};
  CHECK_THROWS_AS(s.validate(), ValidationError);
  s.transfers[1] = {1, 2, 0, std::nullopt};
  CHECK_THROWS_AS(s.validate(), ValidationError);
}

TEST_CASE("hand-traced runs on FIX1") {
  const NetworkProfile p = fix1();
  SUBCASE("flat broadcast: sends at 0/20/40, last receive 40 + 20 + 50") {
    const SimResult r = run(build_schedule(Operation::broadcast, Strategy::flat, 4, 1000), p,
                            Semantics::one_port_overlap);
    CHECK(r.completion == 110.0);
    REQUIRE(r.trace.size() == 3);
    CHECK(r.trace[0].send_start == 0.0);
    CHECK(r.trace[1].send_start == 20.0);
    CHECK(r.trace[2].send_start == 40.0);
    CHECK(r.trace[2].recv_end == 110.0);
    CHECK(r.per_rank_busy.at(0) == 60.0);
    CHECK(r.per_rank_busy.at(1) == 0.0);
  }
  SUBCASE("pipelined chain") {
    const SimResult r =
        run(build_schedule(Operation::broadcast, Strategy::chain_segmented, 4, 1000, 250), p,
            Semantics::one_port_overlap);
    CHECK(r.completion == doctest::Approx(225.0).epsilon(1e-12));
  }
  SUBCASE("serialized exchange between two ranks: os + or + L") {
    const SimResult r =
        run(build_schedule(Operation::alltoall, Strategy::direct_exchange, 2, 1000), p,
            Semantics::serialized);
    CHECK(r.completion == doctest::Approx(77.0).epsilon(1e-12));
    CHECK(r.per_rank_busy.at(0) == doctest::Approx(27.0));
  }
  SUBCASE("binomial with five ranks departs from the table") {
    // Root sends at 0/20/40 to ranks 1/2/4; rank 1 relays to 3 at 70.
    const SimResult r = run(build_schedule(Operation::broadcast, Strategy::binomial, 5, 1000),
                            p, Semantics::one_port_overlap);
    CHECK(r.completion == doctest::Approx(140.0).epsilon(1e-12));
  }
  SUBCASE("single process") {
    const SimResult r = run(build_schedule(Operation::broadcast, Strategy::flat, 1, 1000), p,
                            Semantics::one_port_overlap);
    CHECK(r.completion == 0.0);
  }
}

TEST_CASE("simulator reproduces the closed forms") {
  std::mt19937_64 rng(31);
  std::vector<NetworkProfile> profiles{fix1()};
  for (int i = 0; i < 3; ++i) profiles.push_back(collperf::testing::random_monotone_profile(rng));
  for (const NetworkProfile& p : profiles) {
    for (std::int64_t P = 2; P <= 64; ++P) {
      const bool pow2 = (P & (P - 1)) == 0;
      for (std::int64_t m : {1, 64, 4096, 1 << 18}) {
        const std::int64_t s = std::max<std::int64_t>(1, m / 4);
        const auto check = [&](Operation op, Strategy st, std::optional<std::int64_t> seg) {
          const double sim =
              run(build_schedule(op, st, P, m, seg), p, Semantics::one_port_overlap).completion;
          const double model = predict(p, {op, st, P, m, seg}).total;
          CHECK_MESSAGE(rel_close(sim, model, 1e-9),
                        to_string(op) << " " << to_string(st) << " P=" << P << " m=" << m);
        };
        check(Operation::broadcast, Strategy::flat, std::nullopt);
        check(Operation::broadcast, Strategy::flat_segmented, s);
        check(Operation::broadcast, Strategy::chain, std::nullopt);
        check(Operation::broadcast, Strategy::chain_segmented, s);
        check(Operation::scatter, Strategy::flat, std::nullopt);
        check(Operation::scatter, Strategy::chain, std::nullopt);
        if (pow2) {
          check(Operation::broadcast, Strategy::binomial, std::nullopt);
          check(Operation::broadcast, Strategy::binomial_segmented, s);
          check(Operation::scatter, Strategy::binomial, std::nullopt);
        }
        const AlltoallBounds b = alltoall_bounds(p, P, m);
        const Schedule ex = build_schedule(Operation::alltoall, Strategy::direct_exchange, P, m);
        CHECK(rel_close(run(ex, p, Semantics::one_port_overlap).completion, b.lower.total, 1e-9));
        CHECK(rel_close(run(ex, p, Semantics::serialized).completion, b.upper.total, 1e-9));
      }
    }
  }
}

TEST_CASE("runs are deterministic") {
  const NetworkProfile p = fix1();
  const Schedule s = build_schedule(Operation::broadcast, Strategy::binomial_segmented, 13, 5000, 700);
  for (Semantics sem : {Semantics::one_port_overlap, Semantics::serialized}) {
    const SimResult a = run(s, p, sem);
    const SimResult b = run(s, p, sem);
    CHECK(a.completion == b.completion);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
      CHECK(a.trace[i].send_start == b.trace[i].send_start);
      CHECK(a.trace[i].recv_end == b.trace[i].recv_end);
    }
    CHECK(a.per_rank_busy == b.per_rank_busy);
  }
}

TEST_CASE("completion never drops when a parameter grows") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> grow(1.0, 1.5);
  std::uniform_int_distribution<int> pick(0, 3);
  const std::vector<std::pair<Operation, Strategy>> cases{
      {Operation::broadcast, Strategy::flat},     {Operation::broadcast, Strategy::chain},
      {Operation::broadcast, Strategy::binomial}, {Operation::scatter, Strategy::binomial},
      {Operation::scatter, Strategy::chain},      {Operation::alltoall, Strategy::direct_exchange}};
  for (int trial = 0; trial < 40; ++trial) {
    const NetworkProfile base = collperf::testing::random_monotone_profile(rng);
    std::vector<PLogPSample> samples(base.samples().begin(), base.samples().end());
    double latency = base.latency();
    const int which = pick(rng);
    if (which == 3) {
      latency *= grow(rng);
    } else {
      for (PLogPSample& s : samples) {
        double& v = which == 0 ? s.g : which == 1 ? s.os : s.or_;
        v *= grow(rng);
      }
    }
    const NetworkProfile inflated("inflated", latency, samples);
    for (const auto& [op, st] : cases) {
      for (std::int64_t P : {3, 6, 11}) {
        const Schedule s = build_schedule(op, st, P, 3000);
        for (Semantics sem : {Semantics::one_port_overlap, Semantics::serialized}) {
          CHECK(run(s, inflated, sem).completion >= run(s, base, sem).completion);
        }
      }
    }
  }
}

TEST_CASE("trace CSV has one row per transfer") {
  const NetworkProfile p = fix1();
  const Schedule s = build_schedule(Operation::broadcast, Strategy::chain_segmented, 4, 1000, 250);
  const SimResult r = run(s, p, Semantics::one_port_overlap);
  std::ostringstream out;
  write_trace_csv(out, s, r);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "transfer,sender,receiver,bytes,send_start_us,recv_end_us");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == static_cast<int>(s.transfers.size()));
  CHECK(out.str().find("\n0,0,1,250,0,62.5\n") != std::string::npos);
}
