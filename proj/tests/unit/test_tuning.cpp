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

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "collperf/error.hpp"
#include "collperf/tuning.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace collperf;
using collperf::testing::fix1;
using collperf::testing::random_monotone_profile;

namespace {

MeasurementSet planted(const NetworkProfile& p, double gamma) {
  MeasurementSet set{"planted", {}};
  for (std::int64_t P : {8, 16, 24}) {
    for (std::int64_t m : {1024, 65536, 1048576}) {
      const AlltoallBounds b = alltoall_bounds(p, P, m);
      set.records.push_back(
          {P, m, b.lower.total + gamma * (b.upper.total - b.lower.total)});
    }
  }
  return set;
}

}  // namespace

TEST_CASE("dyadic candidates") {
  CHECK(dyadic_segment_candidates(1) == std::vector<std::int64_t>{1});
  CHECK(dyadic_segment_candidates(1000) ==
        std::vector<std::int64_t>{1000, 500, 250, 125, 63, 32, 16, 8, 4, 2});
  CHECK(dyadic_segment_candidates(1024).size() == 11);
  for (std::int64_t m = 1; m < 3000; m += 7) {
    CHECK(dyadic_segment_candidates(m) == collperf::testing::reference_dyadic(m));
  }
  CHECK_THROWS_AS(dyadic_segment_candidates(0), RequestError);
}

TEST_CASE("segment optimizer agrees with exhaustive dyadic scan") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::int64_t> procs(2, 128);
  std::uniform_int_distribution<std::int64_t> bytes(1, 1 << 22);
  const Strategy segmented[] = {Strategy::flat_segmented, Strategy::chain_segmented,
                                Strategy::binomial_segmented};
  std::vector<NetworkProfile> profiles{fix1()};
  for (int i = 0; i < 20; ++i) profiles.push_back(random_monotone_profile(rng));
  for (const NetworkProfile& p : profiles) {
    for (int trial = 0; trial < 10; ++trial) {
      const std::int64_t P = procs(rng), m = bytes(rng);
      for (Strategy st : segmented) {
        const SegmentChoice got = optimize_segment(p, Operation::broadcast, st, P, m, false);
        std::int64_t best = 0;
        double best_t = 0;
        for (std::int64_t s : collperf::testing::reference_dyadic(m)) {
          const double t = predict_broadcast(p, st, P, m, s).total;
          if (best == 0 || t < best_t) {
            best = s;
            best_t = t;
          }
        }
        CHECK(got.segment_bytes == best);
        CHECK(got.predicted.total == best_t);
        const SegmentChoice refined = optimize_segment(p, Operation::broadcast, st, P, m, true);
        CHECK(refined.predicted.total <= got.predicted.total);
        CHECK(refined.segment_bytes >= 1);
        CHECK(refined.segment_bytes <= m);
        CHECK(refined.candidates_examined >= got.candidates_examined);
      }
    }
  }
}

TEST_CASE("segment optimizer on FIX1 pipelined chain") {
  const NetworkProfile p = fix1();
  const SegmentChoice c =
      optimize_segment(p, Operation::broadcast, Strategy::chain_segmented, 8, 1 << 20, false);
  CHECK(c.candidates_examined == 21);
  CHECK(c.predicted.request.segment_bytes == c.segment_bytes);
  CHECK(c.segment_bytes < (1 << 20));
  CHECK_THROWS_AS(optimize_segment(p, Operation::broadcast, Strategy::chain, 8, 1000, false),
                  RequestError);
  CHECK_THROWS_AS(
      optimize_segment(p, Operation::scatter, Strategy::chain_segmented, 8, 1000, false),
      RequestError);
}

TEST_CASE("strategy selection") {
  const NetworkProfile p = fix1();
  SUBCASE("tiny scatter prefers the flat tree") {
    const StrategyChoice c = select_strategy(p, Operation::scatter, 8, 1, true);
    CHECK(c.strategy == Strategy::flat);
    CHECK(c.predicted.total == doctest::Approx(7 * 10.01 + 50));
  }
  SUBCASE("two processes tie, catalog order wins") {
    CHECK(select_strategy(p, Operation::scatter, 2, 1000, true).strategy == Strategy::flat);
    CHECK(select_strategy(p, Operation::broadcast, 2, 1000, false).strategy == Strategy::flat);
  }
  SUBCASE("large broadcasts favour the pipelined chain over binomial") {
    const auto ranked = rank_strategies(p, Operation::broadcast, 40, 1 << 20, true);
    REQUIRE(ranked.size() == 10);
    const auto find = [&](Strategy s) {
      return std::find_if(ranked.begin(), ranked.end(),
                          [&](const StrategyChoice& c) { return c.strategy == s; })
          ->predicted.total;
    };
    CHECK(find(Strategy::chain_segmented) < find(Strategy::binomial));
  }
  SUBCASE("segmented strategies drop out without auto segmentation") {
    CHECK(rank_strategies(p, Operation::broadcast, 8, 1000, false).size() == 7);
    CHECK(rank_strategies(p, Operation::scatter, 8, 1000, false).size() == 3);
  }
  CHECK_THROWS_AS(select_strategy(p, Operation::alltoall, 8, 1000, true), RequestError);
}

TEST_CASE("selection equals the brute-force argmin") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::int64_t> procs(1, 200);
  std::uniform_int_distribution<int> logm(0, 22);
  for (int trial = 0; trial < 200; ++trial) {
    const NetworkProfile p = random_monotone_profile(rng);
    const std::int64_t P = procs(rng);
    const std::int64_t m = std::max<std::int64_t>(1, (std::int64_t{1} << logm(rng)) - trial);
    for (Operation op : {Operation::broadcast, Operation::scatter}) {
      Strategy best = Strategy::flat;
      double best_t = std::numeric_limits<double>::infinity();
      for (Strategy s : catalog(op)) {
        double t;
        if (is_segmented(s)) {
          t = std::numeric_limits<double>::infinity();
          for (std::int64_t seg : collperf::testing::reference_dyadic(m)) {
            t = std::min(t, predict(p, {op, s, P, m, seg}).total);
          }
        } else {
          t = predict(p, {op, s, P, m, std::nullopt}).total;
        }
        if (t < best_t) {
          best = s;
          best_t = t;
        }
      }
      const StrategyChoice got = select_strategy(p, op, P, m, true);
      CHECK(got.strategy == best);
      CHECK(got.predicted.total == best_t);
      CHECK(select_strategy(p, op, P, m, true).strategy == got.strategy);
    }
  }
}

TEST_CASE("gamma fit recovers planted values") {
  const NetworkProfile p = fix1();
  for (double gamma : {0.0, 0.2, 1.0, 1.5}) {
    const GammaModel g = fit_gamma(p, planted(p, gamma));
    CHECK(g.gamma == doctest::Approx(gamma).epsilon(1e-9));
    CHECK(g.residual < 1e-6);
    CHECK(g.n_points == 9);
    CHECK(g.profile_name == "fix1");
  }
}

TEST_CASE("gamma fit matches a grid search") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> noise(0.98, 1.02);
  std::uniform_real_distribution<double> gamma(-0.5, 2.5);
  for (int trial = 0; trial < 20; ++trial) {
    const NetworkProfile p = random_monotone_profile(rng);
    MeasurementSet set = planted(p, gamma(rng));
    std::vector<collperf::testing::Lo_Hi> bounds;
    std::vector<double> times;
    for (MeasurementRecord& r : set.records) {
      r.time_us *= noise(rng);
      bounds.push_back(collperf::testing::reference_alltoall(p, r.procs, r.bytes));
      times.push_back(r.time_us);
    }
    const double grid = collperf::testing::grid_search_gamma(bounds, times, -4.0, 6.0);
    CHECK(std::abs(fit_gamma(p, set).gamma - grid) <= 1e-3);
  }
}

TEST_CASE("gamma is invariant under common rescaling") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> noise(0.9, 1.1);
  const NetworkProfile p = fix1();
  MeasurementSet set = planted(p, 0.7);
  for (MeasurementRecord& r : set.records) r.time_us *= noise(rng);
  for (double c : {0.5, 3.0, 1000.0}) {
    MeasurementSet scaled_set = set;
    for (MeasurementRecord& r : scaled_set.records) r.time_us *= c;
    const GammaModel a = fit_gamma(p, set);
    const GammaModel b = fit_gamma(collperf::testing::scaled(p, c), scaled_set);
    CHECK(b.gamma == doctest::Approx(a.gamma).epsilon(1e-9));
    CHECK(b.residual == doctest::Approx(a.residual * c).epsilon(1e-9));
  }
}

TEST_CASE("gamma fit rejects degenerate input") {
  const NetworkProfile p = fix1();
  CHECK_THROWS_AS(fit_gamma(p, MeasurementSet{"empty", {}}), ValidationError);
  CHECK_THROWS_AS(fit_gamma(p, MeasurementSet{"single", {{1, 1000, 5.0}, {1, 10, 2.0}}}),
                  ValidationError);
}

TEST_CASE("measurement files") {
  SUBCASE("round trip") {
    const MeasurementSet set{"net", {{8, 1024, 123.25}, {16, 65536, 0.1}, {24, 1, 1e6}}};
    CHECK(parse_measurements(format_measurements(set), "net") == set);
  }
  SUBCASE("file label is the stem") {
    const auto path = std::filesystem::temp_directory_path() / "collperf_fast.csv";
    save_measurements({"x", {{2, 3, 4.5}}}, path);
    const MeasurementSet got = load_measurements(path);
    CHECK(got.network_label == "collperf_fast");
    CHECK(got.records == std::vector<MeasurementRecord>{{2, 3, 4.5}});
    std::filesystem::remove(path);
  }
  SUBCASE("positional errors") {
    const auto where = [](std::string_view text) {
      try {
        parse_measurements(text, "t");
      } catch (const ParseError& e) {
        return e.where();
      }
      return std::string("no error");
    };
    CHECK(where("procs,bytes,time_us\n8,1024,12\n8,x,3\n") == "line 3, field 2");
    CHECK(where("procs,bytes,time_us\n0,1024,12\n") == "line 2, field 1");
    CHECK(where("procs,bytes,time_us\n8,1024,-1\n") == "line 2, field 3");
    CHECK(where("procs,bytes,time_us\n8,1024\n") == "line 2");
    CHECK(where("p,b,t\n") == "line 1");
    CHECK_THROWS_WITH_AS(parse_measurements("", "t"), doctest::Contains("empty measurement file"),
                         ParseError);
  }
}
