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

#include "collperf/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "collperf/error.hpp"
#include "collperf/kernels.hpp"

namespace collperf {
namespace {

constexpr double kShrink = 0.875;  // 1 - 1/8
constexpr double kGrow = 1.125;    // 1 + 1/8

// Whole-byte neighbour of s scaled by `factor`, at least one byte away.
std::int64_t neighbour(std::int64_t s, double factor) {
  std::int64_t n = std::llround(static_cast<double>(s) * factor);
  if (n == s) n += factor < 1.0 ? -1 : 1;
  return n;
}

}  // namespace

std::vector<std::int64_t> dyadic_segment_candidates(std::int64_t message_bytes) {
  if (message_bytes < 1) {
    throw RequestError("message size must be >= 1 byte");
  }
  std::vector<std::int64_t> out;
  const int top = floor_log2(message_bytes);
  for (int i = 0; i <= top; ++i) {
    const std::int64_t div = std::int64_t{1} << i;
    const std::int64_t s = (message_bytes + div - 1) / div;
    if (out.empty() || out.back() != s) out.push_back(s);
  }
  return out;
}

SegmentChoice optimize_segment(const NetworkProfile& profile, Operation op,
                               Strategy strategy, std::int64_t procs,
                               std::int64_t message_bytes, bool refine) {
  if (op != Operation::broadcast || !is_segmented(strategy)) {
    throw RequestError("segment optimization needs a segmented broadcast strategy, got " +
                       std::string(to_string(op)) + " '" +
                       std::string(to_string(strategy)) + "'");
  }
  std::map<std::int64_t, Prediction> seen;
  const auto evaluate = [&](std::int64_t s) -> const Prediction& {
    auto it = seen.find(s);
    if (it == seen.end()) {
      it = seen.emplace(s, predict_broadcast(profile, strategy, procs,
                                             message_bytes, s))
               .first;
    }
    return it->second;
  };

  std::int64_t best = 0;
  const Prediction* best_pred = nullptr;
  for (std::int64_t s : dyadic_segment_candidates(message_bytes)) {
    const Prediction& p = evaluate(s);
    if (best_pred == nullptr || p.total < best_pred->total) {
      best = s;
      best_pred = &p;
    }
  }

  if (refine) {
    bool moved = true;
    while (moved) {
      moved = false;
      for (double factor : {kShrink, kGrow}) {
        const std::int64_t s = neighbour(best, factor);
        if (s < 1 || s > message_bytes) continue;
        const Prediction& p = evaluate(s);
        if (p.total < best_pred->total) {
          best = s;
          best_pred = &p;
          moved = true;
          break;
        }
      }
    }
  }
  return {best, *best_pred, static_cast<std::int64_t>(seen.size())};
}

std::vector<StrategyChoice> rank_strategies(const NetworkProfile& profile,
                                            Operation op, std::int64_t procs,
                                            std::int64_t message_bytes,
                                            bool auto_segment) {
  if (op == Operation::alltoall) {
    throw RequestError("strategy selection covers broadcast and scatter only");
  }
  std::vector<StrategyChoice> ranked;
  for (Strategy s : catalog(op)) {
    if (is_segmented(s)) {
      if (!auto_segment) continue;
      ranked.push_back(
          {s, optimize_segment(profile, op, s, procs, message_bytes, false).predicted});
    } else {
      ranked.push_back(
          {s, predict(profile, {op, s, procs, message_bytes, std::nullopt})});
    }
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const StrategyChoice& a, const StrategyChoice& b) {
                     return a.predicted.total < b.predicted.total;
                   });
  return ranked;
}

StrategyChoice select_strategy(const NetworkProfile& profile, Operation op,
                               std::int64_t procs, std::int64_t message_bytes,
                               bool auto_segment) {
  return rank_strategies(profile, op, procs, message_bytes, auto_segment).front();
}

GammaModel fit_gamma(const NetworkProfile& profile, const MeasurementSet& set) {
  const std::size_t n = set.records.size();
  if (n == 0) throw ValidationError("no measurements to fit");

  std::vector<std::int64_t> bytes(n);
  std::vector<double> procs(n), times(n);
  for (std::size_t i = 0; i < n; ++i) {
    const MeasurementRecord& rec = set.records[i];
    if (rec.procs < 1 || rec.bytes < 1 || !(rec.time_us > 0.0)) {
      throw ValidationError("measurement " + std::to_string(i) +
                            ": procs and bytes must be >= 1 and time positive");
    }
    bytes[i] = rec.bytes;
    procs[i] = static_cast<double>(rec.procs);
    times[i] = rec.time_us;
  }

  std::vector<double> g(n), os(n), orr(n), lo(n), hi(n);
  profile.at_batch(Param::gap, bytes, g);
  profile.at_batch(Param::send_overhead, bytes, os);
  profile.at_batch(Param::recv_overhead, bytes, orr);
  kernels::alltoall_bounds({procs, g, os, orr, profile.latency()}, lo, hi);

  std::vector<double> spread(n), excess(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (set.records[i].procs == 1) lo[i] = hi[i] = 0.0;  // no exchange
    spread[i] = hi[i] - lo[i];
    excess[i] = times[i] - lo[i];
  }
  const double denom = kernels::dot(spread, spread);
  if (!(denom > 0.0)) {
    throw ValidationError(
        "congestion factor is undefined: upper and lower bounds coincide for "
        "every measurement");
  }
  GammaModel model;
  model.gamma = kernels::dot(spread, excess) / denom;
  std::vector<double> fitted(n);
  kernels::blend(lo, hi, model.gamma, fitted);
  model.residual =
      std::sqrt(kernels::squared_distance(times, fitted) / static_cast<double>(n));
  model.n_points = n;
  model.profile_name = profile.name();
  return model;
}

}  // namespace collperf
