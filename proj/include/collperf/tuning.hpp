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

#ifndef COLLPERF_TUNING_HPP_
#define COLLPERF_TUNING_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "collperf/models.hpp"
#include "collperf/profile.hpp"

namespace collperf {

struct SegmentChoice {
  std::int64_t segment_bytes = 0;
  Prediction predicted;
  std::int64_t candidates_examined = 0;
};

// ceil(m / 2^i) for i = 0..floor(log2 m), duplicates removed, largest first.
std::vector<std::int64_t> dyadic_segment_candidates(std::int64_t message_bytes);

// Picks the segment size minimizing the closed form of a segmented strategy.
// The dyadic candidates are scanned first (ties keep the larger segment);
// with `refine`, a hill climb then tries s*(1 -+ 1/8) rounded to whole bytes,
// smaller first, moving on any strict improvement until none remains.
SegmentChoice optimize_segment(const NetworkProfile& profile, Operation op,
                               Strategy strategy, std::int64_t procs,
                               std::int64_t message_bytes, bool refine);

struct StrategyChoice {
  Strategy strategy = Strategy::flat;
  Prediction predicted;
};

// Every catalog strategy for `op` (broadcast or scatter) ranked by predicted
// time, ties in catalog order. Segmented strategies use their dyadic optimum
// when `auto_segment`, and are left out otherwise.
std::vector<StrategyChoice> rank_strategies(const NetworkProfile& profile,
                                            Operation op, std::int64_t procs,
                                            std::int64_t message_bytes,
                                            bool auto_segment);

StrategyChoice select_strategy(const NetworkProfile& profile, Operation op,
                               std::int64_t procs, std::int64_t message_bytes,
                               bool auto_segment);

struct MeasurementRecord {
  std::int64_t procs = 0;
  std::int64_t bytes = 0;
  double time_us = 0.0;

  friend bool operator==(const MeasurementRecord&, const MeasurementRecord&) = default;
};

struct MeasurementSet {
  std::string network_label;
  std::vector<MeasurementRecord> records;

  friend bool operator==(const MeasurementSet&, const MeasurementSet&) = default;
};

// CSV with header "procs,bytes,time_us".
MeasurementSet parse_measurements(std::string_view text, std::string label);
std::string format_measurements(const MeasurementSet& set);
// The label defaults to the file stem.
MeasurementSet load_measurements(const std::filesystem::path& path);
void save_measurements(const MeasurementSet& set, const std::filesystem::path& path);

struct GammaModel {
  double gamma = 0.0;
  double residual = 0.0;  // RMS error of the fitted times, microseconds
  std::size_t n_points = 0;
  std::string profile_name;
};

// Least-squares congestion factor placing the measured all-to-all times on
// the line between the direct-exchange lower and upper bounds:
//   gamma = sum (hi - lo)(t - lo) / sum (hi - lo)^2
// Throws ValidationError when the set is empty or every record has hi == lo.
GammaModel fit_gamma(const NetworkProfile& profile, const MeasurementSet& set);

}  // namespace collperf

#endif  // COLLPERF_TUNING_HPP_
