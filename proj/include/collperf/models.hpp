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

#ifndef COLLPERF_MODELS_HPP_
#define COLLPERF_MODELS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "collperf/profile.hpp"

namespace collperf {

enum class Operation { broadcast, scatter, alltoall };

enum class Strategy {
  flat,
  flat_rendezvous,
  flat_segmented,
  chain,
  chain_rendezvous,
  chain_segmented,
  binary,
  binomial,
  binomial_rendezvous,
  binomial_segmented,
  direct_exchange,
};

std::string_view to_string(Operation op);
std::string_view to_string(Strategy s);
std::optional<Operation> parse_operation(std::string_view text);
std::optional<Strategy> parse_strategy(std::string_view text);

// Strategies defined for an operation, in catalog order. Catalog order is
// the tie-break order for strategy selection.
std::span<const Strategy> catalog(Operation op);
bool in_catalog(Operation op, Strategy s);
bool is_segmented(Strategy s);

struct CollectiveRequest {
  Operation operation = Operation::broadcast;
  Strategy strategy = Strategy::flat;
  std::int64_t procs = 1;
  std::int64_t message_bytes = 1;
  std::optional<std::int64_t> segment_bytes;

  // Throws RequestError on any invariant violation.
  void validate() const;
};

struct Term {
  std::string label;
  double value = 0.0;
};

struct Prediction {
  double total = 0.0;  // sum of `terms`, in order
  std::vector<Term> terms;
  CollectiveRequest request;
  // Set for `binary`: the table only gives an upper bound.
  bool upper_bound = false;
  // Warn-level diagnostics (e.g. unusual congestion factor).
  std::vector<std::string> notes;
};

int floor_log2(std::int64_t n);  // n >= 1
int ceil_log2(std::int64_t n);   // n >= 1

// Closed-form cost of a broadcast or scatter request. P = 1 yields 0.
Prediction predict(const NetworkProfile& profile, const CollectiveRequest& req);

Prediction predict_broadcast(const NetworkProfile& profile, Strategy strategy,
                             std::int64_t procs, std::int64_t message_bytes,
                             std::optional<std::int64_t> segment_bytes = {});
Prediction predict_scatter(const NetworkProfile& profile, Strategy strategy,
                           std::int64_t procs, std::int64_t message_bytes);

// Direct-exchange all-to-all limits. No ordering between them is implied:
// the upper limit can fall below the lower one for some profiles.
struct AlltoallBounds {
  Prediction lower;
  Prediction upper;
};

AlltoallBounds alltoall_bounds(const NetworkProfile& profile,
                               std::int64_t procs, std::int64_t message_bytes);

// T = lower + (upper - lower) * gamma, evaluated as
// (1 - gamma) * lower + gamma * upper so both endpoints are exact.
Prediction predict_alltoall(const NetworkProfile& profile, std::int64_t procs,
                            std::int64_t message_bytes, double gamma);

struct TreeShape {
  std::int64_t arity = 1;
  std::int64_t height = 1;
};

// True iff arity, height in [1, P-1] and 1 + d + ... + d^h >= P.
bool validate_tree_shape(TreeShape shape, std::int64_t procs);

}  // namespace collperf

#endif  // COLLPERF_MODELS_HPP_
