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

#include "collperf/models.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <string>
#include <utility>

#include "collperf/error.hpp"

namespace collperf {
namespace {

constexpr std::array kBroadcastCatalog = {
    Strategy::flat,           Strategy::flat_rendezvous,
    Strategy::flat_segmented, Strategy::chain,
    Strategy::chain_rendezvous, Strategy::chain_segmented,
    Strategy::binary,         Strategy::binomial,
    Strategy::binomial_rendezvous, Strategy::binomial_segmented,
};
constexpr std::array kScatterCatalog = {Strategy::flat, Strategy::chain,
                                        Strategy::binomial};
constexpr std::array kAlltoallCatalog = {Strategy::direct_exchange};

constexpr std::array<std::pair<Strategy, std::string_view>, 11> kStrategyNames = {{
    {Strategy::flat, "flat"},
    {Strategy::flat_rendezvous, "flat-rendezvous"},
    {Strategy::flat_segmented, "flat-segmented"},
    {Strategy::chain, "chain"},
    {Strategy::chain_rendezvous, "chain-rendezvous"},
    {Strategy::chain_segmented, "chain-segmented"},
    {Strategy::binary, "binary"},
    {Strategy::binomial, "binomial"},
    {Strategy::binomial_rendezvous, "binomial-rendezvous"},
    {Strategy::binomial_segmented, "binomial-segmented"},
    {Strategy::direct_exchange, "direct-exchange"},
}};

// Sizes are handled as doubles when interpolating; stay within the range
// where every integer is exact.
constexpr std::int64_t kMaxTotalBytes = std::int64_t{1} << 53;

Prediction finish(std::vector<Term> terms, const CollectiveRequest& req) {
  Prediction p;
  double total = 0.0;
  for (const Term& t : terms) total += t.value;
  p.total = total;
  p.terms = std::move(terms);
  p.request = req;
  return p;
}

Prediction degenerate(const CollectiveRequest& req) {
  return finish({{"degenerate", 0.0}}, req);
}

Prediction broadcast_model(const NetworkProfile& prof,
                           const CollectiveRequest& req) {
  const double peers = static_cast<double>(req.procs - 1);
  const double L = prof.latency();
  const std::int64_t m = req.message_bytes;
  const double lg_floor = floor_log2(req.procs);
  const double lg_ceil = ceil_log2(req.procs);

  switch (req.strategy) {
    case Strategy::flat:
      return finish({{"gap", peers * prof.g(m)}, {"latency", L}}, req);
    case Strategy::flat_rendezvous:
      return finish({{"gap", peers * prof.g(m)},
                     {"rendezvous-gap", 2.0 * prof.g(1)},
                     {"latency", 3.0 * L}},
                    req);
    case Strategy::flat_segmented: {
      const Segmentation seg = make_segmentation(m, *req.segment_bytes);
      const double k = static_cast<double>(seg.segment_count);
      return finish({{"gap", peers * (prof.g(seg.segment_bytes) * k)},
                     {"latency", L}},
                    req);
    }
    case Strategy::chain:
      return finish({{"gap", peers * prof.g(m)}, {"latency", peers * L}}, req);
    case Strategy::chain_rendezvous:
      return finish({{"gap", peers * prof.g(m)},
                     {"rendezvous-gap", peers * (2.0 * prof.g(1))},
                     {"latency", peers * (3.0 * L)}},
                    req);
    case Strategy::chain_segmented: {
      const Segmentation seg = make_segmentation(m, *req.segment_bytes);
      const double gs = prof.g(seg.segment_bytes);
      return finish({{"gap", peers * gs},
                     {"latency", peers * L},
                     {"pipeline", gs * static_cast<double>(seg.segment_count - 1)}},
                    req);
    }
    case Strategy::binary: {
      Prediction p = finish({{"gap", lg_ceil * (2.0 * prof.g(m))},
                             {"latency", lg_ceil * L},
                             {"upper-bound", 0.0}},
                            req);
      p.upper_bound = true;
      return p;
    }
    case Strategy::binomial:
      return finish({{"gap", lg_floor * prof.g(m)}, {"latency", lg_ceil * L}},
                    req);
    case Strategy::binomial_rendezvous:
      return finish({{"gap", lg_floor * prof.g(m)},
                     {"rendezvous-gap", lg_ceil * (2.0 * prof.g(1))},
                     {"latency", lg_ceil * (3.0 * L)}},
                    req);
    case Strategy::binomial_segmented: {
      const Segmentation seg = make_segmentation(m, *req.segment_bytes);
      const double k = static_cast<double>(seg.segment_count);
      return finish({{"gap", lg_floor * prof.g(seg.segment_bytes) * k},
                     {"latency", lg_ceil * L}},
                    req);
    }
    case Strategy::direct_exchange:
      break;
  }
  throw RequestError("strategy '" + std::string(to_string(req.strategy)) +
                     "' is not a broadcast strategy");
}

Prediction scatter_model(const NetworkProfile& prof,
                         const CollectiveRequest& req) {
  const double peers = static_cast<double>(req.procs - 1);
  const double L = prof.latency();
  const std::int64_t m = req.message_bytes;

  switch (req.strategy) {
    case Strategy::flat:
      return finish({{"gap", peers * prof.g(m)}, {"latency", L}}, req);
    case Strategy::chain: {
      double gap = 0.0;
      for (std::int64_t j = 1; j < req.procs; ++j) gap += prof.g(j * m);
      return finish({{"gap", gap}, {"latency", peers * L}}, req);
    }
    case Strategy::binomial: {
      const int rounds = ceil_log2(req.procs);
      double gap = 0.0;
      for (int j = 0; j < rounds; ++j) gap += prof.g((std::int64_t{1} << j) * m);
      return finish({{"gap", gap}, {"latency", rounds * L}}, req);
    }
    default:
      break;
  }
  throw RequestError("strategy '" + std::string(to_string(req.strategy)) +
                     "' is not a scatter strategy");
}

void check_sizes(std::int64_t procs, std::int64_t message_bytes) {
  if (procs < 1) {
    throw RequestError("process count must be >= 1, got " + std::to_string(procs));
  }
  if (message_bytes < 1) {
    throw RequestError("message size must be >= 1 byte, got " +
                       std::to_string(message_bytes));
  }
  if (message_bytes > kMaxTotalBytes / procs) {
    throw RequestError("procs * message size exceeds 2^53 bytes");
  }
}

}  // namespace

std::string_view to_string(Operation op) {
  switch (op) {
    case Operation::broadcast:
      return "broadcast";
    case Operation::scatter:
      return "scatter";
    case Operation::alltoall:
      return "alltoall";
  }
  return "?";
}

std::string_view to_string(Strategy s) {
  for (const auto& [value, name] : kStrategyNames) {
    if (value == s) return name;
  }
  return "?";
}

std::optional<Operation> parse_operation(std::string_view text) {
  for (Operation op : {Operation::broadcast, Operation::scatter, Operation::alltoall}) {
    if (to_string(op) == text) return op;
  }
  return std::nullopt;
}

std::optional<Strategy> parse_strategy(std::string_view text) {
  for (const auto& [value, name] : kStrategyNames) {
    if (name == text) return value;
  }
  return std::nullopt;
}

std::span<const Strategy> catalog(Operation op) {
  switch (op) {
    case Operation::broadcast:
      return kBroadcastCatalog;
    case Operation::scatter:
      return kScatterCatalog;
    case Operation::alltoall:
      return kAlltoallCatalog;
  }
  return {};
}

bool in_catalog(Operation op, Strategy s) {
  for (Strategy c : catalog(op)) {
    if (c == s) return true;
  }
  return false;
}

bool is_segmented(Strategy s) {
  return s == Strategy::flat_segmented || s == Strategy::chain_segmented ||
         s == Strategy::binomial_segmented;
}

void CollectiveRequest::validate() const {
  check_sizes(procs, message_bytes);
  if (!in_catalog(operation, strategy)) {
    throw RequestError("strategy '" + std::string(to_string(strategy)) +
                       "' is not defined for " + std::string(to_string(operation)));
  }
  if (is_segmented(strategy)) {
    if (!segment_bytes) {
      throw RequestError("strategy '" + std::string(to_string(strategy)) +
                         "' requires a segment size");
    }
    if (*segment_bytes < 1 || *segment_bytes > message_bytes) {
      throw RequestError("segment size must be in [1, " +
                         std::to_string(message_bytes) + "], got " +
                         std::to_string(*segment_bytes));
    }
  } else if (segment_bytes) {
    throw RequestError("strategy '" + std::string(to_string(strategy)) +
                       "' does not take a segment size");
  }
}

int floor_log2(std::int64_t n) {
  return static_cast<int>(std::bit_width(static_cast<std::uint64_t>(n))) - 1;
}

int ceil_log2(std::int64_t n) {
  if (n <= 1) return 0;
  return static_cast<int>(std::bit_width(static_cast<std::uint64_t>(n - 1)));
}

Prediction predict(const NetworkProfile& profile, const CollectiveRequest& req) {
  req.validate();
  if (req.procs == 1) return degenerate(req);
  switch (req.operation) {
    case Operation::broadcast:
      return broadcast_model(profile, req);
    case Operation::scatter:
      return scatter_model(profile, req);
    case Operation::alltoall:
      break;
  }
  throw RequestError(
      "all-to-all has no single closed form; use the bounds or a congestion "
      "factor");
}

Prediction predict_broadcast(const NetworkProfile& profile, Strategy strategy,
                             std::int64_t procs, std::int64_t message_bytes,
                             std::optional<std::int64_t> segment_bytes) {
  return predict(profile, {Operation::broadcast, strategy, procs, message_bytes,
                           segment_bytes});
}

Prediction predict_scatter(const NetworkProfile& profile, Strategy strategy,
                           std::int64_t procs, std::int64_t message_bytes) {
  return predict(profile,
                 {Operation::scatter, strategy, procs, message_bytes, std::nullopt});
}

AlltoallBounds alltoall_bounds(const NetworkProfile& profile,
                               std::int64_t procs, std::int64_t message_bytes) {
  const CollectiveRequest req{Operation::alltoall, Strategy::direct_exchange,
                              procs, message_bytes, std::nullopt};
  req.validate();
  if (procs == 1) return {degenerate(req), degenerate(req)};
  const double peers = static_cast<double>(procs - 1);
  const double L = profile.latency();
  AlltoallBounds b;
  b.lower = finish({{"gap", peers * profile.g(message_bytes)}, {"latency", L}}, req);
  b.upper = finish({{"send-overhead", peers * profile.os(message_bytes)},
                    {"recv-overhead", peers * profile.or_(message_bytes)},
                    {"latency", L}},
                   req);
  return b;
}

Prediction predict_alltoall(const NetworkProfile& profile, std::int64_t procs,
                            std::int64_t message_bytes, double gamma) {
  if (!std::isfinite(gamma)) throw RequestError("congestion factor must be finite");
  const AlltoallBounds b = alltoall_bounds(profile, procs, message_bytes);
  Prediction p = finish({{"lower-share", (1.0 - gamma) * b.lower.total},
                         {"upper-share", gamma * b.upper.total}},
                        b.lower.request);
  if (procs == 1) p = degenerate(b.lower.request);
  if (gamma < 0.0) {
    p.notes.push_back("congestion factor " + format_double(gamma) +
                      " is negative: prediction lies below the lower bound");
  } else if (gamma > 1.0) {
    p.notes.push_back("congestion factor " + format_double(gamma) +
                      " exceeds 1: prediction lies beyond the upper bound");
  }
  return p;
}

bool validate_tree_shape(TreeShape shape, std::int64_t procs) {
  if (procs < 2) return false;
  if (shape.arity < 1 || shape.arity > procs - 1) return false;
  if (shape.height < 1 || shape.height > procs - 1) return false;
  // 1 + d + d^2 + ... + d^h, stopping as soon as it reaches P.
  std::int64_t covered = 1;
  std::int64_t level = 1;
  for (std::int64_t i = 1; i <= shape.height; ++i) {
    level *= shape.arity;
    covered += level;
    if (covered >= procs) return true;
  }
  return covered >= procs;
}

}  // namespace collperf
