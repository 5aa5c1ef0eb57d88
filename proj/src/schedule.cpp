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

#include <string>

#include "collperf/error.hpp"
#include "collperf/simulator.hpp"

namespace collperf {
namespace {

constexpr std::int64_t kMaxProcs = std::int64_t{1} << 20;

class ScheduleBuilder {
 public:
  explicit ScheduleBuilder(std::int64_t procs) { schedule_.procs = procs; }

  std::size_t add(std::int64_t from, std::int64_t to, std::int64_t bytes,
                  std::optional<std::size_t> dep = std::nullopt) {
    schedule_.transfers.push_back(
        {static_cast<Rank>(from), static_cast<Rank>(to), bytes, dep});
    return schedule_.transfers.size() - 1;
  }

  Schedule take() { return std::move(schedule_); }

 private:
  Schedule schedule_;
};

Schedule flat(std::int64_t procs, std::int64_t bytes, std::int64_t segments) {
  ScheduleBuilder b(procs);
  for (std::int64_t r = 1; r < procs; ++r) {
    for (std::int64_t j = 0; j < segments; ++j) b.add(0, r, bytes);
  }
  return b.take();
}

// Store-and-forward per segment: segment j leaves rank i as soon as
// segment j has arrived there.
Schedule chain(std::int64_t procs, std::int64_t bytes, std::int64_t segments) {
  ScheduleBuilder b(procs);
  std::vector<std::size_t> incoming;
  for (std::int64_t i = 0; i + 1 < procs; ++i) {
    std::vector<std::size_t> outgoing;
    for (std::int64_t j = 0; j < segments; ++j) {
      std::optional<std::size_t> dep;
      if (i > 0) dep = incoming[static_cast<std::size_t>(j)];
      outgoing.push_back(b.add(i, i + 1, bytes, dep));
    }
    incoming = std::move(outgoing);
  }
  return b.take();
}

Schedule scatter_chain(std::int64_t procs, std::int64_t bytes) {
  ScheduleBuilder b(procs);
  std::optional<std::size_t> incoming;
  for (std::int64_t i = 0; i + 1 < procs; ++i) {
    incoming = b.add(i, i + 1, (procs - 1 - i) * bytes, incoming);
  }
  return b.take();
}

// Recursive doubling. A rank forwards only once its whole copy has arrived,
// so segmented trees wait for the last segment of the incoming edge.
Schedule binomial(std::int64_t procs, std::int64_t bytes, std::int64_t segments,
                  bool scatter) {
  ScheduleBuilder b(procs);
  std::vector<std::optional<std::size_t>> arrival(static_cast<std::size_t>(procs));
  const int rounds = ceil_log2(procs);
  for (int r = 0; r < rounds; ++r) {
    const std::int64_t stride = std::int64_t{1} << r;
    for (std::int64_t src = 0; src < stride; ++src) {
      const std::int64_t dst = src + stride;
      if (dst >= procs) continue;
      std::int64_t payload = bytes;
      if (scatter) {
        // dst's subtree is {dst + j * 2^(r+1)} below P.
        const std::int64_t subtree = (procs - 1 - dst) / (2 * stride) + 1;
        payload = subtree * bytes;
      }
      std::size_t last = 0;
      for (std::int64_t j = 0; j < segments; ++j) {
        last = b.add(src, dst, payload, arrival[static_cast<std::size_t>(src)]);
      }
      arrival[static_cast<std::size_t>(dst)] = last;
    }
  }
  return b.take();
}

Schedule direct_exchange(std::int64_t procs, std::int64_t bytes) {
  ScheduleBuilder b(procs);
  for (std::int64_t c = 1; c < procs; ++c) {
    for (std::int64_t i = 0; i < procs; ++i) b.add(i, (i + c) % procs, bytes);
  }
  return b.take();
}

}  // namespace

void Schedule::validate() const {
  if (procs < 1) throw ValidationError("schedule needs at least one process");
  for (std::size_t i = 0; i < transfers.size(); ++i) {
    const Transfer& t = transfers[i];
    const std::string where = "transfer " + std::to_string(i) + ": ";
    if (t.sender < 0 || t.sender >= procs || t.receiver < 0 || t.receiver >= procs) {
      throw ValidationError(where + "rank out of range");
    }
    if (t.sender == t.receiver) throw ValidationError(where + "sender equals receiver");
    if (t.bytes < 1) throw ValidationError(where + "payload must be >= 1 byte");
    if (t.depends_on) {
      if (*t.depends_on >= i) {
        throw ValidationError(where + "dependency must reference an earlier transfer");
      }
      if (transfers[*t.depends_on].receiver != t.sender) {
        throw ValidationError(where + "dependency must be a receive at the sender");
      }
    }
  }
}

bool is_schedulable(Operation op, Strategy s) {
  switch (op) {
    case Operation::broadcast:
      return s == Strategy::flat || s == Strategy::flat_segmented ||
             s == Strategy::chain || s == Strategy::chain_segmented ||
             s == Strategy::binomial || s == Strategy::binomial_segmented;
    case Operation::scatter:
      return s == Strategy::flat || s == Strategy::chain || s == Strategy::binomial;
    case Operation::alltoall:
      return s == Strategy::direct_exchange;
  }
  return false;
}

Schedule build_schedule(Operation op, Strategy strategy, std::int64_t procs,
                        std::int64_t message_bytes,
                        std::optional<std::int64_t> segment_bytes) {
  const CollectiveRequest req{op, strategy, procs, message_bytes, segment_bytes};
  req.validate();
  if (!is_schedulable(op, strategy)) {
    throw RequestError("no event-level schedule for " +
                       std::string(to_string(op)) + " '" +
                       std::string(to_string(strategy)) + "'");
  }
  if (procs > kMaxProcs) {
    throw RequestError("simulation supports at most " + std::to_string(kMaxProcs) +
                       " processes");
  }
  std::int64_t payload = message_bytes;
  std::int64_t segments = 1;
  if (segment_bytes) {
    const Segmentation seg = make_segmentation(message_bytes, *segment_bytes);
    payload = seg.segment_bytes;
    segments = seg.segment_count;
  }

  switch (op) {
    case Operation::broadcast:
      switch (strategy) {
        case Strategy::flat:
        case Strategy::flat_segmented:
          return flat(procs, payload, segments);
        case Strategy::chain:
        case Strategy::chain_segmented:
          return chain(procs, payload, segments);
        case Strategy::binomial:
        case Strategy::binomial_segmented:
          return binomial(procs, payload, segments, false);
        default:
          break;
      }
      break;
    case Operation::scatter:
      switch (strategy) {
        case Strategy::flat:
          return flat(procs, payload, 1);
        case Strategy::chain:
          return scatter_chain(procs, payload);
        case Strategy::binomial:
          return binomial(procs, payload, 1, true);
        default:
          break;
      }
      break;
    case Operation::alltoall:
      return direct_exchange(procs, payload);
  }
  throw RequestError("unschedulable strategy");
}

}  // namespace collperf
