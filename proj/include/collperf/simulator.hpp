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

#ifndef COLLPERF_SIMULATOR_HPP_
#define COLLPERF_SIMULATOR_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "collperf/models.hpp"
#include "collperf/profile.hpp"

namespace collperf {

using Rank = std::int32_t;

struct Transfer {
  Rank sender = 0;
  Rank receiver = 0;
  std::int64_t bytes = 0;
  // Index of an earlier transfer into `sender` that must be received before
  // this one may start.
  std::optional<std::size_t> depends_on;

  friend bool operator==(const Transfer&, const Transfer&) = default;
};

// Explicit communication plan. A rank issues its sends in list order.
struct Schedule {
  std::int64_t procs = 1;
  std::vector<Transfer> transfers;

  // Throws ValidationError on out-of-range ranks, self transfers, empty
  // payloads or dependencies that do not point at an earlier receive.
  void validate() const;
};

bool is_schedulable(Operation op, Strategy strategy);

// Builds the event-level realization of a strategy:
//   flat      root sends to 1..P-1 in ascending order
//   chain     rank i forwards to i+1 (per segment for chain-segmented)
//   binomial  recursive doubling; round r: ranks [0, 2^r) send to rank+2^r
//   direct-exchange  round c: every rank i sends to (i+c) mod P
// Scatter variants carry the bundle for the receiver's whole subtree.
// Throws RequestError for `binary` and rendezvous strategies.
Schedule build_schedule(Operation op, Strategy strategy, std::int64_t procs,
                        std::int64_t message_bytes,
                        std::optional<std::int64_t> segment_bytes = {});

enum class Semantics {
  // Independent send and receive ports. Sends from one rank are spaced by
  // the gap of the earlier send; reception completes g(bytes) + L after the
  // send starts.
  one_port_overlap,
  // One resource per rank: os(bytes) per send, or(bytes) per receive.
  // Sends run in schedule order; a receive that gates a send runs just before
  // it, all other receives run after the rank's last send. A receive may be
  // processed once the matching send has left the sender; its data is
  // complete L after the receive overhead.
  serialized,
};

std::string_view to_string(Semantics s);
std::optional<Semantics> parse_semantics(std::string_view text);

struct TraceEntry {
  std::size_t transfer = 0;
  double send_start = 0.0;
  double recv_end = 0.0;
};

struct SimResult {
  double completion = 0.0;
  // Time each rank spent occupied: gaps in overlap mode, os + or when
  // serialized.
  std::map<Rank, double> per_rank_busy;
  // One entry per transfer, indexed by transfer.
  std::vector<TraceEntry> trace;
};

SimResult run(const Schedule& schedule, const NetworkProfile& profile,
              Semantics semantics);

// CSV: transfer,sender,receiver,bytes,send_start_us,recv_end_us
void write_trace_csv(std::ostream& out, const Schedule& schedule,
                     const SimResult& result);

}  // namespace collperf

#endif  // COLLPERF_SIMULATOR_HPP_
