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

#include "collperf/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <string>

#include "collperf/error.hpp"

namespace collperf {
namespace {

constexpr double kUnknown = std::numeric_limits<double>::quiet_NaN();

struct Op {
  enum class Kind { send, recv } kind;
  std::size_t transfer;
};

enum class EventKind { op_start, recv_done };

struct Event {
  double time;
  std::uint64_t seq;  // FIFO among equal times keeps runs deterministic
  EventKind kind;
  Rank rank;
  std::size_t transfer;
};

struct Later {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }
};

class EventLoop {
 public:
  EventLoop(const Schedule& schedule, const NetworkProfile& profile,
            Semantics semantics)
      : schedule_(schedule),
        profile_(profile),
        semantics_(semantics),
        ops_(static_cast<std::size_t>(schedule.procs)),
        next_op_(ops_.size(), 0),
        free_at_(ops_.size(), 0.0),
        pending_(ops_.size(), false),
        busy_(ops_.size(), 0.0),
        send_start_(schedule.transfers.size(), kUnknown),
        send_end_(schedule.transfers.size(), kUnknown),
        recv_end_(schedule.transfers.size(), kUnknown),
        received_(schedule.transfers.size(), false) {
    // Serialized ranks handle a receive right before the first send it
    // gates; other receives follow the rank's last send.
    std::vector<bool> placed(schedule.transfers.size(), false);
    for (std::size_t i = 0; i < schedule.transfers.size(); ++i) {
      const Transfer& t = schedule.transfers[i];
      if (semantics_ == Semantics::serialized && t.depends_on &&
          !placed[*t.depends_on]) {
        ops_[rank_index(t.sender)].push_back({Op::Kind::recv, *t.depends_on});
        placed[*t.depends_on] = true;
      }
      ops_[rank_index(t.sender)].push_back({Op::Kind::send, i});
    }
    if (semantics_ == Semantics::serialized) {
      for (std::size_t i = 0; i < schedule.transfers.size(); ++i) {
        if (!placed[i]) {
          ops_[rank_index(schedule.transfers[i].receiver)].push_back({Op::Kind::recv, i});
        }
      }
    }
  }

  SimResult execute() {
    for (std::size_t r = 0; r < ops_.size(); ++r) try_issue(static_cast<Rank>(r));
    while (!queue_.empty()) {
      const Event ev = queue_.top();
      queue_.pop();
      if (ev.kind == EventKind::op_start) {
        start_op(ev.rank, ev.time);
      } else {
        received_[ev.transfer] = true;
        try_issue(schedule_.transfers[ev.transfer].receiver);
      }
    }
    for (std::size_t r = 0; r < ops_.size(); ++r) {
      if (next_op_[r] != ops_[r].size()) {
        throw std::logic_error("schedule stalled at rank " + std::to_string(r));
      }
    }
    SimResult result;
    result.trace.reserve(schedule_.transfers.size());
    for (std::size_t i = 0; i < schedule_.transfers.size(); ++i) {
      result.trace.push_back({i, send_start_[i], recv_end_[i]});
      result.completion = std::max(result.completion, recv_end_[i]);
    }
    for (std::size_t r = 0; r < busy_.size(); ++r) {
      result.per_rank_busy[static_cast<Rank>(r)] = busy_[r];
    }
    return result;
  }

 private:
  static std::size_t rank_index(Rank r) { return static_cast<std::size_t>(r); }

  void push(double time, EventKind kind, Rank rank, std::size_t transfer) {
    queue_.push({time, seq_++, kind, rank, transfer});
  }

  // Earliest start of the rank's next op, or NaN if it still waits on an
  // event that has not happened yet.
  double ready_time(Rank rank) const {
    const std::size_t r = rank_index(rank);
    const Op& op = ops_[r][next_op_[r]];
    const Transfer& t = schedule_.transfers[op.transfer];
    double ready = free_at_[r];
    if (op.kind == Op::Kind::send) {
      if (t.depends_on) {
        if (!received_[*t.depends_on]) return kUnknown;
        ready = std::max(ready, recv_end_[*t.depends_on]);
      }
    } else {
      if (std::isnan(send_end_[op.transfer])) return kUnknown;
      ready = std::max(ready, send_end_[op.transfer]);
    }
    return ready;
  }

  void try_issue(Rank rank) {
    const std::size_t r = rank_index(rank);
    if (pending_[r] || next_op_[r] == ops_[r].size()) return;
    const double t = ready_time(rank);
    if (std::isnan(t)) return;
    pending_[r] = true;
    push(t, EventKind::op_start, rank, ops_[r][next_op_[r]].transfer);
  }

  void start_op(Rank rank, double now) {
    const std::size_t r = rank_index(rank);
    const Op op = ops_[r][next_op_[r]];
    const Transfer& t = schedule_.transfers[op.transfer];
    const double L = profile_.latency();
    pending_[r] = false;
    ++next_op_[r];

    if (semantics_ == Semantics::one_port_overlap) {
      const double gap = profile_.g(t.bytes);
      send_start_[op.transfer] = now;
      send_end_[op.transfer] = now + gap;
      recv_end_[op.transfer] = now + gap + L;
      free_at_[r] = now + gap;
      busy_[r] += gap;
      push(recv_end_[op.transfer], EventKind::recv_done, t.receiver, op.transfer);
    } else if (op.kind == Op::Kind::send) {
      const double os = profile_.os(t.bytes);
      send_start_[op.transfer] = now;
      send_end_[op.transfer] = now + os;
      free_at_[r] = now + os;
      busy_[r] += os;
      try_issue(t.receiver);
    } else {
      const double orr = profile_.or_(t.bytes);
      free_at_[r] = now + orr;
      busy_[r] += orr;
      recv_end_[op.transfer] = now + orr + L;
      push(recv_end_[op.transfer], EventKind::recv_done, t.receiver, op.transfer);
    }
    try_issue(rank);
  }

  const Schedule& schedule_;
  const NetworkProfile& profile_;
  Semantics semantics_;
  std::vector<std::vector<Op>> ops_;
  std::vector<std::size_t> next_op_;
  std::vector<double> free_at_;
  std::vector<bool> pending_;
  std::vector<double> busy_;
  std::vector<double> send_start_;
  std::vector<double> send_end_;
  std::vector<double> recv_end_;
  std::vector<bool> received_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t seq_ = 0;
};

}  // namespace

std::string_view to_string(Semantics s) {
  return s == Semantics::one_port_overlap ? "one-port-overlap" : "serialized";
}

std::optional<Semantics> parse_semantics(std::string_view text) {
  if (text == "one-port-overlap") return Semantics::one_port_overlap;
  if (text == "serialized") return Semantics::serialized;
  return std::nullopt;
}

SimResult run(const Schedule& schedule, const NetworkProfile& profile,
              Semantics semantics) {
  schedule.validate();
  return EventLoop(schedule, profile, semantics).execute();
}

void write_trace_csv(std::ostream& out, const Schedule& schedule,
                     const SimResult& result) {
  out << "transfer,sender,receiver,bytes,send_start_us,recv_end_us\n";
  for (const TraceEntry& e : result.trace) {
    const Transfer& t = schedule.transfers[e.transfer];
    out << e.transfer << ',' << t.sender << ',' << t.receiver << ',' << t.bytes
        << ',' << format_double(e.send_start) << ',' << format_double(e.recv_end)
        << '\n';
  }
}

}  // namespace collperf
