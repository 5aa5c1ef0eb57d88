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

#include "collperf/profile.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

#include "collperf/error.hpp"
#include "collperf/kernels.hpp"

namespace collperf {
namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

// Segment [lo, lo + 1] used to evaluate a column at `x`; exact sample hits
// return lo == hit index and are answered without interpolation.
struct Segment {
  std::size_t lo = 0;
  bool exact = false;
};

Segment locate(std::span<const double> sizes, double x) {
  const auto it = std::upper_bound(sizes.begin(), sizes.end(), x);
  // sizes.front() == 1 and x >= 1, so `it` is never begin().
  std::size_t idx = static_cast<std::size_t>(it - sizes.begin()) - 1;
  if (sizes[idx] == x) return {idx, true};
  if (idx + 1 == sizes.size() && idx > 0) idx -= 1;  // extrapolate along the last segment
  return {idx, false};
}

void check_bytes(std::int64_t bytes) {
  if (bytes < 1) {
    throw ValidationError("message size must be >= 1 byte, got " +
                          std::to_string(bytes));
  }
}

double checked_result(double v, Param which, std::int64_t bytes) {
  if (!positive_finite(v)) {
    throw ValidationError(std::string(to_string(which)) + " evaluates to " +
                          format_double(v) + " at " + std::to_string(bytes) +
                          " bytes; profile parameters must stay positive");
  }
  return v;
}

}  // namespace

std::string_view to_string(Param p) {
  switch (p) {
    case Param::gap:
      return "g";
    case Param::send_overhead:
      return "os";
    case Param::recv_overhead:
      return "or";
  }
  return "?";
}

NetworkProfile::NetworkProfile(std::string name, double latency,
                               std::vector<PLogPSample> samples)
    : name_(std::move(name)), latency_(latency), samples_(std::move(samples)) {
  if (!positive_finite(latency_)) {
    throw ValidationError("latency must be positive, got " +
                          format_double(latency_));
  }
  if (samples_.empty()) throw ValidationError("profile has no samples");
  std::sort(samples_.begin(), samples_.end(),
            [](const PLogPSample& a, const PLogPSample& b) {
              return a.bytes < b.bytes;
            });
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const PLogPSample& s = samples_[i];
    const std::string at = " at " + std::to_string(s.bytes) + " bytes";
    if (s.bytes < 1) {
      throw ValidationError("sample size must be >= 1, got " +
                            std::to_string(s.bytes));
    }
    if (i > 0 && samples_[i - 1].bytes == s.bytes) {
      throw ValidationError("duplicate sample size " + std::to_string(s.bytes));
    }
    if (!positive_finite(s.g)) throw ValidationError("g must be positive" + at);
    if (!positive_finite(s.os)) throw ValidationError("os must be positive" + at);
    if (!positive_finite(s.or_)) throw ValidationError("or must be positive" + at);
  }
  if (samples_.front().bytes != 1) {
    throw ValidationError("profile must contain a 1-byte sample");
  }
  sizes_.reserve(samples_.size());
  for (const PLogPSample& s : samples_) {
    sizes_.push_back(static_cast<double>(s.bytes));
    gap_.push_back(s.g);
    send_.push_back(s.os);
    recv_.push_back(s.or_);
  }
}

std::span<const double> NetworkProfile::column(Param which) const {
  switch (which) {
    case Param::gap:
      return gap_;
    case Param::send_overhead:
      return send_;
    case Param::recv_overhead:
      return recv_;
  }
  return gap_;
}

double NetworkProfile::at(Param which, std::int64_t bytes) const {
  check_bytes(bytes);
  const std::span<const double> ys = column(which);
  const double x = static_cast<double>(bytes);
  const Segment seg = locate(sizes_, x);
  if (seg.exact || sizes_.size() == 1) return ys[seg.lo];
  const double v = kernels::lerp_one(x, sizes_[seg.lo], sizes_[seg.lo + 1],
                                     ys[seg.lo], ys[seg.lo + 1]);
  return checked_result(v, which, bytes);
}

void NetworkProfile::at_batch(Param which, std::span<const std::int64_t> bytes,
                              std::span<double> out) const {
  if (out.size() != bytes.size()) {
    throw Error("at_batch: output size does not match input size");
  }
  const std::span<const double> ys = column(which);
  const std::size_t n = bytes.size();
  std::vector<double> x(n), x0(n), x1(n), y0(n), y1(n);
  for (std::size_t i = 0; i < n; ++i) {
    check_bytes(bytes[i]);
    x[i] = static_cast<double>(bytes[i]);
    const Segment seg = locate(sizes_, x[i]);
    if (seg.exact || sizes_.size() == 1) {
      // x == x0 makes the interpolation collapse to y0 exactly.
      x0[i] = x[i];
      x1[i] = x[i] + 1.0;
      y0[i] = y1[i] = ys[seg.lo];
    } else {
      x0[i] = sizes_[seg.lo];
      x1[i] = sizes_[seg.lo + 1];
      y0[i] = ys[seg.lo];
      y1[i] = ys[seg.lo + 1];
    }
  }
  kernels::lerp({x, x0, x1, y0, y1}, out);
  for (std::size_t i = 0; i < n; ++i) checked_result(out[i], which, bytes[i]);
}

Segmentation make_segmentation(std::int64_t message_bytes,
                               std::int64_t segment_bytes) {
  if (message_bytes < 1 || segment_bytes < 1) {
    throw ValidationError("message and segment sizes must be >= 1");
  }
  if (segment_bytes > message_bytes) {
    throw ValidationError("segment size " + std::to_string(segment_bytes) +
                          " exceeds message size " +
                          std::to_string(message_bytes));
  }
  const std::int64_t k = (message_bytes + segment_bytes - 1) / segment_bytes;
  return {segment_bytes, k};
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

}  // namespace collperf
