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

#ifndef COLLPERF_PROFILE_HPP_
#define COLLPERF_PROFILE_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace collperf {

// All times are microseconds, all sizes are bytes.

// pLogP parameters measured for one message size.
struct PLogPSample {
  std::int64_t bytes = 0;
  double g = 0.0;    // gap
  double os = 0.0;   // send overhead
  double or_ = 0.0;  // receive overhead

  friend bool operator==(const PLogPSample&, const PLogPSample&) = default;
};

enum class Param { gap, send_overhead, recv_overhead };

std::string_view to_string(Param p);

// Sampled pLogP curves plus latency for one homogeneous network.
// Immutable once constructed; the constructor sorts samples by size and
// enforces every invariant, throwing ValidationError otherwise.
class NetworkProfile {
 public:
  NetworkProfile(std::string name, double latency,
                 std::vector<PLogPSample> samples);

  const std::string& name() const noexcept { return name_; }
  double latency() const noexcept { return latency_; }
  std::span<const PLogPSample> samples() const noexcept { return samples_; }

  // Piecewise-linear in bytes between samples, linear extrapolation past the
  // largest sample using the last segment's slope. Exact at sample sizes.
  double at(Param which, std::int64_t bytes) const;
  double g(std::int64_t bytes) const { return at(Param::gap, bytes); }
  double os(std::int64_t bytes) const { return at(Param::send_overhead, bytes); }
  double or_(std::int64_t bytes) const { return at(Param::recv_overhead, bytes); }

  // Batched `at` for sweeps; out.size() must equal bytes.size().
  void at_batch(Param which, std::span<const std::int64_t> bytes,
                std::span<double> out) const;

  friend bool operator==(const NetworkProfile& a, const NetworkProfile& b) {
    return a.name_ == b.name_ && a.latency_ == b.latency_ &&
           a.samples_ == b.samples_;
  }

 private:
  std::span<const double> column(Param which) const;

  std::string name_;
  double latency_;
  std::vector<PLogPSample> samples_;
  // Column views of samples_ for interpolation.
  std::vector<double> sizes_;
  std::vector<double> gap_;
  std::vector<double> send_;
  std::vector<double> recv_;
};

inline double param_at(const NetworkProfile& profile, Param which,
                       std::int64_t bytes) {
  return profile.at(which, bytes);
}

// A message of m bytes cut into k segments of s bytes; the final segment
// may be partial.
struct Segmentation {
  std::int64_t segment_bytes = 0;
  std::int64_t segment_count = 0;

  friend bool operator==(const Segmentation&, const Segmentation&) = default;
};

// Throws ValidationError unless 1 <= segment_bytes <= message_bytes.
Segmentation make_segmentation(std::int64_t message_bytes,
                               std::int64_t segment_bytes);

enum class ProfileFormat { json, columns };

// ".json" selects json, anything else columns.
ProfileFormat profile_format_for(const std::filesystem::path& path);

// Parse profile text. `fallback_name` is used when the text carries no name
// (columns files without a "# name" header).
NetworkProfile parse_profile(std::string_view text, ProfileFormat format,
                             std::string_view fallback_name = "profile");
std::string format_profile(const NetworkProfile& profile, ProfileFormat format);

NetworkProfile load_profile(const std::filesystem::path& path,
                            ProfileFormat format);
NetworkProfile load_profile(const std::filesystem::path& path);
void save_profile(const NetworkProfile& profile,
                  const std::filesystem::path& path, ProfileFormat format);

// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace collperf

#endif  // COLLPERF_PROFILE_HPP_
