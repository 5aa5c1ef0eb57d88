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

#include <cassert>
#include <cstddef>

#include "kernel_variants.hpp"

namespace collperf::kernels {
namespace {

void lerp_scalar(const LerpBatch& in, std::span<double> out) {
  assert(in.x.size() == out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = lerp_one(in.x[i], in.x0[i], in.x1[i], in.y0[i], in.y1[i]);
  }
}

void alltoall_bounds_scalar(const BoundsBatch& in, std::span<double> lower,
                            std::span<double> upper) {
  const std::size_t n = in.procs.size();
  assert(lower.size() == n && upper.size() == n);
  for (std::size_t i = 0; i < n; ++i) {
    const double peers = in.procs[i] - 1.0;
    lower[i] = peers * in.gap[i] + in.latency;
    upper[i] = (peers * in.send_overhead[i] + peers * in.recv_overhead[i]) +
               in.latency;
  }
}

void blend_scalar(std::span<const double> lo, std::span<const double> hi,
                  double gamma, std::span<double> out) {
  const double keep = 1.0 - gamma;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = keep * lo[i] + gamma * hi[i];
  }
}

// Four interleaved accumulators, same association as the vector variants.
double dot_scalar(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  const std::size_t n = a.size();
  const std::size_t blocked = n - n % 4;
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < blocked; i += 4) {
    for (std::size_t lane = 0; lane < 4; ++lane) {
      acc[lane] = acc[lane] + a[i + lane] * b[i + lane];
    }
  }
  double sum = (acc[0] + acc[1]) + (acc[2] + acc[3]);
  for (std::size_t i = blocked; i < n; ++i) sum = sum + a[i] * b[i];
  return sum;
}

double squared_distance_scalar(std::span<const double> a,
                               std::span<const double> b) {
  assert(a.size() == b.size());
  const std::size_t n = a.size();
  const std::size_t blocked = n - n % 4;
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < blocked; i += 4) {
    for (std::size_t lane = 0; lane < 4; ++lane) {
      const double d = a[i + lane] - b[i + lane];
      acc[lane] = acc[lane] + d * d;
    }
  }
  double sum = (acc[0] + acc[1]) + (acc[2] + acc[3]);
  for (std::size_t i = blocked; i < n; ++i) {
    const double d = a[i] - b[i];
    sum = sum + d * d;
  }
  return sum;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable kTable{
      lerp_scalar, alltoall_bounds_scalar, blend_scalar, dot_scalar,
      squared_distance_scalar};
  return kTable;
}

}  // namespace collperf::kernels
