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

#ifndef COLLPERF_KERNELS_HPP_
#define COLLPERF_KERNELS_HPP_

// Batched arithmetic used on sweeps and fits. Every kernel has a scalar
// reference implementation and, on x86-64, an AVX2 variant. The variant is
// picked once at startup from CPUID and can be overridden for testing.
//
// All variants produce bit-identical results: element-wise kernels use the
// same operation order without FMA, and reductions accumulate into four
// interleaved partial sums combined as (s0 + s1) + (s2 + s3) before the
// tail is added sequentially.

#include <cstddef>
#include <span>
#include <string_view>

namespace collperf::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);
bool isa_available(Isa isa);
// Best ISA supported by both the build and the running CPU.
Isa detected_isa();
Isa active_isa();
// Throws collperf::Error if `isa` is unavailable on this machine.
void set_active_isa(Isa isa);

// Interpolation on one segment: y0 + (y1 - y0) * ((x - x0) / (x1 - x0)).
// Returns y0 exactly when x == x0.
inline double lerp_one(double x, double x0, double x1, double y0, double y1) {
  return y0 + (y1 - y0) * ((x - x0) / (x1 - x0));
}

// Per-element segment endpoints for a batch of interpolation queries.
struct LerpBatch {
  std::span<const double> x;
  std::span<const double> x0;
  std::span<const double> x1;
  std::span<const double> y0;
  std::span<const double> y1;
};

// Direct-exchange bound inputs: one entry per (procs, bytes) point.
struct BoundsBatch {
  std::span<const double> procs;
  std::span<const double> gap;
  std::span<const double> send_overhead;
  std::span<const double> recv_overhead;
  double latency = 0.0;
};

struct KernelTable {
  void (*lerp)(const LerpBatch& in, std::span<double> out);
  // lower = (P-1)*g + L; upper = ((P-1)*os + (P-1)*or) + L.
  void (*alltoall_bounds)(const BoundsBatch& in, std::span<double> lower,
                          std::span<double> upper);
  // out = (1 - gamma) * lo + gamma * hi.
  void (*blend)(std::span<const double> lo, std::span<const double> hi,
                double gamma, std::span<double> out);
  double (*dot)(std::span<const double> a, std::span<const double> b);
  double (*squared_distance)(std::span<const double> a,
                             std::span<const double> b);
};

// Table for a specific ISA. Throws collperf::Error if unavailable.
const KernelTable& table(Isa isa);

// Convenience wrappers dispatching through the active table.
void lerp(const LerpBatch& in, std::span<double> out);
void alltoall_bounds(const BoundsBatch& in, std::span<double> lower,
                     std::span<double> upper);
void blend(std::span<const double> lo, std::span<const double> hi,
           double gamma, std::span<double> out);
double dot(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);

}  // namespace collperf::kernels

#endif  // COLLPERF_KERNELS_HPP_
