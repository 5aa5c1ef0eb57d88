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

#include <atomic>
#include <string>

#include "collperf/error.hpp"
#include "kernel_variants.hpp"

namespace collperf::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(COLLPERF_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

std::atomic<Isa>& active_slot() {
  static std::atomic<Isa> slot{detected_isa()};
  return slot;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2: {
      static const bool has = cpu_has_avx2();
      return has;
    }
  }
  return false;
}

Isa detected_isa() { return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

Isa active_isa() { return active_slot().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_available(isa)) {
    throw Error("kernel variant '" + std::string(to_string(isa)) +
                "' is not available on this machine");
  }
  active_slot().store(isa, std::memory_order_relaxed);
}

const KernelTable& table(Isa isa) {
  if (!isa_available(isa)) {
    throw Error("kernel variant '" + std::string(to_string(isa)) +
                "' is not available on this machine");
  }
#if defined(COLLPERF_HAVE_AVX2)
  if (isa == Isa::avx2) return avx2_table();
#endif
  return scalar_table();
}

void lerp(const LerpBatch& in, std::span<double> out) {
  table(active_isa()).lerp(in, out);
}

void alltoall_bounds(const BoundsBatch& in, std::span<double> lower,
                     std::span<double> upper) {
  table(active_isa()).alltoall_bounds(in, lower, upper);
}

void blend(std::span<const double> lo, std::span<const double> hi,
           double gamma, std::span<double> out) {
  table(active_isa()).blend(lo, hi, gamma, out);
}

double dot(std::span<const double> a, std::span<const double> b) {
  return table(active_isa()).dot(a, b);
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  return table(active_isa()).squared_distance(a, b);
}

}  // namespace collperf::kernels
