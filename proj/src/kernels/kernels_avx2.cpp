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

#include <immintrin.h>

#include <cassert>
#include <cstddef>

#include "kernel_variants.hpp"

namespace collperf::kernels {
namespace {

void lerp_avx2(const LerpBatch& in, std::span<double> out) {
  const std::size_t n = out.size();
  assert(in.x.size() == n);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(in.x.data() + i);
    const __m256d x0 = _mm256_loadu_pd(in.x0.data() + i);
    const __m256d x1 = _mm256_loadu_pd(in.x1.data() + i);
    const __m256d y0 = _mm256_loadu_pd(in.y0.data() + i);
    const __m256d y1 = _mm256_loadu_pd(in.y1.data() + i);
    const __m256d t =
        _mm256_div_pd(_mm256_sub_pd(x, x0), _mm256_sub_pd(x1, x0));
    const __m256d r = _mm256_add_pd(y0, _mm256_mul_pd(_mm256_sub_pd(y1, y0), t));
    _mm256_storeu_pd(out.data() + i, r);
  }
  for (; i < n; ++i) {
    out[i] = lerp_one(in.x[i], in.x0[i], in.x1[i], in.y0[i], in.y1[i]);
  }
}

void alltoall_bounds_avx2(const BoundsBatch& in, std::span<double> lower,
                          std::span<double> upper) {
  const std::size_t n = in.procs.size();
  assert(lower.size() == n && upper.size() == n);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d lat = _mm256_set1_pd(in.latency);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d peers = _mm256_sub_pd(_mm256_loadu_pd(in.procs.data() + i), one);
    const __m256d g = _mm256_loadu_pd(in.gap.data() + i);
    const __m256d os = _mm256_loadu_pd(in.send_overhead.data() + i);
    const __m256d orr = _mm256_loadu_pd(in.recv_overhead.data() + i);
    _mm256_storeu_pd(lower.data() + i,
                     _mm256_add_pd(_mm256_mul_pd(peers, g), lat));
    const __m256d busy =
        _mm256_add_pd(_mm256_mul_pd(peers, os), _mm256_mul_pd(peers, orr));
    _mm256_storeu_pd(upper.data() + i, _mm256_add_pd(busy, lat));
  }
  for (; i < n; ++i) {
    const double peers = in.procs[i] - 1.0;
    lower[i] = peers * in.gap[i] + in.latency;
    upper[i] = (peers * in.send_overhead[i] + peers * in.recv_overhead[i]) +
               in.latency;
  }
}

void blend_avx2(std::span<const double> lo, std::span<const double> hi,
                double gamma, std::span<double> out) {
  const std::size_t n = out.size();
  const double keep = 1.0 - gamma;
  const __m256d vkeep = _mm256_set1_pd(keep);
  const __m256d vgamma = _mm256_set1_pd(gamma);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_mul_pd(vkeep, _mm256_loadu_pd(lo.data() + i));
    const __m256d b = _mm256_mul_pd(vgamma, _mm256_loadu_pd(hi.data() + i));
    _mm256_storeu_pd(out.data() + i, _mm256_add_pd(a, b));
  }
  for (; i < n; ++i) out[i] = keep * lo[i] + gamma * hi[i];
}

double horizontal_sum(__m256d acc) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

double dot_avx2(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  const std::size_t n = a.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d p =
        _mm256_mul_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
    acc = _mm256_add_pd(acc, p);
  }
  double sum = horizontal_sum(acc);
  for (; i < n; ++i) sum = sum + a[i] * b[i];
  return sum;
}

double squared_distance_avx2(std::span<const double> a,
                             std::span<const double> b) {
  assert(a.size() == b.size());
  const std::size_t n = a.size();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d =
        _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
  }
  double sum = horizontal_sum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    sum = sum + d * d;
  }
  return sum;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable kTable{lerp_avx2, alltoall_bounds_avx2, blend_avx2,
                                  dot_avx2, squared_distance_avx2};
  return kTable;
}

}  // namespace collperf::kernels
