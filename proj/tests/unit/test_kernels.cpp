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

#include <cstring>
#include <random>
#include <vector>

#include "collperf/error.hpp"
#include "collperf/kernels.hpp"
#include "doctest.h"

using namespace collperf;
using kernels::Isa;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo,
                                  double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("scalar kernels match the naive formulas") {
  std::mt19937_64 rng(1);
  const auto& t = kernels::table(Isa::scalar);
  for (std::size_t n : {0u, 1u, 3u, 4u, 9u, 64u}) {
    auto x0 = random_vector(rng, n, 1, 100);
    auto x = x0, x1 = x0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += 5;
      x1[i] += 10;
    }
    const auto y0 = random_vector(rng, n, 1, 50);
    const auto y1 = random_vector(rng, n, 50, 100);
    std::vector<double> out(n);
    t.lerp({x, x0, x1, y0, y1}, out);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(out[i] == doctest::Approx((y0[i] + y1[i]) / 2).epsilon(1e-12));
    }
    const auto a = random_vector(rng, n, -1, 1);
    const auto b = random_vector(rng, n, -1, 1);
    double naive = 0, naive_sq = 0;
    for (std::size_t i = 0; i < n; ++i) {
      naive += a[i] * b[i];
      naive_sq += (a[i] - b[i]) * (a[i] - b[i]);
    }
    CHECK(t.dot(a, b) == doctest::Approx(naive).epsilon(1e-12));
    CHECK(t.squared_distance(a, b) == doctest::Approx(naive_sq).epsilon(1e-12));
  }
}

TEST_CASE("blend hits both endpoints exactly") {
  std::mt19937_64 rng(2);
  const auto lo = random_vector(rng, 13, 1, 1000);
  const auto hi = random_vector(rng, 13, 1, 1000);
  std::vector<double> out(13);
  kernels::blend(lo, hi, 0.0, out);
  CHECK(out == lo);
  kernels::blend(lo, hi, 1.0, out);
  CHECK(out == hi);
}

TEST_CASE("vector variants are bit-identical to the scalar reference") {
  if (!kernels::isa_available(Isa::avx2)) {
    MESSAGE("AVX2 not available on this machine; equivalence not exercised");
    return;
  }
  const auto& ref = kernels::table(Isa::scalar);
  const auto& vec = kernels::table(Isa::avx2);
  std::mt19937_64 rng(3);
  for (std::size_t n = 0; n <= 41; ++n) {
    auto x0 = random_vector(rng, n, 1, 1e6);
    auto dx = random_vector(rng, n, 1, 1e5);
    auto frac = random_vector(rng, n, 0, 1.5);
    std::vector<double> x(n), x1(n);
    for (std::size_t i = 0; i < n; ++i) {
      x1[i] = x0[i] + dx[i];
      x[i] = x0[i] + dx[i] * frac[i];
    }
    const auto y0 = random_vector(rng, n, 0.1, 1e4);
    const auto y1 = random_vector(rng, n, 0.1, 1e4);
    std::vector<double> a(n), b(n);
    ref.lerp({x, x0, x1, y0, y1}, a);
    vec.lerp({x, x0, x1, y0, y1}, b);
    for (std::size_t i = 0; i < n; ++i) CHECK(same_bits(a[i], b[i]));

    std::vector<double> procs(n);
    for (std::size_t i = 0; i < n; ++i) procs[i] = static_cast<double>(1 + i * 7);
    const auto g = random_vector(rng, n, 1, 1e4);
    const auto os = random_vector(rng, n, 1, 1e4);
    const auto orr = random_vector(rng, n, 1, 1e4);
    std::vector<double> lo_a(n), hi_a(n), lo_b(n), hi_b(n);
    ref.alltoall_bounds({procs, g, os, orr, 37.5}, lo_a, hi_a);
    vec.alltoall_bounds({procs, g, os, orr, 37.5}, lo_b, hi_b);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(same_bits(lo_a[i], lo_b[i]));
      CHECK(same_bits(hi_a[i], hi_b[i]));
    }

    for (double gamma : {-0.3, 0.0, 0.2, 1.0, 1.5}) {
      ref.blend(lo_a, hi_a, gamma, a);
      vec.blend(lo_a, hi_a, gamma, b);
      for (std::size_t i = 0; i < n; ++i) CHECK(same_bits(a[i], b[i]));
    }

    const auto u = random_vector(rng, n, -1e3, 1e3);
    const auto v = random_vector(rng, n, -1e3, 1e3);
    CHECK(same_bits(ref.dot(u, v), vec.dot(u, v)));
    CHECK(same_bits(ref.squared_distance(u, v), vec.squared_distance(u, v)));
  }
}

TEST_CASE("dispatch selection") {
  const Isa saved = kernels::active_isa();
  CHECK(kernels::isa_available(Isa::scalar));
  CHECK(kernels::detected_isa() ==
        (kernels::isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar));
  kernels::set_active_isa(Isa::scalar);
  CHECK(kernels::active_isa() == Isa::scalar);
  if (!kernels::isa_available(Isa::avx2)) {
    CHECK_THROWS_AS(kernels::set_active_isa(Isa::avx2), Error);
  }
  kernels::set_active_isa(saved);
  CHECK(kernels::to_string(Isa::avx2) == "avx2");
}
