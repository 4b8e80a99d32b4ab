#include <cmath>

#include "doctest.h"
#include "dyncausal/rng.hpp"

using namespace dyncausal;

// Computed with a separate Python implementation of the same construction.
TEST_CASE("splitmix64-ctr/v1 cross-check vectors") {
  struct Vec {
    std::uint64_t seed, stream, key;
    std::uint64_t out[4];
  };
  const Vec vecs[] = {
      {0, 1, 0x7ab40e090f363a7dULL, {0x4181b152fb77616fULL, 0x169c646d52269d62ULL, 0x4a5de8d8d53b7280ULL, 0x90f7efbd6c5ecaf3ULL}},
      {42, 2, 0x7bfa87c92aa0cff0ULL, {0x55b0f7f564ce472bULL, 0x50ab99cb391d0e8cULL, 0x0a3f57edee94dbb6ULL, 0xce0c5f363eed9b0eULL}},
      {7, 3, 0x785568519c9bf9c4ULL, {0x0a29f358f4432db7ULL, 0x88ff1f479cddbdf0ULL, 0x109c2917edd3a475ULL, 0x795175907f65c15dULL}},
      {123456789, 4, 0x72b5cd7d4b4be62eULL, {0x01c718bcc3b4162cULL, 0x37534de3dd5e9761ULL, 0x6eb13d8d6413cb36ULL, 0x36f307187006092cULL}},
  };
  for (const auto& v : vecs) {
    CounterRng rng(v.seed, v.stream);
    CHECK(rng.key() == v.key);
    for (auto want : v.out) CHECK(rng.next_u64() == want);
    CHECK(rng.counter() == 4);
  }
}

TEST_CASE("uniform and normal derive from the documented bit recipes") {
  CounterRng a(42, 2);
  CHECK(a.next_uniform() == 0.33473157635744943);
  CounterRng b(42, 2);
  CHECK(b.next_normal() == doctest::Approx(-0.5885813437672655).epsilon(1e-14));
  CHECK(b.counter() == 2);
}

TEST_CASE("streams are independent and reproducible") {
  CounterRng a(5, 1), b(5, 2), c(5, 1);
  int equal = 0;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    equal += x == b.next_u64();
    CHECK(x == c.next_u64());
  }
  CHECK(equal == 0);
}

TEST_CASE("uniform lies in [0,1) and normal has unit moments") {
  CounterRng rng(9, 9);
  double sum = 0, sq = 0;
  int outside = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.next_uniform();
    outside += !(u >= 0.0 && u < 1.0);
    const double z = rng.next_normal();
    sum += z;
    sq += z * z;
  }
  CHECK(outside == 0);
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sq / n - 1.0) < 0.02);
}
