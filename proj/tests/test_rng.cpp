#include <doctest.h>

#include <cstdint>

#include "jamnet/rng.hpp"

using namespace jamnet;

TEST_CASE("mix64 reproduces the reference finalizer outputs") {
  // Walking the finalizer over successive states 0, gamma, 2*gamma must give
  // the published output sequence for a zero-seeded stream.
  CHECK(mix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(mix64(0x9e3779b97f4a7c15ULL) == 0x6e789e6aa1b965f4ULL);
  CHECK(mix64(0x9e3779b97f4a7c15ULL * 2) == 0x06c45d188009454fULL);
}

TEST_CASE("derive_seed chains piecewise and separates paths") {
  CHECK(derive_seed(7, {1, 0}) == derive_seed(derive_seed(7, {1}), {0}));
  CHECK(derive_seed(7, {1, 0}) == 15523871737565102349ULL);
  CHECK(derive_seed(7, {1}) != derive_seed(7, {2}));
  CHECK(derive_seed(7, {1, 2}) != derive_seed(7, {2, 1}));
  CHECK(derive_seed(7, {1, 0}) != derive_seed(8, {1, 0}));
  CHECK(derive_seed(7, {0}) != derive_seed(7, {}));
  // empty path is the identity; the master only feeds generator state mixed
  CHECK(derive_seed(7, {}) == 7ULL);
}

TEST_CASE("unit stream is pinned, bounded, and reseedable") {
  Rng a(42);
  // Frozen stream head: any engine or scaling change must be caught, because
  // every experiment artifact depends on these exact draws.
  CHECK(a.next_unit() == 0.13967200376411748);
  CHECK(a.next_unit() == 0.9693205787161252);
  CHECK(a.next_unit() == 0.97019593185647635);

  Rng b(42);
  CHECK(b.next_unit() == 0.13967200376411748);

  Rng c(43);
  CHECK(c.next_unit() != 0.13967200376411748);

  Rng d(123);
  for (int i = 0; i < 10000; ++i) {
    const double u = d.next_unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("interval and integer draws respect their ranges") {
  Rng r(5);
  for (int i = 0; i < 1000; ++i) {
    const double v = r.next_in(-2.0, 3.0);
    CHECK(v >= -2.0);
    CHECK(v < 3.0);
    CHECK(r.next_below(7) < 7);
  }
  Rng one(9);
  CHECK(one.next_below(1) == 0);
}

TEST_CASE("unit draws cover the interval roughly uniformly") {
  Rng r(2024);
  int buckets[10] = {0};
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) buckets[static_cast<int>(r.next_unit() * 10.0)]++;
  for (int k = 0; k < 10; ++k) {
    // 10k expected per bucket; 5% slack is ~16 sigma, failure means a broken stream.
    CHECK(buckets[k] > 9500);
    CHECK(buckets[k] < 10500);
  }
}
