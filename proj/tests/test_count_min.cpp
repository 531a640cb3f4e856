#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "splitstream/count_min.hpp"
#include "splitstream/rng.hpp"

using namespace splitstream;

TEST_CASE("point estimates never undercount a non-negative key") {
  CountMinSketch cm(64, 4, 123);
  std::map<std::int64_t, std::int64_t> truth;
  Rng rng(9);
  for (int i = 0; i < 5000; ++i) {
    const std::int64_t key = rng.next_int(1, 300);
    cm.update(key, 1);
    truth[key]++;
  }
  // Delete half of what was inserted, never below zero.
  for (auto& [key, cnt] : truth) {
    const std::int64_t remove = cnt / 2;
    for (std::int64_t r = 0; r < remove; ++r) cm.update(key, -1);
    cnt -= remove;
  }
  for (const auto& [key, cnt] : truth) {
    CHECK(cm.estimate(key) >= cnt);
  }
  CHECK(cm.estimate(100000) >= 0);  // unseen key estimates are non-negative
  CHECK(cm.stored_words() == 64 * 4);
}

TEST_CASE("width drives accuracy: a wide sketch is exact on sparse input") {
  CountMinSketch cm(4096, 4, 77);
  for (std::int64_t k = 1; k <= 20; ++k) cm.update(k, k);
  for (std::int64_t k = 1; k <= 20; ++k) {
    CHECK(cm.estimate(k) == k);  // collisions vanish at this load factor
  }
}

TEST_CASE("dyadic structure sizes itself from N and eps'") {
  DyadicCountMin d(1000, 0.01, 1);
  // padded domain 1024 => levels 0..10
  CHECK(d.levels() == 11);
  CHECK(d.domain_size() == 1000);
  const double lg = std::log2(1000.0);
  const std::int64_t width =
      static_cast<std::int64_t>(std::ceil(std::exp(1.0) * lg / 0.01));
  const std::int64_t depth =
      static_cast<std::int64_t>(std::ceil(2.0 * std::log(1000.0)));
  CHECK(d.stored_words() == d.levels() * width * depth);
  CHECK_THROWS_AS(DyadicCountMin(0, 0.1, 1), InputError);
  CHECK_THROWS_AS(DyadicCountMin(10, 0.0, 1), InputError);
}

TEST_CASE("range estimates overcount but stay within the error budget") {
  const std::int64_t n = 512;
  DyadicCountMin d(n, 0.05, 44);
  std::vector<std::int64_t> freq(n + 1, 0);
  Rng rng(5);
  for (int i = 0; i < 20000; ++i) {
    const std::int64_t x = rng.next_int(1, n);
    d.update(x, 1);
    freq[x]++;
  }
  CHECK(d.total() == 20000);
  const double budget = d.error_budget();
  CHECK(budget == doctest::Approx(0.05 * 20000 * std::log2(512.0)));
  for (int it = 0; it < 200; ++it) {
    const std::int64_t a = rng.next_int(1, n);
    const std::int64_t b = rng.next_int(a, n);
    std::int64_t truth = 0;
    for (std::int64_t x = a; x <= b; ++x) truth += freq[x];
    const std::int64_t est = d.range_estimate(a, b);
    CHECK(est >= truth);
    CHECK(static_cast<double>(est - truth) <= budget);
  }
}

TEST_CASE("deletions cancel inserts in range queries") {
  DyadicCountMin d(64, 0.02, 3, true);
  std::vector<std::int64_t> freq(65, 0);
  Rng rng(8);
  std::vector<std::int64_t> live;
  for (int i = 0; i < 3000; ++i) {
    const std::int64_t x = rng.next_int(1, 64);
    d.update(x, 1);
    freq[x]++;
    live.push_back(x);
  }
  // Delete a random 40% of the live elements.
  for (std::size_t i = 0; i < live.size(); ++i) {
    if (rng.next_bernoulli(0.4)) {
      d.update(live[i], -1);
      freq[live[i]]--;
    }
  }
  for (int it = 0; it < 100; ++it) {
    const std::int64_t a = rng.next_int(1, 64);
    const std::int64_t b = rng.next_int(a, 64);
    std::int64_t truth = 0;
    for (std::int64_t x = a; x <= b; ++x) truth += freq[x];
    const std::int64_t est = d.range_estimate(a, b);
    CHECK(est >= truth);
    CHECK(static_cast<double>(est - truth) <= d.error_budget());
  }
}

TEST_CASE("full-domain range equals the exact total under churn") {
  // [1, N] touches every element exactly once per level decomposition, and the
  // root-level node sums all net counts, so the estimate at full span can only
  // pick up collisions — with one node per level there are none.
  DyadicCountMin d(128, 0.05, 21);
  Rng rng(31);
  std::int64_t net = 0;
  std::vector<std::int64_t> stack;
  for (int i = 0; i < 4000; ++i) {
    if (!stack.empty() && rng.next_bernoulli(0.3)) {
      d.update(stack.back(), -1);
      stack.pop_back();
      --net;
    } else {
      const std::int64_t x = rng.next_int(1, 128);
      d.update(x, 1);
      stack.push_back(x);
      ++net;
    }
  }
  CHECK(d.total() == net);
  CHECK(d.range_estimate(1, 128) == net);
}

TEST_CASE("track_exact rejects deleting more than was inserted") {
  DyadicCountMin d(16, 0.1, 2, true);
  d.update(3, 1);
  d.update(3, -1);
  CHECK_THROWS_AS(d.update(3, -1), InputError);
  CHECK_THROWS_AS(d.update(5, -1), InputError);
  CHECK_THROWS_AS(d.update(0, 1), InputError);
  CHECK_THROWS_AS(d.update(17, 1), InputError);
  CHECK_THROWS_AS(d.update(3, 2), InputError);
}

TEST_CASE("range query clamps bounds and handles single points") {
  DyadicCountMin d(32, 0.1, 6);
  d.update(7, 1);
  d.update(7, 1);
  d.update(32, 1);
  CHECK(d.range_estimate(7, 7) >= 2);
  CHECK(d.range_estimate(32, 32) >= 1);
  CHECK(d.range_estimate(1, 6) >= 0);
  // Out-of-domain ends clamp; inverted ranges are empty. Callers probe
  // speculative ranges, so these are not errors.
  CHECK(d.range_estimate(0, 40) == d.range_estimate(1, 32));
  CHECK(d.range_estimate(9, 8) == 0);
  CHECK(d.range_estimate(-5, 0) == 0);
}

TEST_CASE("a domain of one value still works") {
  DyadicCountMin d(1, 0.5, 10);
  d.update(1, 1);
  d.update(1, 1);
  CHECK(d.range_estimate(1, 1) == 2);
  CHECK(d.levels() == 1);
}
