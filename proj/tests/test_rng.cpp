#include <doctest.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <numeric>
#include <vector>

#include "dialogaug/rng.hpp"
#include "test_support.hpp"

using dialogaug::fnv1a64;
using dialogaug::Pcg32;

TEST_CASE("fnv1a64 reference vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
  static_assert(fnv1a64("") == 14695981039346656037ULL);
}

TEST_CASE("pcg32 matches the reference stream for seed 42") {
  const auto golden = nlohmann::json::parse(testing_support::read_text(testing_support::data_path("golden/pcg32_seed42_stream54.json")));
  Pcg32 rng(42);
  for (const auto& v : golden) CHECK(rng.next() == v.get<std::uint32_t>());
}

TEST_CASE("pcg32 reseed restarts the stream") {
  Pcg32 a(7);
  const auto first = a.next();
  a.next();
  a.reseed(7);
  CHECK(a.next() == first);
  CHECK(Pcg32(7, 1).next() != first);
}

TEST_CASE("bounded stays in range and hits every value") {
  Pcg32 rng(3);
  std::vector<int> seen(7, 0);
  for (int i = 0; i < 5000; ++i) {
    const auto v = rng.bounded(7);
    REQUIRE(v < 7);
    ++seen[v];
  }
  for (int c : seen) CHECK(c > 500);
  CHECK(rng.bounded(1) == 0);
  for (int i = 0; i < 200; ++i) {
    const auto v = rng.uniform_int(5, 12);
    CHECK(v >= 5);
    CHECK(v <= 12);
  }
}

TEST_CASE("unit lies in [0, 1)") {
  Pcg32 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("fisher-yates is a seeded permutation") {
  std::vector<int> a(50);
  std::iota(a.begin(), a.end(), 0);
  auto b = a;
  Pcg32 r1(99), r2(99);
  dialogaug::fisher_yates_shuffle(std::span<int>(a), r1);
  dialogaug::fisher_yates_shuffle(std::span<int>(b), r2);
  CHECK(a == b);
  auto sorted = a;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) CHECK(sorted[i] == i);
  std::vector<int> ident(50);
  std::iota(ident.begin(), ident.end(), 0);
  CHECK(a != ident);

  // hand-traced 3-element shuffle: swap(2, bounded(3)), swap(1, bounded(2))
  std::vector<int> small{0, 1, 2};
  Pcg32 trace(5), replay(5);
  dialogaug::fisher_yates_shuffle(std::span<int>(small), trace);
  std::vector<int> expect{0, 1, 2};
  std::swap(expect[2], expect[replay.bounded(3)]);
  std::swap(expect[1], expect[replay.bounded(2)]);
  CHECK(small == expect);
}
