#include "doctest.h"

#include <cmath>
#include <set>

#include "rng/oracle.hpp"
#include "rng/timeline.hpp"
#include "test_helpers.hpp"

using namespace geocut;

TEST_CASE("oracle determinism and key sensitivity") {
  auto oracle = testutil::oracle_for(1);
  const auto owner = rng::OwnerId::by_index(3);
  const double u1 = oracle.uniform(owner, rng::StreamTag::kTimeline, 42);
  const double u2 = oracle.uniform(owner, rng::StreamTag::kTimeline, 42);
  CHECK(u1 == u2);
  CHECK(u1 >= 0.0);
  CHECK(u1 < 1.0);

  // Distinct streams and distinct owners decouple.
  CHECK(oracle.uniform(owner, rng::StreamTag::kMask, 42) != u1);
  CHECK(oracle.uniform(rng::OwnerId::by_index(4), rng::StreamTag::kTimeline, 42) != u1);

  // Key change flips almost every variate.
  auto other = testutil::oracle_for(2);
  int changed = 0;
  for (std::uint64_t t = 0; t < 1000; ++t) {
    if (oracle.uniform(owner, rng::StreamTag::kTimeline, t) !=
        other.uniform(owner, rng::StreamTag::kTimeline, t))
      ++changed;
  }
  CHECK(changed >= 990);
}

TEST_CASE("uniform variates have the right mean") {
  auto oracle = testutil::oracle_for(3);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i)
    sum += oracle.uniform(rng::OwnerId::global(), rng::StreamTag::kTimeline, i);
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("hex key round trip") {
  auto oracle = rng::RandomOracle::from_hex("00ff00ff00ff00ff00ff00ff00ff00ff");
  REQUIRE(oracle.has_value());
  CHECK(oracle->key_hex() == "00ff00ff00ff00ff00ff00ff00ff00ff");
  auto short_key = rng::RandomOracle::from_hex("ab");
  REQUIRE(short_key.has_value());
  CHECK(short_key->key_hex() == "000000000000000000000000000000ab");
  CHECK(!rng::RandomOracle::from_hex("xyz").has_value());
  CHECK(!rng::RandomOracle::from_hex("").has_value());
}

TEST_CASE("mask rates") {
  rng::TimelineParams p{5, 100, 10.0};
  CHECK(rng::mask_rate(p, 3) == 1.0);
  CHECK(rng::mask_rate(p, 5) == 1.0);
  CHECK(rng::mask_rate(p, 20) == doctest::Approx(0.5));
  CHECK(rng::mask_rate(p, 8) == 1.0);  // min{10/8, 1} caps at 1

  auto oracle = testutil::oracle_for(4);
  for (std::int64_t t = 1; t <= 5; ++t)
    CHECK(rng::mask_bit(oracle, rng::OwnerId::by_index(0), p, t));
}

TEST_CASE("timeline threshold switch and monotonicity in w") {
  auto oracle = testutil::oracle_for(5);

  // Pre-activation threshold is min{w, 1/t}.
  for (std::uint64_t k = 0; k < 50; ++k) {
    const auto owner = rng::OwnerId::by_index(k);
    rng::TimelineView tv(oracle, owner, 0.25);
    const double u1 = oracle.uniform(owner, rng::StreamTag::kTimeline, 1);
    CHECK(tv.bit(1) == (u1 < 0.25));
  }

  // Lowering w never creates activity: activation times only move later and
  // the activated-and-kept set only shrinks (pointwise per key).
  rng::TimelineParams p{4, 64, 6.0};
  for (std::uint64_t k = 0; k < 300; ++k) {
    const auto owner = rng::OwnerId::by_index(1000 + k);
    rng::TimelineView hi(oracle, owner, 0.5);
    rng::TimelineView lo(oracle, owner, 0.17);
    auto thi = hi.activation_time(p.t_e);
    auto tlo = lo.activation_time(p.t_e);
    if (tlo.has_value()) {
      REQUIRE(thi.has_value());
      CHECK(*thi <= *tlo);
    }
    auto hi_kept = hi.active_kept(p);
    auto lo_kept = lo.active_kept(p);
    std::set<std::int64_t> hi_set(hi_kept.begin(), hi_kept.end());
    // Every kept slot of the lower weight is covered only if the slot is also
    // active under the higher weight; keeping depends solely on the mask.
    for (auto t : lo_kept) {
      CHECK(hi.bit(t));
      CHECK(rng::mask_bit(oracle, owner, p, t));
    }
    CHECK((lo_kept.empty() || !hi_set.empty()));
  }
}

TEST_CASE("activation frequency matches the product formula") {
  // P[not activated by t_e] = prod_t (1 - min{w, 1/t}).
  const double w = 0.5;
  const std::int64_t t_e = 100;
  double p_none = 1.0;
  for (std::int64_t t = 1; t <= t_e; ++t)
    p_none *= 1.0 - std::min(w, 1.0 / static_cast<double>(t));

  int none = 0;
  const int keys = 10000;
  for (int k = 0; k < keys; ++k) {
    auto oracle = testutil::oracle_for(10000 + k);
    if (!rng::activation_time(oracle, rng::OwnerId::by_index(0), w, t_e).has_value())
      ++none;
  }
  const double freq = static_cast<double>(none) / keys;
  const double sigma = std::sqrt(p_none * (1.0 - p_none) / keys);
  CHECK(std::abs(freq - p_none) <= 3.0 * sigma + 1e-4);
}

TEST_CASE("activation-by-t frequency matches analytic product") {
  const double w = 0.3;
  const std::int64_t horizon = 12;
  double p_by_t = 1.0;
  for (std::int64_t t = 1; t <= horizon; ++t)
    p_by_t *= 1.0 - std::min(w, 1.0 / static_cast<double>(t));
  p_by_t = 1.0 - p_by_t;

  int hits = 0;
  const int keys = 10000;
  for (int k = 0; k < keys; ++k) {
    auto oracle = testutil::oracle_for(777000 + k);
    auto t = rng::activation_time(oracle, rng::OwnerId::by_index(1), w, horizon);
    if (t.has_value()) ++hits;
  }
  const double freq = static_cast<double>(hits) / keys;
  const double sigma = std::sqrt(p_by_t * (1.0 - p_by_t) / keys);
  CHECK(std::abs(freq - p_by_t) <= 3.0 * sigma + 1e-4);
}
