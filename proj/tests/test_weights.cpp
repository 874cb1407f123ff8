#include "doctest.h"

#include <numeric>

#include "weights/weights.hpp"
#include "test_helpers.hpp"

using namespace geocut;

TEST_CASE("exact weights") {
  auto tri = testutil::triangle_unit();
  auto w = weights::exact_weights(tri);
  for (double wi : w.w) CHECK(wi == doctest::Approx(1.0 / 3.0));

  core::Dataset line;
  line.p = 1.0;
  line.points = {{0.0}, {0.0}, {1.0}};
  auto wl = weights::exact_weights(line);
  CHECK(wl.w[0] == doctest::Approx(0.25));
  CHECK(wl.w[1] == doctest::Approx(0.25));
  CHECK(wl.w[2] == doctest::Approx(0.5));

  auto ds = testutil::random_dataset(23, 10, 3, 2.0);
  auto wr = weights::exact_weights(ds);
  const double sum = std::accumulate(wr.w.begin(), wr.w.end(), 0.0);
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

  // Lemma-scale lower bound: every exact weight is at least 1/(2n).
  for (double wi : wr.w) CHECK(wi >= 1.0 / (2.0 * ds.size()) - 1e-12);

  core::Dataset degenerate;
  degenerate.points = {{1.0, 1.0}, {1.0, 1.0}};
  CHECK_THROWS(weights::exact_weights(degenerate));
}

TEST_CASE("sketched weights sandwich") {
  auto ds = testutil::random_dataset(29, 8, 2, 2.0);
  auto exact = weights::exact_weights(ds);

  auto same = weights::sketched_weights(ds, 0.0, 0.0, testutil::oracle_for(1));
  for (std::size_t i = 0; i < ds.size(); ++i)
    CHECK(same.weights.w[i] == doctest::Approx(exact.w[i]));

  const double eps = 0.5;
  double max_mult = 1.0, min_mult = 2.0;
  for (int k = 0; k < 1000; ++k) {
    auto sk = weights::sketched_weights(ds, eps, 0.0, testutil::oracle_for(100 + k));
    for (std::size_t i = 0; i < ds.size(); ++i) {
      CHECK(sk.weights.w[i] >= exact.w[i] - 1e-12);
      CHECK(sk.weights.w[i] <= (1.0 + eps) * exact.w[i] + 1e-12);
      const double mult = sk.weights.w[i] / exact.w[i];
      max_mult = std::max(max_mult, mult);
      min_mult = std::min(min_mult, mult);
    }
  }
  CHECK(min_mult <= 1.05);
  CHECK(max_mult >= 1.45);

  // Failure events fire at roughly the requested rate.
  int failures = 0;
  for (int k = 0; k < 1000; ++k)
    failures += weights::sketched_weights(ds, 0.1, 0.2, testutil::oracle_for(5000 + k))
                    .failure_event;
  CHECK(failures > 120);
  CHECK(failures < 280);
}

TEST_CASE("triangle sketched stays in the sandwich") {
  auto tri = testutil::triangle_unit();
  auto sk = weights::sketched_weights(tri, 0.5, 0.0, testutil::oracle_for(9));
  for (double wi : sk.weights.w) {
    CHECK(wi >= 1.0 / 3.0 - 1e-12);
    CHECK(wi <= 0.5 + 1e-12);
  }
}

TEST_CASE("halving transform") {
  weights::WeightVector w;
  w.w = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  auto t = weights::compatible_transform(w);
  CHECK(t.lambda == 8.0);
  for (double wi : t.w) CHECK(wi == doctest::Approx(1.0 / 6.0));

  weights::WeightVector edge;
  edge.w = {1.0};
  CHECK(weights::compatible_transform(edge).w[0] == doctest::Approx(0.5));

  // Halved exact weights stay above 1/(4n) on random instances.
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto ds = testutil::random_dataset(40 + s, 9, 2, 2.0);
    auto halved = weights::compatible_transform(weights::exact_weights(ds));
    for (double wi : halved.w) {
      CHECK(wi >= 1.0 / (4.0 * ds.size()) - 1e-12);
      CHECK(wi <= 0.5 + 1e-12);
    }
  }
}

TEST_CASE("compatibility checker") {
  auto tri = testutil::triangle_unit();
  auto halved = weights::compatible_transform(weights::exact_weights(tri));
  auto rep = weights::check_compatibility(tri, halved, 8.0);
  CHECK(rep.ok);
  CHECK(rep.worst_ratio <= 8.0);

  weights::WeightVector zero;
  zero.w = {0.0, 1.0 / 6.0, 1.0 / 6.0};
  CHECK(!weights::check_compatibility(tri, zero, 8.0).ok);

  // lambda below the realized worst ratio must fail.
  CHECK(!weights::check_compatibility(tri, halved, rep.worst_ratio * 0.9).ok);

  // Halved exact weights are 8-compatible across random lp instances.
  for (std::uint64_t s = 0; s < 30; ++s) {
    const double p = (s % 2) ? 1.0 : 2.0;
    auto ds = testutil::random_dataset(60 + s, 10, 3, p);
    auto w = weights::compatible_transform(weights::exact_weights(ds));
    CHECK(weights::check_compatibility(ds, w, 8.0).ok);
  }
}

TEST_CASE("dynamic weight oracle") {
  auto ds = testutil::random_grid_dataset(31, 8, 2, 2.0, 40);
  auto exact = weights::exact_weights(ds);

  auto d1 = weights::dynamic_weight_oracle(ds, 1.0, testutil::oracle_for(2));
  for (std::size_t i = 0; i < ds.size(); ++i)
    CHECK(d1.weights.w[i] == doctest::Approx(exact.w[i]));

  const double big_d = 3.0;
  for (int k = 0; k < 50; ++k) {
    auto dk = weights::dynamic_weight_oracle(ds, big_d, testutil::oracle_for(300 + k));
    weights::WeightVector scaled;
    scaled.w = dk.weights.w;
    for (double& wi : scaled.w) wi /= 2.0 * big_d;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      CHECK(dk.weights.w[i] >= exact.w[i] - 1e-12);
      CHECK(dk.weights.w[i] <= big_d * exact.w[i] + 1e-12);
      CHECK(scaled.w[i] <= 0.5 + 1e-12);
    }
    // w(x)/(2D) weights are 8D-compatible (the lemma's scaling).
    CHECK(weights::check_compatibility(ds, scaled, 8.0 * big_d).ok);
  }
}

TEST_CASE("mode spec parsing") {
  auto e = weights::ModeSpec::parse("exact");
  REQUIRE(e.has_value());
  CHECK(e->mode == weights::Mode::kExact);
  auto s = weights::ModeSpec::parse("sketched:0.5:0.1");
  REQUIRE(s.has_value());
  CHECK(s->epsilon == doctest::Approx(0.5));
  CHECK(s->delta == doctest::Approx(0.1));
  auto d = weights::ModeSpec::parse("dynamic:2");
  REQUIRE(d.has_value());
  CHECK(d->big_d == doctest::Approx(2.0));
  CHECK(!weights::ModeSpec::parse("bogus").has_value());
  CHECK(!weights::ModeSpec::parse("sketched:2:0").has_value());
}
