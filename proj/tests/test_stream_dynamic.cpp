#include "doctest.h"

#include <cmath>
#include <map>

#include "core/cut.hpp"
#include "stream/dynamic.hpp"
#include "test_helpers.hpp"

using namespace geocut;

namespace {

stream::DynOptions desk_options(double eps, double big_d, std::size_t n_hint) {
  stream::DynOptions opts;
  opts.epsilon = eps;
  opts.big_d = big_d;
  opts.n_hint = n_hint;
  return opts;
}

}  // namespace

TEST_CASE("dynamic parameter formulas") {
  auto p = stream::dyn_params(50, 0.5, 2.0);
  CHECK(p.greedy.t_e == 200);
  const double ln200 = std::log(200.0);
  CHECK(p.greedy.gamma ==
        doctest::Approx((2.0 * ln200 + 1.0) * (2.0 * ln200 + 1.0) / 0.25));
  CHECK(p.eps_pr == doctest::Approx(0.5 / ln200));
  CHECK(p.greedy.t0 ==
        static_cast<std::int64_t>(
            std::ceil(std::max(std::sqrt(p.greedy.gamma) * 2.0 / 0.5, 2.0))));
  CHECK(p.pool_size >= 8 * (p.greedy.t0 + p.greedy.gamma * std::log(200.0)) / 0.5);
}

TEST_CASE("geometric sampler contract") {
  auto oracle = testutil::oracle_for(900);
  const double big_d = 2.0;
  const double eps_pr = 0.1;
  stream::ExactSimGeoSampler sampler(2.0, big_d, eps_pr, 0.0, oracle);
  auto ds = testutil::random_grid_dataset(901, 6, 2, 2.0, 40);
  for (const auto& x : ds.points) sampler.update(true, x);

  // Determinism per index, independence across indices.
  auto a = sampler.draw(7);
  auto b = sampler.draw(7);
  CHECK(a.point == b.point);
  CHECK(a.p_star == b.p_star);

  // Marginals: P[draw = x] = degrees(x)/total / D, bot rate 1 - 1/D.
  auto summary = core::distance_summary(ds);
  std::map<core::Point, int> hits;
  int bots = 0;
  const int draws = 20000;
  for (int j = 0; j < draws; ++j) {
    auto d = sampler.draw(1000 + j);
    if (!d.point.has_value()) {
      ++bots;
      continue;
    }
    ++hits[*d.point];
    // p* sandwich against the true marginal.
    const double p_true = sampler.marginal(*d.point);
    CHECK(d.p_star >= p_true - 1e-12);
    CHECK(d.p_star <= (1.0 + eps_pr) * p_true + 1e-12);
  }
  const double bot_rate = static_cast<double>(bots) / draws;
  CHECK(bot_rate == doctest::Approx(1.0 - 1.0 / big_d).epsilon(0.05));
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const double expect = summary.degrees[i] / summary.total / big_d;
    const double freq = static_cast<double>(hits[ds.points[i]]) / draws;
    const double sigma = std::sqrt(expect * (1.0 - expect) / draws);
    CHECK(std::abs(freq - expect) <= 4.0 * sigma + 1e-3);
  }

  CHECK_THROWS(sampler.update(false, core::Point{39.0, 39.0}));
}

TEST_CASE("linearity: churn equals fresh ingestion of survivors") {
  auto oracle = testutil::oracle_for(910);
  std::mt19937_64 gen(5);
  for (int script = 0; script < 60; ++script) {
    stream::ExactSimGeoSampler churned(2.0, 2.0, 0.05, 0.0, oracle);
    std::set<core::Point> live;
    std::uniform_int_distribution<int> coord(1, 12);
    for (int op = 0; op < 40; ++op) {
      core::Point x{static_cast<double>(coord(gen)), static_cast<double>(coord(gen))};
      if (live.count(x)) {
        if (gen() & 1) {
          churned.update(false, x);
          live.erase(x);
        }
      } else {
        churned.update(true, x);
        live.insert(x);
      }
    }
    if (live.size() < 2) continue;
    stream::ExactSimGeoSampler fresh(2.0, 2.0, 0.05, 0.0, oracle);
    for (const auto& x : live) fresh.update(true, x);
    for (std::uint64_t j = 0; j < 32; ++j) {
      auto a = churned.draw(j);
      auto b = fresh.draw(j);
      CHECK(a.point == b.point);
      CHECK(a.p_star == b.p_star);
    }
  }
}

TEST_CASE("engine updates, errors, and degenerate final sets") {
  auto oracle = testutil::oracle_for(920);
  stream::DynamicEngine eng(2, 32, 2.0, oracle, desk_options(0.4, 2.0, 12));
  eng.update(true, {1.0, 1.0});
  CHECK_THROWS(eng.update(false, {2.0, 2.0}));  // absent delete
  eng.update(true, {2.0, 2.0});
  eng.update(false, {1.0, 1.0});
  CHECK_THROWS(eng.finalize());  // single survivor
  eng.update(true, {5.0, 9.0});
  eng.finalize();
  CHECK(eng.finalized());
  auto row = eng.assign_query({2.0, 2.0});
  CHECK((row == core::Row::kSideZero || row == core::Row::kSideOne));
  CHECK_THROWS(eng.assign_query({1.0, 1.0}));  // deleted point
}

TEST_CASE("build consumes one draw per kept slot and stays within the pool") {
  auto ds = testutil::random_grid_dataset(930, 8, 2, 2.0, 64);
  for (int k = 0; k < 20; ++k) {
    auto oracle = testutil::oracle_for(94000 + k);
    stream::DynamicEngine eng(2, 64, 2.0, oracle, desk_options(0.35, 2.0, ds.size()));
    for (const auto& x : ds.points) eng.update(true, x);
    eng.finalize();
    REQUIRE(!eng.report().build_failed);

    // Draws consumed = number of kept mask slots.
    std::size_t kept = 0;
    for (std::int64_t t = 1; t <= eng.params().greedy.t_e; ++t)
      if (rng::mask_bit(oracle, rng::OwnerId::global(), eng.params().greedy.timeline(), t))
        ++kept;
    CHECK(eng.report().draws_consumed == kept);
    CHECK(eng.report().draws_consumed < eng.params().pool_size / 2);

    // At most one entry per kept slot: the summary cannot exceed the number
    // of consumed draws.
    CHECK(eng.report().summary_size <= eng.report().draws_consumed);
  }
}

TEST_CASE("query sweep equals the correlated process under a shared key") {
  for (std::uint64_t inst = 0; inst < 8; ++inst) {
    auto ds = testutil::random_grid_dataset(950 + inst, 6 + inst % 5, 2,
                                            (inst % 2) ? 1.0 : 2.0, 64);
    const double eps = 0.35, big_d = 2.0;
    for (int k = 0; k < 3; ++k) {
      auto oracle = testutil::oracle_for(96000 + 10 * inst + k);
      stream::DynamicEngine eng(2, 64, ds.p, oracle,
                                desk_options(eps, big_d, ds.size()));
      for (const auto& x : ds.points) eng.update(true, x);
      eng.finalize();
      REQUIRE(!eng.report().build_failed);

      std::vector<double> w_scaled(ds.size());
      for (std::size_t i = 0; i < ds.size(); ++i)
        w_scaled[i] = eng.weight_of(ds.points[i]) / (2.0 * big_d);
      auto zstar = core::brute_force_opt(ds).cut;
      auto proc = stream::correlated_greedy_oracle(ds, w_scaled, eng.params(), zstar,
                                                   oracle, eng.sampler());

      CHECK(proc.m == eng.report().m);
      eng.set_seed_override(proc.sigma);
      int activated = 0;
      for (std::size_t i = 0; i < ds.size(); ++i) {
        CHECK(eng.activation_time(ds.points[i], eng.params().greedy.t_e) ==
              proc.act_times[i]);
        if (!proc.act_times[i].has_value()) {
          CHECK(proc.cut.rows[i] == core::Row::kUnassigned);
          continue;
        }
        ++activated;
        CHECK(eng.assign_query(ds.points[i]) == proc.cut.rows[i]);
        if (*proc.act_times[i] <= eng.params().greedy.t0)
          CHECK(proc.cut.rows[i] == zstar.rows[i]);
      }
      CHECK(activated > 0);
    }
  }
}

TEST_CASE("per-slot marginal at t=1 matches the analytic value") {
  auto ds = testutil::random_grid_dataset(970, 5, 2, 2.0, 32);
  auto summary = core::distance_summary(ds);
  const double big_d = 2.0;
  const double eps = 0.4;

  // At t=1 the mask keeps everything and min{1/p*,1} = 1, so the activation
  // marginal for cell (i,1) is exactly the sampler marginal.
  const core::Point probe = ds.points[2];
  double p_cell = 0.0;
  {
    std::size_t i = 2;
    p_cell = summary.degrees[i] / summary.total / big_d;
  }
  int hits = 0;
  const int keys = 4000;
  for (int k = 0; k < keys; ++k) {
    auto oracle = testutil::oracle_for(98000 + k);
    stream::DynamicEngine eng(2, 32, 2.0, oracle, desk_options(eps, big_d, ds.size()));
    for (const auto& x : ds.points) eng.update(true, x);
    eng.finalize();
    if (eng.report().build_failed) continue;
    const auto t_act = eng.activation_time(probe, 1);
    if (t_act.has_value() && *t_act == 1) ++hits;
  }
  const double freq = static_cast<double>(hits) / keys;
  const double sigma = std::sqrt(p_cell * (1.0 - p_cell) / keys);
  CHECK(std::abs(freq - p_cell) <= 3.0 * sigma + 2e-3);
}
