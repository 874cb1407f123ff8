#include "doctest.h"

#include <cmath>

#include "core/cut.hpp"
#include "greedy/pipeline.hpp"
#include "seedselect/seedselect.hpp"
#include "weights/weights.hpp"
#include "test_helpers.hpp"

using namespace geocut;

namespace {

std::vector<std::optional<std::int64_t>> trivial_act_times(std::size_t n) {
  return std::vector<std::optional<std::int64_t>>(n, std::int64_t{1});
}

}  // namespace

TEST_CASE("check set draw probabilities") {
  auto ds = testutil::random_dataset(71, 10, 2, 2.0);
  auto w = weights::compatible_transform(weights::exact_weights(ds)).w;
  const auto owners = greedy::make_owners(ds, greedy::Addressing::kByRank);
  const auto acts = trivial_act_times(ds.size());

  // Clamped probabilities: everything sampled.
  auto all = seedselect::draw_check_set(ds, seedselect::check_probs(w, 1e9), acts,
                                        testutil::oracle_for(1), owners);
  CHECK(all.size() == ds.size());

  // Zero rate: nothing sampled.
  auto none = seedselect::draw_check_set(ds, seedselect::check_probs(w, 0.0), acts,
                                         testutil::oracle_for(1), owners);
  CHECK(none.empty());

  // Mean size within 3 sigma of sum of probabilities.
  const double xi = 6.0;
  auto probs = seedselect::check_probs(w, xi);
  double expected = 0.0, variance = 0.0;
  for (double pr : probs) {
    expected += pr;
    variance += pr * (1.0 - pr);
  }
  const int keys = 500;
  double mean = 0.0;
  for (int k = 0; k < keys; ++k)
    mean += static_cast<double>(seedselect::draw_check_set(
                                    ds, probs, acts, testutil::oracle_for(600 + k), owners)
                                    .size());
  mean /= keys;
  const double sigma = std::sqrt(variance / keys);
  CHECK(std::abs(mean - expected) <= 3.0 * sigma + 1e-6);
}

TEST_CASE("estimate_f is exact at full sampling and unbiased under subsampling") {
  auto ds = testutil::random_dataset(73, 10, 2, 2.0);
  auto z = testutil::random_complete_cut(3, ds.size());
  const double truth = core::objective_f(ds, z);
  auto side_of = [&](const seedselect::CheckSample& s) { return z.rows[s.point]; };

  // C = X with probs 1: exactly f.
  std::vector<seedselect::CheckSample> full;
  for (std::size_t i = 0; i < ds.size(); ++i)
    full.push_back({static_cast<std::uint32_t>(i), 1.0, std::int64_t{1}});
  CHECK(seedselect::estimate_f(ds, side_of, full) == doctest::Approx(truth));

  // Empty sample: 0.
  CHECK(seedselect::estimate_f(ds, side_of, {}) == 0.0);

  // Monte-Carlo mean over keys approaches f.
  auto w = weights::compatible_transform(weights::exact_weights(ds)).w;
  auto probs = seedselect::check_probs(w, 8.0);
  const auto owners = greedy::make_owners(ds, greedy::Addressing::kByRank);
  const auto acts = trivial_act_times(ds.size());
  double mean = 0.0;
  const int keys = 2000;
  for (int k = 0; k < keys; ++k) {
    auto samples = seedselect::draw_check_set(ds, probs, acts,
                                              testutil::oracle_for(80000 + k), owners);
    mean += seedselect::estimate_f(ds, side_of, samples);
  }
  mean /= keys;
  CHECK(mean == doctest::Approx(truth).epsilon(0.02));
}

TEST_CASE("seed selection poses and solves the argmin") {
  // m = 0: empty seed, single candidate.
  core::Dataset two;
  two.p = 2.0;
  two.points = {{0.0}, {1.0}};
  greedy::GreedyParams params;
  params.t_e = 50;
  params.t0 = 2;
  params.gamma = 10.0;
  greedy::TimelineMaskSummary empty;
  empty.t0 = params.t0;
  greedy::AssignSession session(two, empty, params, greedy::AssignMode::kStatic);
  auto choice = seedselect::select_seed(two, session, {});
  CHECK(choice.seed.length() == 0);
  CHECK(!choice.truncated);

  // With full sampling the chosen seed reaches the family optimum exactly.
  for (std::uint64_t inst = 0; inst < 6; ++inst) {
    auto ds = testutil::random_dataset(500 + inst, 8, 2, 2.0);
    greedy::PipelineOptions opts;
    opts.epsilon = 0.3;
    auto res = greedy::run_reference_pipeline(ds, opts, testutil::oracle_for(40 + inst));
    // xi at these scales clamps every check probability to one.
    CHECK(res.check_size == ds.size());
  }
}

TEST_CASE("pair estimator") {
  core::Dataset two;
  two.p = 2.0;
  two.points = {{0.0}, {3.0}};
  auto side_same = [](std::uint32_t) { return core::Row::kSideZero; };

  // Exact p* and every ordered pair drawn once: the estimator recovers f
  // exactly (2-point instance, uniform degree distribution, f = 3).
  std::vector<seedselect::PairSample> all_pairs = {
      {0, 0, 0.5, 0.5}, {0, 1, 0.5, 0.5}, {1, 0, 0.5, 0.5}, {1, 1, 0.5, 0.5}};
  CHECK(seedselect::pair_estimator(two, side_same, all_pairs) == doctest::Approx(3.0));

  auto side_split = [](std::uint32_t i) {
    return i == 0 ? core::Row::kSideZero : core::Row::kSideOne;
  };
  CHECK(seedselect::pair_estimator(two, side_split, all_pairs) == doctest::Approx(0.0));

  // A single same-side pair realization: d / (2 p1 p2).
  std::vector<seedselect::PairSample> one = {{0, 1, 0.5, 0.5}};
  CHECK(seedselect::pair_estimator(two, side_same, one) == doctest::Approx(6.0));

  CHECK_THROWS(seedselect::pair_estimator(two, side_same, {}));
}

TEST_CASE("pair estimator monte carlo bias stays within the perturbation bound") {
  auto ds = testutil::random_dataset(91, 6, 2, 2.0);
  auto z = testutil::random_complete_cut(5, ds.size());
  const double truth = core::objective_f(ds, z);
  auto summary = core::distance_summary(ds);

  // Simulate the sampler: draw points proportional to degree, report p*
  // inflated by up to (1+eps_pr).
  const double eps_pr = 0.1;
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto draw = [&]() {
    double u = unif(gen) * summary.total;
    std::size_t i = 0;
    while (i + 1 < ds.size() && u > summary.degrees[i]) {
      u -= summary.degrees[i];
      ++i;
    }
    const double p_true = summary.degrees[i] / summary.total;
    return std::pair<std::uint32_t, double>(static_cast<std::uint32_t>(i),
                                            p_true * (1.0 + eps_pr * unif(gen)));
  };

  double mean = 0.0;
  const int trials = 5000;
  for (int t = 0; t < trials; ++t) {
    std::vector<seedselect::PairSample> pairs;
    for (int h = 0; h < 4; ++h) {
      auto [a, pa] = draw();
      auto [b, pb] = draw();
      pairs.push_back({a, b, pa, pb});
    }
    mean += seedselect::pair_estimator(
        ds, [&](std::uint32_t i) { return z.rows[i]; }, pairs);
  }
  mean /= trials;
  CHECK(mean >= truth / ((1 + eps_pr) * (1 + eps_pr)) * 0.93);
  CHECK(mean <= truth * 1.07);
}
