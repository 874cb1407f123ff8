#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "core/cut.hpp"
#include "core/dataset.hpp"
#include "greedy/assign.hpp"
#include "greedy/summary.hpp"
#include "rng/oracle.hpp"

namespace geocut::seedselect {

struct CheckSample {
  std::uint32_t point = 0;
  double prob = 1.0;                         // min{xi * w_i, 1}
  std::optional<std::int64_t> t_act;         // nullopt: never activated
  std::uint64_t key = 0;                     // canonical rank, orders the sums
};

// Independent Bernoulli inclusion per point, realized through one critical
// variate per point so that decreasing probabilities re-derive the same set
// (the clean-up coupling used by every backend). keys carry the canonical
// ranks; when empty the point index is used.
std::vector<CheckSample> draw_check_set(
    const core::Dataset& ds, const std::vector<double>& probs,
    const std::vector<std::optional<std::int64_t>>& act_times,
    const rng::RandomOracle& oracle, const std::vector<rng::OwnerId>& owners,
    const std::vector<std::uint32_t>& keys = {});

std::vector<double> check_probs(const std::vector<double>& w, double xi);

// Importance-sampled estimate of f over the sampled subset: unordered
// same-side pairs weighted by 1/(prob_i * prob_j). Unbiased for f(z).
double estimate_f(const core::Dataset& ds,
                  const std::function<core::Row(const CheckSample&)>& side_of,
                  const std::vector<CheckSample>& samples);

struct SeedChoice {
  greedy::Seed seed;
  double estimate = 0.0;
  bool truncated = false;  // seed length exceeded the enumeration cap
};

// Scores every candidate seed with estimate_f over the check set and returns
// the argmin (ties to the smallest candidate integer). Beyond cap_m bits only
// the first cap_m are enumerated, the rest are pinned to zero, and the
// truncation is reported.
SeedChoice select_seed(const core::Dataset& ds, greedy::AssignSession& session,
                       const std::vector<CheckSample>& samples,
                       std::size_t cap_m = 24);

struct PairSample {
  std::uint32_t first = 0;
  std::uint32_t second = 0;
  double p_first = 1.0;   // reported sampling probability estimates
  double p_second = 1.0;
};

// 1/(2H) sum_h d(x_a, x_b) / (p*_a p*_b) [same side]; errors when H = 0.
double pair_estimator(const core::Dataset& ds,
                      const std::function<core::Row(std::uint32_t)>& side_of,
                      const std::vector<PairSample>& pairs);

}  // namespace geocut::seedselect
