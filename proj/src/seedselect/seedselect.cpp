#include "seedselect/seedselect.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace geocut::seedselect {

std::vector<double> check_probs(const std::vector<double>& w, double xi) {
  std::vector<double> probs(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) probs[i] = std::min(xi * w[i], 1.0);
  return probs;
}

std::vector<CheckSample> draw_check_set(
    const core::Dataset& ds, const std::vector<double>& probs,
    const std::vector<std::optional<std::int64_t>>& act_times,
    const rng::RandomOracle& oracle, const std::vector<rng::OwnerId>& owners,
    const std::vector<std::uint32_t>& keys) {
  std::vector<CheckSample> out;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    if (oracle.uniform(owners[i], rng::StreamTag::kCheck, 0) < probs[i])
      out.push_back(CheckSample{static_cast<std::uint32_t>(i), probs[i], act_times[i],
                                keys.empty() ? i : keys[i]});
  }
  return out;
}

double estimate_f(const core::Dataset& ds,
                  const std::function<core::Row(const CheckSample&)>& side_of,
                  const std::vector<CheckSample>& samples) {
  // Accumulation runs in canonical key order so every backend that derives
  // the same sample set reproduces the same floating-point estimate.
  std::vector<CheckSample> ordered = samples;
  std::sort(ordered.begin(), ordered.end(),
            [](const CheckSample& a, const CheckSample& b) { return a.key < b.key; });
  std::vector<core::Row> side(ordered.size());
  for (std::size_t a = 0; a < ordered.size(); ++a) side[a] = side_of(ordered[a]);
  double est = 0.0;
  for (std::size_t a = 0; a < ordered.size(); ++a) {
    for (std::size_t b = a + 1; b < ordered.size(); ++b) {
      if (side[a] != side[b]) continue;
      est += ds.dist(ordered[a].point, ordered[b].point) /
             (ordered[a].prob * ordered[b].prob);
    }
  }
  return est;
}

SeedChoice select_seed(const core::Dataset& ds, greedy::AssignSession& session,
                       const std::vector<CheckSample>& samples, std::size_t cap_m) {
  const std::size_t m = session.seed_length();
  const std::size_t enumerated = std::min(m, cap_m);

  SeedChoice choice;
  choice.truncated = m > cap_m;

  const std::uint64_t total = 1ULL << enumerated;
  bool have_best = false;
  for (std::uint64_t u = 0; u < total; ++u) {
    greedy::Seed seed = greedy::Seed::from_integer(u, m);
    session.apply_seed(seed);
    const double est = estimate_f(
        ds,
        [&](const CheckSample& s) {
          if (!s.t_act.has_value()) return core::Row::kSideZero;
          return session.assign(s.point, *s.t_act);
        },
        samples);
    if (!have_best || est < choice.estimate) {
      have_best = true;
      choice.estimate = est;
      choice.seed = std::move(seed);
    }
  }
  if (!have_best) {
    choice.seed = greedy::Seed::from_integer(0, m);
    choice.estimate = 0.0;
  }
  session.apply_seed(choice.seed);
  return choice;
}

double pair_estimator(const core::Dataset& ds,
                      const std::function<core::Row(std::uint32_t)>& side_of,
                      const std::vector<PairSample>& pairs) {
  if (pairs.empty())
    throw std::invalid_argument("pair_estimator: no successful pairs");
  double est = 0.0;
  for (const PairSample& pr : pairs) {
    const core::Row za = side_of(pr.first);
    const core::Row zb = side_of(pr.second);
    if (za != zb) continue;
    est += ds.dist(pr.first, pr.second) / (pr.p_first * pr.p_second);
  }
  return est / (2.0 * static_cast<double>(pairs.size()));
}

}  // namespace geocut::seedselect
