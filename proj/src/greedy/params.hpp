#pragma once

#include <cstdint>

#include "rng/timeline.hpp"

namespace geocut::greedy {

struct GreedyParams {
  double epsilon = 0.5;
  double lambda = 8.0;
  std::int64_t t_e = 1;
  std::int64_t t0 = 1;
  double gamma = 1.0;

  rng::TimelineParams timeline() const { return rng::TimelineParams{t0, t_e, gamma}; }
};

// t_e = ceil(n*lambda/eps), gamma = (ln(t_e)+1)^2 * lambda / eps^2,
// t0 = ceil(max{sqrt(gamma*lambda)/eps, 1/eps}).
GreedyParams compute_params(std::size_t n, double eps, double lambda);

// Check-set rate: xi = 4 * lambda^3 * (m + ln(n/delta))^3 / eps^2. The m slot
// takes the realized seed length when known, or an a-priori proxy otherwise;
// ln_universe is ln(n) (d*ln(delta) in grid mode).
double xi_for(double lambda, double m_proxy, double ln_universe, double eps,
              double delta);

}  // namespace geocut::greedy
