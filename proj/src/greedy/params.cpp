#include "greedy/params.hpp"

#include <cmath>
#include <stdexcept>

namespace geocut::greedy {

GreedyParams compute_params(std::size_t n, double eps, double lambda) {
  if (eps <= 0.0 || eps >= 1.0) throw std::invalid_argument("eps must be in (0,1)");
  if (lambda < 1.0) throw std::invalid_argument("lambda must be >= 1");
  if (n < 2) throw std::invalid_argument("n must be >= 2");
  GreedyParams p;
  p.epsilon = eps;
  p.lambda = lambda;
  p.t_e = static_cast<std::int64_t>(std::ceil(static_cast<double>(n) * lambda / eps));
  const double ln_te = std::log(static_cast<double>(p.t_e));
  p.gamma = (ln_te + 1.0) * (ln_te + 1.0) * lambda / (eps * eps);
  const double t0 = std::max(std::sqrt(p.gamma * lambda) / eps, 1.0 / eps);
  p.t0 = static_cast<std::int64_t>(std::ceil(t0));
  return p;
}

double xi_for(double lambda, double m_proxy, double ln_universe, double eps,
              double delta) {
  const double log_term = m_proxy + ln_universe - std::log(delta);
  return 4.0 * lambda * lambda * lambda * log_term * log_term * log_term /
         (eps * eps);
}

}  // namespace geocut::greedy
