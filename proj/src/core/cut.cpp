#include "core/cut.hpp"

#include <stdexcept>

namespace geocut::core {

double objective_f(const Dataset& ds, const Cut& z) {
  const std::size_t n = ds.size();
  if (z.rows.size() != n) throw std::invalid_argument("objective_f: size mismatch");
  double f = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (z.rows[i] == Row::kUnassigned) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (z.rows[j] == z.rows[i]) f += ds.dist(i, j);
    }
  }
  return f;
}

double cut_value(const Dataset& ds, const Cut& z) {
  const std::size_t n = ds.size();
  if (z.rows.size() != n) throw std::invalid_argument("cut_value: size mismatch");
  if (!z.complete()) throw std::invalid_argument("cut_value: cut must be complete");
  double v = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (z.rows[i] != z.rows[j]) v += ds.dist(i, j);
  return v;
}

BruteForceResult brute_force_opt(const Dataset& ds, std::size_t cap) {
  const std::size_t n = ds.size();
  if (n == 0) throw std::invalid_argument("brute_force_opt: empty dataset");
  if (n > cap) throw std::invalid_argument("brute_force_opt: n exceeds cap");

  const auto dm = distance_matrix(ds);
  Cut best = Cut::unassigned(n);
  double best_f = 0.0;
  bool have_best = false;

  Cut cand = Cut::unassigned(n);
  const std::uint64_t limit = n == 1 ? 1 : (1ULL << (n - 1));
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    cand.rows[0] = Row::kSideZero;
    for (std::size_t i = 1; i < n; ++i)
      cand.rows[i] = ((mask >> (i - 1)) & 1) ? Row::kSideOne : Row::kSideZero;
    double f = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (cand.rows[i] == cand.rows[j]) f += dm[i][j];
    if (!have_best || f < best_f) {
      best = cand;
      best_f = f;
      have_best = true;
    }
  }
  return BruteForceResult{best, best_f};
}

}  // namespace geocut::core
