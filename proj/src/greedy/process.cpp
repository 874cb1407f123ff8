#include "greedy/process.hpp"

#include <algorithm>
#include <stdexcept>

#include "rng/timeline.hpp"

namespace geocut::greedy {

namespace {

struct KeptTuple {
  std::uint32_t point;
  std::int64_t ell;
  double weight_at_ell;  // min{w, 1/ell} at first activation, w afterwards
};

}  // namespace

ProcessResult greedy_process_oracle(const core::Dataset& ds,
                                    const std::vector<double>& w,
                                    const GreedyParams& params,
                                    const core::Cut& z_star,
                                    const rng::RandomOracle& oracle,
                                    const std::vector<rng::OwnerId>& owners) {
  const std::size_t n = ds.size();
  if (!z_star.complete() || z_star.rows.size() != n)
    throw std::invalid_argument("greedy_process_oracle: z* must be a complete cut");

  const rng::TimelineParams tp = params.timeline();
  const auto dm = core::distance_matrix(ds);

  ProcessResult out;
  out.cut = core::Cut::unassigned(n);
  out.act_times.assign(n, std::nullopt);
  out.summary.t0 = params.t0;

  auto point_lex_less = [&](std::uint32_t a, std::uint32_t b) {
    if (core::lex_less(ds.points[a], ds.points[b])) return true;
    if (core::lex_less(ds.points[b], ds.points[a])) return false;
    return a < b;
  };

  std::vector<KeptTuple> kept;  // ordered by (ell, lex point)

  auto greedy_side = [&](std::size_t i, std::int64_t t) {
    double c0 = 0.0, c1 = 0.0;
    for (const KeptTuple& k : kept) {
      if (k.ell >= t) break;
      const core::Row zj = out.cut.rows[k.point];
      if (zj == core::Row::kUnassigned) continue;
      const double term =
          dm[i][k.point] / (k.weight_at_ell * rng::mask_rate(tp, k.ell));
      if (zj == core::Row::kSideZero)
        c0 += term;
      else
        c1 += term;
    }
    return c0 > c1 ? core::Row::kSideOne : core::Row::kSideZero;
  };

  for (std::int64_t t = 1; t <= params.t_e; ++t) {
    // Greedy rows for this round, decided against the strictly earlier prefix.
    std::vector<core::Row> g(n);
    for (std::size_t i = 0; i < n; ++i)
      g[i] = (t <= params.t0) ? z_star.rows[i] : greedy_side(i, t);

    // Sample the t-th timeline and mask column.
    std::vector<KeptTuple> fresh;
    for (std::size_t i = 0; i < n; ++i) {
      const bool was_active = out.act_times[i].has_value();
      const double threshold =
          was_active ? w[i] : std::min(w[i], 1.0 / static_cast<double>(t));
      const double u = oracle.uniform(owners[i], rng::StreamTag::kTimeline,
                                      static_cast<std::uint64_t>(t));
      if (u >= threshold) continue;
      if (!was_active) {
        out.act_times[i] = t;
        out.cut.rows[i] = g[i];
      }
      if (rng::mask_bit(oracle, owners[i], tp, t))
        fresh.push_back(KeptTuple{static_cast<std::uint32_t>(i), t, threshold});
    }
    std::sort(fresh.begin(), fresh.end(), [&](const KeptTuple& a, const KeptTuple& b) {
      return point_lex_less(a.point, b.point);
    });
    kept.insert(kept.end(), fresh.begin(), fresh.end());
  }

  // sigma* encodes z* over S^t0 in lexicographic point order.
  std::vector<std::uint32_t> base;
  for (std::size_t i = 0; i < n; ++i)
    if (out.act_times[i].has_value() && *out.act_times[i] <= params.t0)
      base.push_back(static_cast<std::uint32_t>(i));
  std::sort(base.begin(), base.end(), point_lex_less);
  out.m = base.size();
  out.sigma.bits.resize(out.m);
  for (std::size_t k = 0; k < base.size(); ++k)
    out.sigma.bits[k] = z_star.rows[base[k]] == core::Row::kSideOne ? 1 : 0;

  for (const KeptTuple& k : kept)
    out.summary.entries.push_back(SummaryEntry{k.point, k.ell, w[k.point],
                                               *out.act_times[k.point]});
  sort_entries(ds, out.summary.entries);
  return out;
}

}  // namespace geocut::greedy
