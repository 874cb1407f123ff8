#include "greedy/summary.hpp"

#include <algorithm>
#include <stdexcept>

#include "rng/timeline.hpp"

namespace geocut::greedy {

std::vector<std::uint32_t> canonical_ranks(const core::Dataset& ds) {
  std::vector<std::uint32_t> order(ds.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::uint32_t>(i);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (core::lex_less(ds.points[a], ds.points[b])) return true;
    if (core::lex_less(ds.points[b], ds.points[a])) return false;
    return a < b;
  });
  std::vector<std::uint32_t> rank(ds.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = static_cast<std::uint32_t>(r);
  return rank;
}

std::vector<rng::OwnerId> make_owners(const core::Dataset& ds, Addressing mode) {
  std::vector<rng::OwnerId> owners;
  owners.reserve(ds.size());
  if (mode == Addressing::kByCoords) {
    for (const auto& x : ds.points) owners.push_back(rng::OwnerId::by_coords(x));
  } else {
    const auto ranks = canonical_ranks(ds);
    for (std::size_t i = 0; i < ds.size(); ++i)
      owners.push_back(rng::OwnerId::by_index(ranks[i]));
  }
  return owners;
}

void sort_entries(const core::Dataset& ds, std::vector<SummaryEntry>& entries) {
  std::sort(entries.begin(), entries.end(),
            [&](const SummaryEntry& a, const SummaryEntry& b) {
              if (a.ell != b.ell) return a.ell < b.ell;
              if (a.point != b.point) {
                if (core::lex_less(ds.points[a.point], ds.points[b.point])) return true;
                if (core::lex_less(ds.points[b.point], ds.points[a.point])) return false;
                return a.point < b.point;
              }
              return false;
            });
}

BuildResult build_summary(const core::Dataset& ds, const std::vector<double>& w,
                          const GreedyParams& params, const rng::RandomOracle& oracle,
                          const std::vector<rng::OwnerId>& owners) {
  const std::size_t n = ds.size();
  if (w.size() != n) throw std::invalid_argument("build_summary: weight size mismatch");
  for (double wi : w)
    if (wi <= 0.0 || wi > 0.5)
      throw std::invalid_argument("build_summary: weights must be in (0, 1/2]");

  BuildResult out;
  out.summary.t0 = params.t0;
  out.act_times.assign(n, std::nullopt);
  const rng::TimelineParams tp = params.timeline();

  for (std::size_t i = 0; i < n; ++i) {
    const rng::OwnerId& owner = owners[i];
    bool activated = false;
    for (std::int64_t t = 1; t <= params.t_e; ++t) {
      const double u =
          oracle.uniform(owner, rng::StreamTag::kTimeline, static_cast<std::uint64_t>(t));
      const double threshold =
          activated ? w[i] : std::min(w[i], 1.0 / static_cast<double>(t));
      if (u >= threshold) continue;
      if (!activated) {
        activated = true;
        out.act_times[i] = t;
      }
      if (rng::mask_bit(oracle, owner, tp, t)) {
        out.summary.entries.push_back(SummaryEntry{
            static_cast<std::uint32_t>(i), t, w[i], *out.act_times[i]});
      }
    }
  }
  sort_entries(ds, out.summary.entries);
  return out;
}

}  // namespace geocut::greedy
