#include "mpc/emaxcut.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "greedy/assign.hpp"
#include "greedy/summary.hpp"
#include "rng/timeline.hpp"
#include "seedselect/seedselect.hpp"

namespace geocut::mpc {

namespace {

constexpr std::size_t kHeldPointWords = 4;  // + d: coords, origin, rank, weight, t_act
constexpr std::size_t kSummaryTupleWords = 4;  // + d: coords, rank, ell/weight/t_act
constexpr std::size_t kCheckTupleWords = 4;    // + d: coords, rank, prob, t_act

bool coords_less(const core::Point& a, const core::Point& b) {
  return core::lex_less(a, b);
}

}  // namespace

World World::contiguous(const core::Dataset& ds, std::size_t machines,
                        std::size_t words) {
  World w;
  w.ds = &ds;
  w.cfg.machines = std::max<std::size_t>(machines, 1);
  w.cfg.words = words;
  w.held.assign(w.cfg.machines, {});
  const std::size_t n = ds.size();
  const std::size_t per = (n + w.cfg.machines - 1) / w.cfg.machines;
  for (std::size_t i = 0; i < n; ++i) w.held[std::min(i / per, w.cfg.machines - 1)].push_back(i);
  return w;
}

std::size_t declared_sketch_words(std::size_t n, std::size_t d, double eps) {
  const double scale = std::max(2.0, static_cast<double>(n * d) / std::max(eps, 1e-3));
  return 8 * (static_cast<std::size_t>(std::ceil(std::log2(scale))) + 1);
}

std::vector<std::uint32_t> mpc_sort(Cluster& cluster, const World& world) {
  const core::Dataset& ds = *world.ds;
  const std::size_t m = world.cfg.machines;
  const std::size_t d = ds.dim();
  const std::size_t key_words = d + 1;

  // Local sort of held items by (coords, origin).
  std::vector<std::vector<std::size_t>> local = world.held;
  for (auto& items : local)
    std::sort(items.begin(), items.end(), [&](std::size_t a, std::size_t b) {
      if (coords_less(ds.points[a], ds.points[b])) return true;
      if (coords_less(ds.points[b], ds.points[a])) return false;
      return a < b;
    });
  cluster.local_round();

  std::vector<std::uint32_t> rank(ds.size(), 0);
  if (m == 1) {
    for (std::size_t r = 0; r < local[0].size(); ++r)
      rank[local[0][r]] = static_cast<std::uint32_t>(r);
    return rank;
  }

  // Evenly spaced local samples converge-cast to the root.
  const std::size_t per_machine = std::max<std::size_t>(cluster.config().chunk() / key_words, 1);
  std::vector<std::size_t> sample_words(m, 0);
  std::vector<std::size_t> samples;  // origins, root-side view
  for (std::size_t k = 0; k < m; ++k) {
    const auto& items = local[k];
    if (items.empty()) continue;
    const std::size_t take = std::min(per_machine, items.size());
    for (std::size_t j = 0; j < take; ++j)
      samples.push_back(items[j * items.size() / take]);
    sample_words[k] = take * key_words;
    cluster.add_resident(k, take * key_words);
  }
  cluster.converge_cast_words(sample_words);

  // Root picks m-1 splitters and broadcasts them.
  std::sort(samples.begin(), samples.end(), [&](std::size_t a, std::size_t b) {
    if (coords_less(ds.points[a], ds.points[b])) return true;
    if (coords_less(ds.points[b], ds.points[a])) return false;
    return a < b;
  });
  std::vector<std::size_t> splitters;
  for (std::size_t k = 1; k < m && !samples.empty(); ++k)
    splitters.push_back(samples[std::min(k * samples.size() / m, samples.size() - 1)]);
  cluster.release_resident(0, samples.size() * key_words);
  cluster.add_resident(0, splitters.size() * key_words);
  cluster.broadcast_words(splitters.size() * key_words, /*retain=*/false);
  cluster.release_resident(0, splitters.size() * key_words);

  auto target_of = [&](std::size_t origin) {
    std::size_t t = 0;
    while (t < splitters.size()) {
      const std::size_t sp = splitters[t];
      const bool less = coords_less(ds.points[origin], ds.points[sp]) ||
                        (!coords_less(ds.points[sp], ds.points[origin]) && origin < sp);
      if (less) break;
      ++t;
    }
    return t;
  };

  // Route items to their splitter bucket.
  std::vector<std::vector<std::size_t>> sendmat(m, std::vector<std::size_t>(m, 0));
  std::vector<std::vector<std::size_t>> bucket(m);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t origin : local[k]) {
      const std::size_t t = target_of(origin);
      bucket[t].push_back(origin);
      if (t != k) sendmat[k][t] += key_words;
    }
  // Outgoing copies are transient sender-side state until they move.
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t j = 0; j < m; ++j)
      if (j != k) cluster.add_resident(k, sendmat[k][j]);
  cluster.all_to_all_words(sendmat);

  // Local sort of buckets, then counts to the root and offsets back.
  for (auto& b : bucket)
    std::sort(b.begin(), b.end(), [&](std::size_t a, std::size_t c) {
      if (coords_less(ds.points[a], ds.points[c])) return true;
      if (coords_less(ds.points[c], ds.points[a])) return false;
      return a < c;
    });
  cluster.local_round();

  std::vector<std::size_t> count_words(m, 1);
  for (std::size_t k = 0; k < m; ++k) cluster.add_resident(k, 1);
  cluster.converge_cast_words(count_words);
  cluster.release_resident(0, m);
  cluster.broadcast_words(m, /*retain=*/false);

  std::vector<std::size_t> offset(m, 0);
  for (std::size_t k = 1; k < m; ++k) offset[k] = offset[k - 1] + bucket[k - 1].size();
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t r = 0; r < bucket[k].size(); ++r)
      rank[bucket[k][r]] = static_cast<std::uint32_t>(offset[k] + r);

  // Ranks travel back to the original holders (2 words per item), and the
  // routed copies are dropped.
  std::vector<std::vector<std::size_t>> backmat(m, std::vector<std::size_t>(m, 0));
  std::vector<std::size_t> origin_machine(ds.size(), 0);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t origin : world.held[k]) origin_machine[origin] = k;
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t origin : bucket[k]) {
      const std::size_t home = origin_machine[origin];
      if (home != k) backmat[k][home] += 2;
    }
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t j = 0; j < m; ++j)
      if (j != k) cluster.add_resident(k, backmat[k][j]);
  cluster.all_to_all_words(backmat);
  for (std::size_t k = 0; k < m; ++k) {
    // Shed the routed bucket items and the received rank pairs; ranks are
    // folded into the held-point metadata already charged at load.
    std::size_t moved_in = 0;
    for (std::size_t j = 0; j < m; ++j) moved_in += sendmat[j][k] + backmat[j][k];
    cluster.release_resident(k, moved_in);
  }
  return rank;
}

MpcWeights mpc_compute_weights(Cluster& cluster, const World& world,
                               const weights::ModeSpec& mode, double protocol_eps,
                               const rng::RandomOracle& oracle,
                               const std::vector<std::uint32_t>& ranks) {
  const core::Dataset& ds = *world.ds;
  const std::size_t n = ds.size();

  // Totals via converge-cast + broadcast (n is one word).
  cluster.converge_reduce_words(1);
  cluster.broadcast_words(1, /*retain=*/false);

  // Shared sketch state: local sketches fold up the tree, the combined state
  // comes back down. The backends answer degree queries behind this state.
  const double sketch_eps = mode.mode == weights::Mode::kSketched ? mode.epsilon : 0.0;
  const std::size_t sk_words = declared_sketch_words(n, ds.dim(), protocol_eps);
  for (std::size_t k = 0; k < cluster.machines(); ++k) cluster.add_resident(k, sk_words);
  cluster.converge_reduce_words(sk_words);
  cluster.broadcast_words(sk_words, /*retain=*/true);

  const auto summary = core::distance_summary(ds);
  MpcWeights out;
  out.w.assign(n, 0.0);
  if (summary.total <= 0.0)
    throw std::invalid_argument("zero total distance, all cuts value 0");

  // Degree estimates per held point; the sketched backend over-estimates by a
  // keyed multiplier within (1 + eps/3).
  std::vector<double> est(n, 0.0);
  for (std::size_t k = 0; k < cluster.machines(); ++k) {
    for (std::size_t origin : world.held[k]) {
      double di = summary.degrees[origin];
      if (mode.mode == weights::Mode::kSketched) {
        const double u = oracle.uniform(rng::OwnerId::by_index(ranks[origin]),
                                        rng::StreamTag::kWeightMult, 0);
        di *= 1.0 + (sketch_eps / 3.0) * u;
      }
      est[origin] = di;
    }
  }
  double total_est = 0.0;
  for (std::size_t i = 0; i < n; ++i) total_est += est[i];
  cluster.converge_reduce_words(1);
  cluster.broadcast_words(1, /*retain=*/false);

  const double factor = 1.0 + sketch_eps / 3.0;
  for (std::size_t i = 0; i < n; ++i)
    out.w[i] = std::min(factor * est[i] / total_est, 1.0);

  out.failure_event =
      mode.mode == weights::Mode::kSketched && mode.delta > 0.0 &&
      oracle.uniform(rng::OwnerId::global(), rng::StreamTag::kWeightFail, 0) < mode.delta;

  // The sketch state is no longer needed once weights are stored.
  for (std::size_t k = 0; k < cluster.machines(); ++k)
    cluster.release_resident(k, 2 * sk_words);
  return out;
}

namespace {

struct MiniUniverse {
  core::Dataset ds;                       // P participants then extra points
  greedy::TimelineMaskSummary summary;    // re-indexed to ds
  std::map<std::uint32_t, std::uint32_t> by_rank;  // global rank -> mini index
};

// Rebuilds the assignment universe from summary tuples (sorted by rank so
// duplicate coordinates keep their canonical relative order).
MiniUniverse build_universe(const core::Dataset& full,
                            const std::vector<greedy::SummaryEntry>& tuples,
                            const std::vector<std::uint32_t>& ranks,
                            std::int64_t t0) {
  MiniUniverse uni;
  uni.ds.p = full.p;
  uni.ds.delta = full.delta;
  uni.summary.t0 = t0;

  std::vector<greedy::SummaryEntry> sorted = tuples;
  std::sort(sorted.begin(), sorted.end(),
            [&](const greedy::SummaryEntry& a, const greedy::SummaryEntry& b) {
              return ranks[a.point] < ranks[b.point];
            });
  for (const auto& e : sorted) {
    const std::uint32_t r = ranks[e.point];
    if (!uni.by_rank.count(r)) {
      uni.by_rank[r] = static_cast<std::uint32_t>(uni.ds.points.size());
      uni.ds.points.push_back(full.points[e.point]);
    }
  }
  for (const auto& e : tuples) {
    greedy::SummaryEntry copy = e;
    copy.point = uni.by_rank.at(ranks[e.point]);
    uni.summary.entries.push_back(copy);
  }
  greedy::sort_entries(uni.ds, uni.summary.entries);
  return uni;
}

}  // namespace

MpcResult mpc_e_max_cut(const World& world, double eps,
                        const weights::ModeSpec& weight_mode,
                        const rng::RandomOracle& oracle, std::size_t seed_cap) {
  const core::Dataset& ds = *world.ds;
  const std::size_t n = ds.size();
  if (n < 2 || !ds.has_two_distinct())
    throw std::invalid_argument("need at least two non-equal points");

  Cluster cluster(world.cfg);
  const std::size_t d = ds.dim();

  // Held points with their metadata.
  for (std::size_t k = 0; k < cluster.machines(); ++k)
    cluster.add_resident(k, world.held[k].size() * (d + kHeldPointWords));

  MpcResult out;

  const auto ranks = mpc_sort(cluster, world);
  const auto wres =
      mpc_compute_weights(cluster, world, weight_mode, eps, oracle, ranks);
  out.weight_failure_event = wres.failure_event;

  double lambda = 8.0;
  if (weight_mode.mode == weights::Mode::kDynamic) lambda = 8.0 * weight_mode.big_d;
  out.params = greedy::compute_params(n, eps, lambda);
  const rng::TimelineParams tp = out.params.timeline();

  // Per-point timelines and masks; local work.
  std::vector<double> w_half(n, 0.0);
  std::vector<std::optional<std::int64_t>> act(n);
  std::vector<greedy::SummaryEntry> tuples;  // global view of the P union
  std::vector<std::size_t> p_words(cluster.machines(), 0);
  for (std::size_t k = 0; k < cluster.machines(); ++k) {
    for (std::size_t origin : world.held[k]) {
      w_half[origin] = wres.w[origin] / 2.0;
      const rng::OwnerId owner = rng::OwnerId::by_index(ranks[origin]);
      bool activated = false;
      for (std::int64_t t = 1; t <= out.params.t_e; ++t) {
        const double u =
            oracle.uniform(owner, rng::StreamTag::kTimeline, static_cast<std::uint64_t>(t));
        const double threshold =
            activated ? w_half[origin]
                      : std::min(w_half[origin], 1.0 / static_cast<double>(t));
        if (u >= threshold) continue;
        if (!activated) {
          activated = true;
          act[origin] = t;
        }
        if (rng::mask_bit(oracle, owner, tp, t)) {
          tuples.push_back(greedy::SummaryEntry{static_cast<std::uint32_t>(origin), t,
                                                w_half[origin], *act[origin]});
          p_words[k] += d + kSummaryTupleWords;
          cluster.add_resident(k, d + kSummaryTupleWords);
        }
      }
    }
  }
  cluster.local_round();
  out.summary_size = tuples.size();

  // Converge-cast the summary tuples to the root.
  cluster.converge_cast_words(p_words);

  // Seed length and the check rate, then the check tuples.
  std::size_t m_seed = 0;
  {
    std::vector<std::uint32_t> base;
    for (const auto& e : tuples)
      if (e.t_act <= out.params.t0) base.push_back(e.point);
    std::sort(base.begin(), base.end());
    base.erase(std::unique(base.begin(), base.end()), base.end());
    m_seed = base.size();
  }
  out.seed_length = m_seed;
  const double xi = greedy::xi_for(lambda, static_cast<double>(m_seed),
                                   std::log(static_cast<double>(n)), eps, eps);
  cluster.broadcast_words(1, /*retain=*/false);

  std::vector<seedselect::CheckSample> check;
  std::vector<std::size_t> c_words(cluster.machines(), 0);
  for (std::size_t k = 0; k < cluster.machines(); ++k) {
    for (std::size_t origin : world.held[k]) {
      const double prob = std::min(xi * w_half[origin], 1.0);
      if (prob <= 0.0) continue;
      const rng::OwnerId owner = rng::OwnerId::by_index(ranks[origin]);
      if (oracle.uniform(owner, rng::StreamTag::kCheck, 0) < prob) {
        check.push_back(
            seedselect::CheckSample{static_cast<std::uint32_t>(origin), prob, act[origin]});
        c_words[k] += d + kCheckTupleWords;
        cluster.add_resident(k, d + kCheckTupleWords);
      }
    }
  }
  cluster.local_round();
  cluster.converge_cast_words(c_words);
  out.check_size = check.size();

  // Root-side seed selection over the assignment family.
  MiniUniverse uni = build_universe(ds, tuples, ranks, out.params.t0);
  for (const auto& s : check) {
    const std::uint32_t r = ranks[s.point];
    if (!uni.by_rank.count(r)) {
      uni.by_rank[r] = static_cast<std::uint32_t>(uni.ds.points.size());
      uni.ds.points.push_back(ds.points[s.point]);
    }
  }
  greedy::AssignSession session(uni.ds, uni.summary, out.params,
                                greedy::AssignMode::kStatic);
  std::vector<seedselect::CheckSample> mini_check;
  for (const auto& s : check)
    mini_check.push_back(seedselect::CheckSample{uni.by_rank.at(ranks[s.point]), s.prob,
                                                 s.t_act, ranks[s.point]});
  auto choice = seedselect::select_seed(uni.ds, session, mini_check, seed_cap);
  out.seed_truncated = choice.truncated;

  // sigma* and P travel to every machine; check tuples are dropped at root.
  const std::size_t sigma_words = m_seed / 32 + 1;
  cluster.add_resident(0, sigma_words);
  cluster.broadcast_words(sigma_words, /*retain=*/true);
  cluster.broadcast_words(tuples.size() * (d + kSummaryTupleWords), /*retain=*/true);
  cluster.release_resident(0, check.size() * (d + kCheckTupleWords));

  // Local assignment per held point.
  session.apply_seed(choice.seed);
  out.cut = core::Cut::unassigned(n);
  for (std::size_t k = 0; k < cluster.machines(); ++k) {
    for (std::size_t origin : world.held[k]) {
      if (!act[origin].has_value()) {
        out.cut.rows[origin] = core::Row::kSideZero;
        continue;
      }
      const auto it = uni.by_rank.find(ranks[origin]);
      if (it != uni.by_rank.end())
        out.cut.rows[origin] = session.assign(it->second, *act[origin]);
      else
        out.cut.rows[origin] = session.assign_coords(ds.points[origin], *act[origin]);
    }
  }
  cluster.local_round();

  out.protocol_failed = cluster.failed();
  out.failure_reason = cluster.failure_reason();
  if (out.protocol_failed) {
    // Catastrophic accounting: the run defaults every point to the 0-side.
    for (auto& r : out.cut.rows) r = core::Row::kSideZero;
  }
  out.f = core::objective_f(ds, out.cut);
  out.cut_value = core::cut_value(ds, out.cut);
  out.rounds = cluster.total_rounds();
  out.peak_words = cluster.peak_resident();
  out.round_log = cluster.log();
  out.seed_length = m_seed;
  return out;
}

}  // namespace geocut::mpc
