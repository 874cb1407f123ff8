#include "stream/dynamic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "seedselect/seedselect.hpp"

namespace geocut::stream {

ExactSimGeoSampler::ExactSimGeoSampler(double p, double big_d, double eps_pr,
                                       double delta, const rng::RandomOracle& oracle)
    : p_(p), big_d_(big_d), eps_pr_(eps_pr), delta_(delta), oracle_(&oracle) {}

void ExactSimGeoSampler::update(bool insert, const core::Point& x) {
  if (insert) {
    if (!survivors_.insert(x).second)
      throw std::invalid_argument("duplicate insert in dynamic stream");
  } else {
    const auto it = survivors_.find(x);
    if (it == survivors_.end())
      throw std::invalid_argument("delete of a point that is not present");
    survivors_.erase(it);
  }
}

bool ExactSimGeoSampler::distinct_pair_exists() const { return survivors_.size() >= 2; }

namespace {

struct DegreeTable {
  std::vector<core::Point> points;  // lexicographic order
  std::vector<double> degrees;
  double total = 0.0;
};

DegreeTable degree_table(const std::set<core::Point>& survivors, double p) {
  DegreeTable t;
  t.points.assign(survivors.begin(), survivors.end());
  t.degrees.assign(t.points.size(), 0.0);
  for (std::size_t i = 0; i < t.points.size(); ++i)
    for (std::size_t j = i + 1; j < t.points.size(); ++j) {
      const double d = core::distance(t.points[i], t.points[j], p);
      t.degrees[i] += d;
      t.degrees[j] += d;
    }
  for (double deg : t.degrees) t.total += deg;
  return t;
}

}  // namespace

GeoDraw ExactSimGeoSampler::draw(std::uint64_t index) const {
  GeoDraw out;
  const double u_bot =
      oracle_->uniform(rng::OwnerId::global(), rng::StreamTag::kGeoBottom, index);
  if (u_bot >= 1.0 / big_d_) return out;  // bot draw

  const DegreeTable table = degree_table(survivors_, p_);
  if (table.total <= 0.0) return out;
  double u = oracle_->uniform(rng::OwnerId::global(), rng::StreamTag::kGeoDraw, index) *
             table.total;
  std::size_t pick = 0;
  while (pick + 1 < table.points.size() && u >= table.degrees[pick]) {
    u -= table.degrees[pick];
    ++pick;
  }
  out.point = table.points[pick];
  const double p_true = table.degrees[pick] / table.total / big_d_;
  const double mult =
      1.0 + eps_pr_ * oracle_->uniform(rng::OwnerId::global(), rng::StreamTag::kGeoMult,
                                       index);
  out.p_star = p_true * mult;
  return out;
}

double ExactSimGeoSampler::marginal(const core::Point& x) const {
  const DegreeTable table = degree_table(survivors_, p_);
  if (table.total <= 0.0) return 0.0;
  for (std::size_t i = 0; i < table.points.size(); ++i)
    if (table.points[i] == x) return table.degrees[i] / table.total / big_d_;
  return 0.0;
}

bool ExactSimGeoSampler::failure_event() const {
  return delta_ > 0.0 &&
         oracle_->uniform(rng::OwnerId::global(), rng::StreamTag::kGeoFail, 0) < delta_;
}

DynParams dyn_params(std::size_t n_or_cells, double eps, double big_d) {
  if (eps <= 0.0 || eps >= 1.0) throw std::invalid_argument("eps must be in (0,1)");
  if (big_d < 1.0) throw std::invalid_argument("D must be >= 1");
  DynParams out;
  out.greedy.epsilon = eps;
  out.greedy.lambda = 8.0 * big_d;
  out.greedy.t_e = static_cast<std::int64_t>(
      std::ceil(static_cast<double>(n_or_cells) * big_d / eps));
  const double ln_te = std::log(static_cast<double>(out.greedy.t_e));
  out.greedy.gamma = (big_d * ln_te + 1.0) * (big_d * ln_te + 1.0) / (eps * eps);
  out.greedy.t0 = static_cast<std::int64_t>(
      std::ceil(std::max(std::sqrt(out.greedy.gamma) * big_d / eps, 1.0 / eps)));
  out.eps_pr = eps / ln_te;
  const double s = 8.0 *
                   (static_cast<double>(out.greedy.t0) +
                    out.greedy.gamma * std::max(ln_te, 1.0)) /
                   eps;
  out.pool_size = static_cast<std::size_t>(std::ceil(s));
  return out;
}

DynamicEngine::DynamicEngine(std::size_t dim, std::int64_t delta, double p,
                             const rng::RandomOracle& oracle, const DynOptions& opts)
    : dim_(dim),
      delta_(delta),
      p_(p),
      oracle_(&oracle),
      opts_(opts),
      sampler_(p, opts.big_d, 0.0, opts.epsilon, oracle) {
  const double cells = std::pow(static_cast<double>(delta_), static_cast<double>(dim_));
  double cardinality = opts.n_hint.has_value()
                           ? std::min(cells, static_cast<double>(*opts.n_hint))
                           : cells;
  cardinality = std::max(cardinality, 2.0);
  if (cardinality * opts.big_d / opts.epsilon > 1e7)
    throw std::invalid_argument(
        "t_e would exceed the desk-scale ceiling; pass a cardinality hint");
  params_ = dyn_params(static_cast<std::size_t>(cardinality), opts.epsilon, opts.big_d);
  if (opts.eps_pr.has_value()) params_.eps_pr = *opts.eps_pr;
  sampler_ = ExactSimGeoSampler(p, opts.big_d, params_.eps_pr, opts.epsilon, oracle);
}

void DynamicEngine::update(bool insert, const core::Point& x) {
  if (session_) throw std::logic_error("update after finalize");
  if (x.size() != dim_) throw std::invalid_argument("wrong dimension");
  for (double c : x)
    if (c < 1.0 || c > static_cast<double>(delta_) || c != std::floor(c))
      throw std::invalid_argument("coordinates must be integers in [1, delta]");
  sampler_.update(insert, x);
  if (insert)
    survivors_.insert(x);
  else
    survivors_.erase(x);
}

double DynamicEngine::weight_of(const core::Point& x) const {
  const DegreeTable table = degree_table(survivors_, p_);
  if (table.total <= 0.0) return 1.0;
  double deg = 0.0;
  for (const auto& y : survivors_) deg += core::distance(x, y, p_);
  const double mult = 1.0 + (opts_.big_d - 1.0) * oracle_->uniform(
                                                      rng::OwnerId::by_coords(x),
                                                      rng::StreamTag::kWeightMult, 0);
  return std::min(deg / table.total * mult, 1.0);
}

double DynamicEngine::scaled_weight(const core::Point& x) const {
  return weight_of(x) / (2.0 * opts_.big_d);
}

bool DynamicEngine::mask_bit_at(std::int64_t t) const {
  return rng::mask_bit(*oracle_, rng::OwnerId::global(), params_.greedy.timeline(), t);
}

std::optional<std::int64_t> DynamicEngine::activation_time(const core::Point& x,
                                                           std::int64_t horizon) const {
  const auto it = recorded_act_.find(x);
  if (it != recorded_act_.end() && it->second <= horizon) return it->second;
  const double w = scaled_weight(x);
  for (std::int64_t ell = 1; ell <= horizon; ++ell) {
    if (mask_bit_at(ell)) continue;  // kept slots activate only via samples
    const double u = oracle_->uniform(rng::OwnerId::by_coords(x),
                                      rng::StreamTag::kTimeline,
                                      static_cast<std::uint64_t>(ell));
    if (u < std::min(w, 1.0 / static_cast<double>(ell))) return ell;
  }
  return std::nullopt;
}

void DynamicEngine::finalize() {
  if (session_) return;
  if (!sampler_.distinct_pair_exists())
    throw std::invalid_argument("fewer than two distinct points");

  report_ = DynReport{};
  report_.sampler_failure = sampler_.failure_event();
  summary_.t0 = params_.greedy.t0;
  summary_.entries.clear();
  recorded_act_.clear();
  universe_ = core::Dataset{};
  universe_.p = p_;
  universe_.delta = delta_;
  universe_index_.clear();

  // Build-Summ: walk the global mask, consume one draw per kept slot.
  std::vector<std::tuple<core::Point, std::int64_t, double, std::int64_t>> tuples;
  std::uint64_t c = 1;
  const std::uint64_t fail_at = params_.pool_size / 2;
  for (std::int64_t t = 1; t <= params_.greedy.t_e && !report_.build_failed; ++t) {
    if (!mask_bit_at(t)) continue;
    const GeoDraw draw = sampler_.draw(c);
    ++c;
    if (c >= fail_at) {
      report_.build_failed = true;
      break;
    }
    if (!draw.point.has_value()) continue;
    const core::Point& x = *draw.point;
    const auto act = activation_time(x, t - 1);
    if (act.has_value()) {
      tuples.emplace_back(x, t, draw.p_star, *act);
      if (!recorded_act_.count(x)) recorded_act_[x] = *act;
    } else {
      const double pr = std::min(1.0 / (static_cast<double>(t) * draw.p_star), 1.0);
      if (oracle_->uniform(rng::OwnerId::global(), rng::StreamTag::kActCoin,
                           static_cast<std::uint64_t>(t)) < pr) {
        tuples.emplace_back(x, t, draw.p_star, t);
        recorded_act_[x] = t;
      }
    }
  }
  report_.draws_consumed = static_cast<std::size_t>(c - 1);

  if (report_.build_failed) {
    // Degraded run: every query answers the default 0-side.
    session_ = std::make_unique<greedy::AssignSession>(universe_, summary_,
                                                       params_.greedy,
                                                       greedy::AssignMode::kDynamic);
    session_->apply_seed(greedy::Seed{});
    seed_ = greedy::Seed{};
    return;
  }

  for (const auto& [x, ell, p_star, t_act] : tuples) {
    auto idx_it = universe_index_.find(x);
    std::uint32_t idx;
    if (idx_it == universe_index_.end()) {
      idx = static_cast<std::uint32_t>(universe_.points.size());
      universe_index_.emplace(x, idx);
      universe_.points.push_back(x);
    } else {
      idx = idx_it->second;
    }
    summary_.entries.push_back(greedy::SummaryEntry{idx, ell, p_star, t_act});
  }
  report_.summary_size = summary_.entries.size();

  // Pair samples for the seed estimator come from the second half of the
  // declared pool, consumed only until enough successes accumulate.
  std::set<std::uint32_t> base;
  for (const auto& e : summary_.entries)
    if (e.t_act <= summary_.t0) base.insert(e.point);
  report_.m = base.size();

  const double eps = params_.greedy.epsilon;
  const std::size_t target_pairs = static_cast<std::size_t>(std::ceil(
      static_cast<double>(opts_.pair_budget_scale) * (static_cast<double>(report_.m) + 1.0) /
      (eps * eps)));
  const std::size_t pair_cap = params_.pool_size / 4;
  std::vector<std::pair<GeoDraw, GeoDraw>> raw_pairs;
  std::uint64_t base_idx = params_.pool_size / 2;
  while (report_.pair_successes < target_pairs && report_.pairs_used < pair_cap) {
    const GeoDraw a = sampler_.draw(base_idx + 2 * report_.pairs_used);
    const GeoDraw b = sampler_.draw(base_idx + 2 * report_.pairs_used + 1);
    ++report_.pairs_used;
    if (a.point.has_value() && b.point.has_value()) {
      raw_pairs.emplace_back(a, b);
      ++report_.pair_successes;
    }
  }

  // The universe gets every sampled point before the session is built.
  std::vector<seedselect::PairSample> pairs;
  auto intern = [&](const core::Point& x) {
    auto it = universe_index_.find(x);
    if (it != universe_index_.end()) return it->second;
    const std::uint32_t idx = static_cast<std::uint32_t>(universe_.points.size());
    universe_index_.emplace(x, idx);
    universe_.points.push_back(x);
    return idx;
  };
  for (const auto& [a, b] : raw_pairs)
    pairs.push_back(seedselect::PairSample{intern(*a.point), intern(*b.point),
                                           a.p_star, b.p_star});

  session_ = std::make_unique<greedy::AssignSession>(universe_, summary_, params_.greedy,
                                                     greedy::AssignMode::kDynamic);

  // Activation times for the sampled points, fixed across seed candidates.
  std::map<std::uint32_t, std::optional<std::int64_t>> act_of;
  for (const auto& pr : pairs) {
    for (std::uint32_t idx : {pr.first, pr.second}) {
      if (!act_of.count(idx))
        act_of[idx] = activation_time(universe_.points[idx], params_.greedy.t_e);
    }
  }

  if (pairs.empty()) {
    report_.seed_failed = true;
    seed_ = greedy::Seed::from_integer(0, report_.m);
    session_->apply_seed(seed_);
    return;
  }

  const std::size_t enumerated = std::min(report_.m, opts_.seed_cap);
  double best = 0.0;
  bool have_best = false;
  greedy::Seed best_seed;
  for (std::uint64_t u = 0; u < (1ULL << enumerated); ++u) {
    greedy::Seed candidate = greedy::Seed::from_integer(u, report_.m);
    session_->apply_seed(candidate);
    const double est = seedselect::pair_estimator(
        universe_,
        [&](std::uint32_t idx) {
          const auto& t_act = act_of.at(idx);
          if (!t_act.has_value()) return core::Row::kSideZero;
          return session_->assign(idx, *t_act);
        },
        pairs);
    if (!have_best || est < best) {
      have_best = true;
      best = est;
      best_seed = candidate;
    }
  }
  seed_ = best_seed;
  session_->apply_seed(seed_);
}

void DynamicEngine::set_seed_override(const greedy::Seed& seed) {
  if (!session_) throw std::logic_error("finalize first");
  seed_ = seed;
  session_->apply_seed(seed_);
}

core::Row DynamicEngine::assign_query(const core::Point& x) const {
  if (!session_) throw std::logic_error("finalize before queries");
  if (!survivors_.count(x))
    throw std::invalid_argument("query for a point that is not in the set");
  if (report_.build_failed) return core::Row::kSideZero;
  const auto t_act = activation_time(x, params_.greedy.t_e);
  if (!t_act.has_value()) return core::Row::kSideZero;
  const auto it = universe_index_.find(x);
  if (it != universe_index_.end()) return session_->assign(it->second, *t_act);
  return session_->assign_coords(x, *t_act);
}

CorrelatedProcessResult correlated_greedy_oracle(const core::Dataset& ds,
                                                 const std::vector<double>& w_scaled,
                                                 const DynParams& params,
                                                 const core::Cut& z_star,
                                                 const rng::RandomOracle& oracle,
                                                 const ExactSimGeoSampler& sampler) {
  const std::size_t n = ds.size();
  if (!z_star.complete() || z_star.rows.size() != n)
    throw std::invalid_argument("correlated_greedy_oracle: z* must be complete");
  const rng::TimelineParams tp = params.greedy.timeline();
  const auto dm = core::distance_matrix(ds);

  CorrelatedProcessResult out;
  out.cut = core::Cut::unassigned(n);
  out.act_times.assign(n, std::nullopt);
  out.summary.t0 = params.greedy.t0;

  struct FirstActTuple {
    std::uint32_t point;
    std::int64_t ell;
    double rho;  // min{p*, 1/ell}
  };
  std::vector<FirstActTuple> contrib;  // one per kept slot, ell ascending
  std::vector<greedy::SummaryEntry> all_tuples;

  auto find_index = [&](const core::Point& x) {
    for (std::size_t i = 0; i < n; ++i)
      if (ds.points[i] == x) return i;
    throw std::logic_error("sampled point is not in the dataset");
  };

  auto greedy_side = [&](std::size_t i, std::int64_t t) {
    double c0 = 0.0, c1 = 0.0;
    for (const FirstActTuple& k : contrib) {
      if (k.ell >= t) break;
      const core::Row zj = out.cut.rows[k.point];
      if (zj == core::Row::kUnassigned) continue;
      const double term = dm[i][k.point] / (k.rho * rng::mask_rate(tp, k.ell));
      if (zj == core::Row::kSideZero)
        c0 += term;
      else
        c1 += term;
    }
    return c0 > c1 ? core::Row::kSideOne : core::Row::kSideZero;
  };

  std::uint64_t c = 1;
  for (std::int64_t t = 1; t <= params.greedy.t_e; ++t) {
    std::vector<core::Row> g(n);
    for (std::size_t i = 0; i < n; ++i)
      g[i] = (t <= params.greedy.t0) ? z_star.rows[i] : greedy_side(i, t);

    const bool kept =
        rng::mask_bit(oracle, rng::OwnerId::global(), tp, t);
    if (!kept) {
      for (std::size_t i = 0; i < n; ++i) {
        if (out.act_times[i].has_value()) continue;
        const double u = oracle.uniform(rng::OwnerId::by_coords(ds.points[i]),
                                        rng::StreamTag::kTimeline,
                                        static_cast<std::uint64_t>(t));
        if (u < std::min(w_scaled[i], 1.0 / static_cast<double>(t))) {
          out.act_times[i] = t;
          out.cut.rows[i] = g[i];
        }
      }
      continue;
    }

    const GeoDraw draw = sampler.draw(c);
    ++c;
    if (!draw.point.has_value()) continue;
    const std::size_t i_star = find_index(*draw.point);
    if (!out.act_times[i_star].has_value()) {
      const double pr =
          std::min(1.0 / (static_cast<double>(t) * draw.p_star), 1.0);
      if (oracle.uniform(rng::OwnerId::global(), rng::StreamTag::kActCoin,
                         static_cast<std::uint64_t>(t)) < pr) {
        out.act_times[i_star] = t;
        out.cut.rows[i_star] = g[i_star];
        contrib.push_back(FirstActTuple{
            static_cast<std::uint32_t>(i_star), t,
            std::min(draw.p_star, 1.0 / static_cast<double>(t))});
        all_tuples.push_back(greedy::SummaryEntry{static_cast<std::uint32_t>(i_star), t,
                                                  draw.p_star, t});
      }
    } else {
      all_tuples.push_back(greedy::SummaryEntry{static_cast<std::uint32_t>(i_star), t,
                                                draw.p_star,
                                                *out.act_times[i_star]});
    }
  }
  out.draws_consumed = static_cast<std::size_t>(c - 1);

  auto point_lex_less = [&](std::uint32_t a, std::uint32_t b) {
    if (core::lex_less(ds.points[a], ds.points[b])) return true;
    if (core::lex_less(ds.points[b], ds.points[a])) return false;
    return a < b;
  };
  std::vector<std::uint32_t> base;
  for (std::size_t i = 0; i < n; ++i)
    if (out.act_times[i].has_value() && *out.act_times[i] <= params.greedy.t0)
      base.push_back(static_cast<std::uint32_t>(i));
  std::sort(base.begin(), base.end(), point_lex_less);
  out.m = base.size();
  out.sigma.bits.resize(out.m);
  for (std::size_t k = 0; k < base.size(); ++k)
    out.sigma.bits[k] = z_star.rows[base[k]] == core::Row::kSideOne ? 1 : 0;

  out.summary.entries = std::move(all_tuples);
  greedy::sort_entries(ds, out.summary.entries);
  return out;
}

}  // namespace geocut::stream
