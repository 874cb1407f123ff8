#include "stream/insert.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "mpc/emaxcut.hpp"
#include "seedselect/seedselect.hpp"

namespace geocut::stream {

PrefixWeightOracle::PrefixWeightOracle(double p, double eta,
                                       const rng::RandomOracle* oracle)
    : p_(p), eta_(eta), oracle_(oracle) {}

double PrefixWeightOracle::eval_distance_sum(const core::Point& x,
                                             std::size_t upto) const {
  double d = 0.0;
  for (std::size_t i = 0; i < upto; ++i) d += core::distance(points_[i], x, p_);
  if (eta_ > 0.0) {
    const double u = oracle_->uniform(rng::OwnerId::by_coords(x),
                                      rng::StreamTag::kWeightMult, upto);
    d *= 1.0 + (eta_ / 3.0) * u;
  }
  return d;
}

void PrefixWeightOracle::add_point(const core::Point& x) {
  points_.push_back(x);
  total_ += eval_distance_sum(x, points_.size());
}

bool PrefixWeightOracle::contains(const core::Point& x) const {
  return std::find(points_.begin(), points_.end(), x) != points_.end();
}

double PrefixWeightOracle::weight(const core::Point& x) const {
  if (total_ <= 0.0) return 1.0;  // 0/0 defaults to 1
  const double d = eval_distance_sum(x, points_.size());
  const double value = (1.0 + eta_ / 3.0) * d / (2.0 * total_);
  return std::min(value, 1.0);
}

TimelineMaskDS::TimelineMaskDS(core::Point x, const rng::RandomOracle& oracle,
                               rng::TimelineParams params)
    : x_(std::move(x)), oracle_(&oracle), params_(params) {}

bool TimelineMaskDS::mod_min_weight(double w_tilde) {
  w_ = std::min(w_, w_tilde);
  return !any_active_kept();
}

bool TimelineMaskDS::any_active_kept() const { return view().any_active_kept(params_); }

std::optional<std::int64_t> TimelineMaskDS::activation_time() const {
  return view().activation_time(params_.t_e);
}

std::vector<std::int64_t> TimelineMaskDS::active_kept() const {
  return view().active_kept(params_);
}

InsertEngine::InsertEngine(std::size_t dim, std::int64_t delta, double p,
                           const rng::RandomOracle& oracle, const InsertOptions& opts)
    : dim_(dim),
      delta_(delta),
      p_(p),
      oracle_(&oracle),
      opts_(opts),
      weight_state_(p, opts.eta, &oracle) {
  if (opts.epsilon <= 0.0 || opts.epsilon >= 1.0)
    throw std::invalid_argument("epsilon must be in (0,1)");
  const double lambda = 60.0;
  double cells = std::pow(static_cast<double>(delta_), static_cast<double>(dim_));
  double cardinality = opts.n_hint.has_value()
                           ? std::min(cells, static_cast<double>(*opts.n_hint))
                           : cells;
  cardinality = std::max(cardinality, 2.0);
  if (cardinality * lambda / opts.epsilon > 1e7)
    throw std::invalid_argument(
        "t_e would exceed the desk-scale ceiling; pass a cardinality hint");
  params_.epsilon = opts.epsilon;
  params_.lambda = lambda;
  params_.t_e = static_cast<std::int64_t>(std::ceil(cardinality * lambda / opts.epsilon));
  const double ln_te = std::log(static_cast<double>(params_.t_e));
  params_.gamma = (ln_te + 1.0) * (ln_te + 1.0) * lambda / (opts.epsilon * opts.epsilon);
  params_.t0 = static_cast<std::int64_t>(std::ceil(
      std::max(std::sqrt(params_.gamma * lambda) / opts.epsilon, 1.0 / opts.epsilon)));

  // The check rate is fixed up front: the stream cannot wait for the realized
  // seed length, so the a-priori proxy min(t0, t_e)/eps stands in for it and
  // the grid size replaces n in the log term.
  if (opts.xi_override.has_value()) {
    xi_ = *opts.xi_override;
  } else {
    const double m_proxy =
        static_cast<double>(std::min(params_.t0, params_.t_e)) / opts.epsilon;
    xi_ = greedy::xi_for(lambda, m_proxy,
                         static_cast<double>(dim_) * std::log(static_cast<double>(delta_)),
                         opts.epsilon, opts.epsilon);
  }
}

double InsertEngine::check_prob(double sampling_weight) const {
  return std::min(xi_ * sampling_weight, 1.0);
}

bool InsertEngine::check_coin(const core::Point& x, double prob) const {
  // Critical-value coupling: one variate per point decides membership at
  // every probability level, so the per-insertion rescaling coins of the
  // clean-up are realized consistently and the final set is regenerable.
  return oracle_->uniform(rng::OwnerId::by_coords(x), rng::StreamTag::kCheck, 0) < prob;
}

void InsertEngine::add_point(const core::Point& x) {
  if (session_) throw std::logic_error("add_point after preprocess");
  if (x.size() != dim_) throw std::invalid_argument("wrong dimension");
  for (double c : x)
    if (c < 1.0 || c > static_cast<double>(delta_) || c != std::floor(c))
      throw std::invalid_argument("coordinates must be integers in [1, delta]");
  if (weight_state_.contains(x))
    throw std::invalid_argument("duplicate insert in streaming mode");

  weight_state_.add_point(x);
  const double w = weight_state_.weight(x);
  const double w_half = w / 2.0;

  if (check_coin(x, check_prob(w_half))) check_.emplace(x, w_half);

  TimelineMaskDS ds(x, *oracle_, params_.timeline());
  if (!ds.mod_min_weight(w_half)) timelines_.emplace(x, std::move(ds));

  // Clean-up: rescale every held check tuple and min-update every timeline.
  for (auto it = check_.begin(); it != check_.end();) {
    if (it->first == x) {
      ++it;
      continue;
    }
    const double fresh = weight_state_.weight(it->first) / 2.0;
    const double updated = std::min(it->second, fresh);
    if (check_coin(it->first, check_prob(updated))) {
      it->second = updated;
      ++it;
    } else {
      it = check_.erase(it);
    }
  }
  for (auto it = timelines_.begin(); it != timelines_.end();) {
    if (it->first == x) {
      ++it;
      continue;
    }
    const double fresh = weight_state_.weight(it->first) / 2.0;
    if (it->second.mod_min_weight(fresh))
      it = timelines_.erase(it);
    else
      ++it;
  }
}

std::optional<std::int64_t> InsertEngine::activation_at_final(
    const core::Point& x) const {
  const auto it = timelines_.find(x);
  if (it != timelines_.end()) return it->second.activation_time();
  // Forgotten points regenerate their timeline at the final weight.
  TimelineMaskDS fresh(x, *oracle_, params_.timeline());
  fresh.mod_min_weight(weight_state_.weight(x) / 30.0);
  return fresh.activation_time();
}

void InsertEngine::preprocess() {
  if (session_) return;
  if (weight_state_.count() < 2)
    throw std::invalid_argument("need at least two points before preprocessing");

  // Final weights w_n(x)/30; Claim-level floor: the stored weight omega/2
  // must dominate w_n/30, so the min lands exactly on w_n/30.
  summary_.t0 = params_.t0;
  summary_.entries.clear();
  universe_ = core::Dataset{};
  universe_.p = p_;
  universe_.delta = delta_;
  universe_index_.clear();

  for (auto& [x, ds] : timelines_) {
    const double final_w = weight_state_.weight(x) / 30.0;
    if (ds.weight() < final_w - 1e-15) ++claim_violations_;
    ds.mod_min_weight(final_w);
  }
  // Timelines that lost every activated-and-kept slot at the final weight
  // drop out of the summary.
  std::vector<std::pair<core::Point, const TimelineMaskDS*>> live;
  for (auto& [x, ds] : timelines_)
    if (ds.any_active_kept()) live.emplace_back(x, &ds);

  for (auto& [x, ds] : live) {
    const std::uint32_t idx = static_cast<std::uint32_t>(universe_.points.size());
    universe_index_.emplace(x, idx);
    universe_.points.push_back(x);
    const auto t_act = ds->activation_time();
    for (std::int64_t ell : ds->active_kept())
      summary_.entries.push_back(greedy::SummaryEntry{idx, ell, ds->weight(), *t_act});
  }
  greedy::sort_entries(universe_, summary_.entries);

  // Check samples: activation times regenerate at the final weights so the
  // seed scores the same cut family the queries will answer from.
  std::vector<seedselect::CheckSample> samples;
  std::vector<std::pair<core::Point, double>> ordered(check_.begin(), check_.end());
  // std::map already iterates in lexicographic coordinate order.
  std::uint64_t key = 0;
  for (const auto& [x, sigma] : ordered) {
    auto it = universe_index_.find(x);
    std::uint32_t idx;
    if (it != universe_index_.end()) {
      idx = it->second;
    } else {
      idx = static_cast<std::uint32_t>(universe_.points.size());
      universe_index_.emplace(x, idx);
      universe_.points.push_back(x);
    }
    samples.push_back(
        seedselect::CheckSample{idx, check_prob(sigma), activation_at_final(x), key++});
  }

  session_ = std::make_unique<greedy::AssignSession>(universe_, summary_, params_,
                                                     greedy::AssignMode::kStatic);
  auto choice = seedselect::select_seed(universe_, *session_, samples, opts_.seed_cap);
  seed_ = choice.seed;
}

void InsertEngine::set_seed_override(const greedy::Seed& seed) {
  if (!session_) throw std::logic_error("preprocess first");
  seed_ = seed;
  session_->apply_seed(seed_);
}

core::Row InsertEngine::assign_query(const core::Point& x) const {
  if (!session_) throw std::logic_error("preprocess before queries");
  if (!weight_state_.contains(x))
    throw std::invalid_argument("query for a point that was never inserted");
  const auto t_act = activation_at_final(x);
  if (!t_act.has_value()) return core::Row::kSideZero;
  const auto it = universe_index_.find(x);
  if (it != universe_index_.end()) return session_->assign(it->second, *t_act);
  return session_->assign_coords(x, *t_act);
}

std::vector<core::Point> InsertEngine::timeline_points() const {
  std::vector<core::Point> out;
  for (const auto& [x, ds] : timelines_) out.push_back(x);
  return out;
}

InsertSpaceReport InsertEngine::space_report() const {
  InsertSpaceReport rep;
  rep.c_size = check_.size();
  rep.t_size = timelines_.size();
  rep.p_size = summary_.entries.size();
  std::set<std::uint32_t> base;
  for (const auto& e : summary_.entries)
    if (e.t_act <= summary_.t0) base.insert(e.point);
  rep.m = base.size();
  const std::size_t d = dim_;
  const std::size_t sketch_words = mpc::declared_sketch_words(
      static_cast<std::size_t>(std::pow(static_cast<double>(delta_),
                                        static_cast<double>(d))),
      d, params_.epsilon);
  rep.words = 8 + sketch_words + rep.c_size * (d + 2) + rep.t_size * (d + 3) +
              rep.p_size * (d + 3) + rep.m / 32 + 1;
  return rep;
}

}  // namespace geocut::stream
