#include "greedy/assign.hpp"

#include <algorithm>
#include <stdexcept>

namespace geocut::greedy {

namespace {

bool point_lex_less(const core::Dataset& ds, std::uint32_t a, std::uint32_t b) {
  if (core::lex_less(ds.points[a], ds.points[b])) return true;
  if (core::lex_less(ds.points[b], ds.points[a])) return false;
  return a < b;
}

}  // namespace

AssignSession::AssignSession(const core::Dataset& ds,
                             const TimelineMaskSummary& summary,
                             const GreedyParams& params, AssignMode mode)
    : ds_(&ds), summary_(&summary), params_(params), mode_(mode) {
  participant_of_point_.assign(ds.size(), -1);
  side_of_point_.assign(ds.size(), core::Row::kUnassigned);

  for (const SummaryEntry& e : summary.entries) {
    if (e.ell < e.t_act)
      throw std::invalid_argument("summary entry kept before activation");
    if (participant_of_point_[e.point] < 0) {
      participant_of_point_[e.point] = static_cast<std::int32_t>(participants_.size());
      participants_.push_back(Participant{e.point, e.t_act, core::Row::kUnassigned});
    }
  }
  std::sort(participants_.begin(), participants_.end(),
            [&](const Participant& a, const Participant& b) {
              if (a.t_act != b.t_act) return a.t_act < b.t_act;
              return point_lex_less(ds, a.point, b.point);
            });
  for (std::size_t k = 0; k < participants_.size(); ++k)
    participant_of_point_[participants_[k].point] = static_cast<std::int32_t>(k);

  for (const Participant& q : participants_)
    if (q.t_act <= summary.t0) base_order_.push_back(q.point);
  std::sort(base_order_.begin(), base_order_.end(),
            [&](std::uint32_t a, std::uint32_t b) { return point_lex_less(ds, a, b); });

  entry_owner_slot_.reserve(summary.entries.size());
  entry_denominator_.reserve(summary.entries.size());
  for (const SummaryEntry& e : summary.entries) {
    entry_owner_slot_.push_back(
        static_cast<std::uint32_t>(participant_of_point_[e.point]));
    entry_denominator_.push_back(contribution_denominator(e));
  }
  slot_distance_.resize(participants_.size());
  for (std::size_t slot = 0; slot < participants_.size(); ++slot) {
    slot_distance_[slot].reserve(summary.entries.size());
    for (const SummaryEntry& e : summary.entries)
      slot_distance_[slot].push_back(
          ds.dist(participants_[slot].point, e.point));
  }
}

double AssignSession::contribution_denominator(const SummaryEntry& e) const {
  const double gamma_ell = rng::mask_rate(params_.timeline(), e.ell);
  double rate = e.weight_or_prob;
  if (e.ell == e.t_act) rate = std::min(rate, 1.0 / static_cast<double>(e.ell));
  return rate * gamma_ell;
}

core::Row AssignSession::decide_participant(std::size_t slot) const {
  const std::int64_t t_act = participants_[slot].t_act;
  double c0 = 0.0, c1 = 0.0;
  const auto& entries = summary_->entries;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const SummaryEntry& e = entries[k];
    if (e.ell >= t_act) break;
    if (mode_ == AssignMode::kDynamic && e.ell != e.t_act) continue;
    const core::Row zj = participants_[entry_owner_slot_[k]].side;
    if (zj == core::Row::kUnassigned) continue;
    const double term = slot_distance_[slot][k] / entry_denominator_[k];
    if (zj == core::Row::kSideZero)
      c0 += term;
    else
      c1 += term;
  }
  return c0 > c1 ? core::Row::kSideOne : core::Row::kSideZero;
}

core::Row AssignSession::decide(std::span<const double> coords,
                                std::int64_t t_act) const {
  if (t_act <= params_.t0) {
    // Base case: the point must be one of S^{t0}; its seed bit decides.
    for (std::size_t k = 0; k < base_order_.size(); ++k) {
      const auto& pt = ds_->points[base_order_[k]];
      if (coords.size() == pt.size() && std::equal(coords.begin(), coords.end(), pt.begin()))
        return side_of_point_[base_order_[k]];
    }
    throw std::logic_error("point activated by t0 is missing from the summary");
  }
  double c0 = 0.0, c1 = 0.0;
  for (const SummaryEntry& e : summary_->entries) {
    if (mode_ == AssignMode::kStatic) {
      if (e.ell >= t_act) break;  // entries sorted by ell
    } else {
      if (e.ell >= t_act) break;
      if (e.ell != e.t_act) continue;  // first-activation tuples only
    }
    const core::Row zj = side_of_point_[e.point];
    if (zj == core::Row::kUnassigned) continue;  // owner activated later than t_act
    const double term =
        core::distance(coords, ds_->points[e.point], ds_->p) / contribution_denominator(e);
    if (zj == core::Row::kSideZero)
      c0 += term;
    else
      c1 += term;
  }
  return c0 > c1 ? core::Row::kSideOne : core::Row::kSideZero;
}

void AssignSession::apply_seed(const Seed& seed) {
  if (seed.length() != base_order_.size())
    throw std::invalid_argument("seed length does not match |S^t0|");
  std::fill(side_of_point_.begin(), side_of_point_.end(), core::Row::kUnassigned);
  for (std::size_t k = 0; k < base_order_.size(); ++k)
    side_of_point_[base_order_[k]] =
        seed.bits[k] ? core::Row::kSideOne : core::Row::kSideZero;

  // Participants in (t_act, lex) order: every entry consulted here has an
  // owner with strictly smaller activation time, so one pass suffices.
  for (std::size_t slot = 0; slot < participants_.size(); ++slot) {
    Participant& q = participants_[slot];
    if (q.t_act <= summary_->t0) {
      q.side = side_of_point_[q.point];
      continue;
    }
    q.side = decide_participant(slot);
    side_of_point_[q.point] = q.side;
  }
  seed_applied_ = true;
}

core::Row AssignSession::assign(std::uint32_t point, std::int64_t t_act) const {
  if (!seed_applied_) throw std::logic_error("assign: no seed applied");
  const std::int32_t slot = participant_of_point_[point];
  if (slot >= 0 && participants_[slot].t_act == t_act)
    return participants_[slot].side;
  return decide(ds_->points[point], t_act);
}

core::Row AssignSession::assign_coords(std::span<const double> coords,
                                       std::int64_t t_act) const {
  if (!seed_applied_) throw std::logic_error("assign: no seed applied");
  return decide(coords, t_act);
}

core::Cut AssignSession::full_cut(
    const std::vector<std::optional<std::int64_t>>& act_times) const {
  core::Cut z = core::Cut::unassigned(ds_->size());
  for (std::size_t i = 0; i < ds_->size(); ++i) {
    if (act_times[i].has_value())
      z.rows[i] = assign(static_cast<std::uint32_t>(i), *act_times[i]);
    else
      z.rows[i] = core::Row::kSideZero;  // never activated: default 0-side
  }
  return z;
}

}  // namespace geocut::greedy
