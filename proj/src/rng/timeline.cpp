#include "rng/timeline.hpp"

#include <algorithm>
#include <stdexcept>

namespace geocut::rng {

namespace {

inline double pre_activation_threshold(double w, std::int64_t t) {
  return std::min(w, 1.0 / static_cast<double>(t));
}

}  // namespace

std::optional<std::int64_t> TimelineView::activation_time(std::int64_t t_e) const {
  if (w_ <= 0.0) return std::nullopt;
  for (std::int64_t t = 1; t <= t_e; ++t) {
    const double u =
        oracle_->uniform(owner_, StreamTag::kTimeline, static_cast<std::uint64_t>(t));
    if (u < pre_activation_threshold(w_, t)) return t;
  }
  return std::nullopt;
}

bool TimelineView::bit(std::int64_t t) const {
  if (t < 1) throw std::invalid_argument("timeline slot must be >= 1");
  bool activated = false;
  for (std::int64_t u = 1; u < t; ++u) {
    const double r =
        oracle_->uniform(owner_, StreamTag::kTimeline, static_cast<std::uint64_t>(u));
    if (r < (activated ? w_ : pre_activation_threshold(w_, u))) activated = true;
  }
  const double r =
      oracle_->uniform(owner_, StreamTag::kTimeline, static_cast<std::uint64_t>(t));
  return r < (activated ? w_ : pre_activation_threshold(w_, t));
}

std::vector<std::int64_t> TimelineView::active_kept(const TimelineParams& p) const {
  std::vector<std::int64_t> out;
  bool activated = false;
  for (std::int64_t t = 1; t <= p.t_e; ++t) {
    const double r =
        oracle_->uniform(owner_, StreamTag::kTimeline, static_cast<std::uint64_t>(t));
    const bool a = r < (activated ? w_ : pre_activation_threshold(w_, t));
    activated = activated || a;
    if (a && mask_bit(*oracle_, owner_, p, t)) out.push_back(t);
  }
  return out;
}

bool TimelineView::any_active_kept(const TimelineParams& p) const {
  bool activated = false;
  for (std::int64_t t = 1; t <= p.t_e; ++t) {
    const double r =
        oracle_->uniform(owner_, StreamTag::kTimeline, static_cast<std::uint64_t>(t));
    const bool a = r < (activated ? w_ : pre_activation_threshold(w_, t));
    activated = activated || a;
    if (a && mask_bit(*oracle_, owner_, p, t)) return true;
  }
  return false;
}

}  // namespace geocut::rng
