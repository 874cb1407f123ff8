#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rng/oracle.hpp"

namespace geocut::rng {

// Keeping time t0, end time t_e and the mask decay parameter.
struct TimelineParams {
  std::int64_t t0 = 1;
  std::int64_t t_e = 1;
  double gamma = 1.0;
};

// Mask rate: 1 up to the keeping time, then min{gamma/t, 1}.
inline double mask_rate(const TimelineParams& p, std::int64_t t) {
  if (t <= p.t0) return 1.0;
  return std::min(p.gamma / static_cast<double>(t), 1.0);
}

inline bool mask_bit(const RandomOracle& oracle, const OwnerId& owner,
                     const TimelineParams& p, std::int64_t t) {
  return oracle.uniform(owner, StreamTag::kMask, static_cast<std::uint64_t>(t)) <
         mask_rate(p, t);
}

// Activation timeline bits for weight w: the threshold is min{w, 1/t} until
// the first activation and w afterwards, evaluated against one uniform
// variate per slot. Activation status is resolved internally from t = 1, so
// callers never supply it.
class TimelineView {
 public:
  TimelineView(const RandomOracle& oracle, OwnerId owner, double w)
      : oracle_(&oracle), owner_(std::move(owner)), w_(w) {}

  double weight() const { return w_; }

  // First t in [1, t_e] with an activation, if any.
  std::optional<std::int64_t> activation_time(std::int64_t t_e) const;

  // Timeline bit at slot t (scans forward from 1 to settle activation).
  bool bit(std::int64_t t) const;

  // All t in [1, t_e] with A_t * K_t = 1.
  std::vector<std::int64_t> active_kept(const TimelineParams& p) const;

  // True iff some slot in [1, t_e] is both activated and kept. Cheaper than
  // active_kept when the answer is "yes" early.
  bool any_active_kept(const TimelineParams& p) const;

 private:
  const RandomOracle* oracle_;
  OwnerId owner_;
  double w_;
};

inline bool timeline_bit(const RandomOracle& oracle, const OwnerId& owner,
                         double w, std::int64_t t) {
  return TimelineView(oracle, owner, w).bit(t);
}

inline std::optional<std::int64_t> activation_time(const RandomOracle& oracle,
                                                   const OwnerId& owner,
                                                   double w, std::int64_t t_e) {
  return TimelineView(oracle, owner, w).activation_time(t_e);
}

}  // namespace geocut::rng
