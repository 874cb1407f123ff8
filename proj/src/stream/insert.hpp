#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "core/cut.hpp"
#include "core/dataset.hpp"
#include "greedy/assign.hpp"
#include "greedy/params.hpp"
#include "greedy/summary.hpp"
#include "rng/oracle.hpp"
#include "rng/timeline.hpp"

namespace geocut::stream {

// Prefix weights over the inserted points: Weight(x) approximates the sum of
// distances from x to the prefix divided by twice the running pairwise total,
// with 0/0 defaulting to 1. eta = 0 queries exactly; eta > 0 perturbs every
// distance evaluation by a keyed multiplier within (1 + eta/3).
class PrefixWeightOracle {
 public:
  PrefixWeightOracle(double p, double eta, const rng::RandomOracle* oracle);

  void add_point(const core::Point& x);
  double weight(const core::Point& x) const;
  bool contains(const core::Point& x) const;
  std::size_t count() const { return points_.size(); }

 private:
  double eval_distance_sum(const core::Point& x, std::size_t upto) const;

  double p_;
  double eta_;
  const rng::RandomOracle* oracle_;
  std::vector<core::Point> points_;
  double total_ = 0.0;  // running W
};

// One point's activation timeline and mask, regenerable from the oracle; the
// weight starts at 1/2 and only decreases.
class TimelineMaskDS {
 public:
  TimelineMaskDS(core::Point x, const rng::RandomOracle& oracle,
                 rng::TimelineParams params);

  // w <- min(w, w_tilde); returns true when no slot is activated-and-kept
  // under the new weight (the "not activated and kept" report).
  bool mod_min_weight(double w_tilde);

  bool any_active_kept() const;
  std::optional<std::int64_t> activation_time() const;
  std::vector<std::int64_t> active_kept() const;

  double weight() const { return w_; }
  const core::Point& point() const { return x_; }

 private:
  rng::TimelineView view() const { return {*oracle_, rng::OwnerId::by_coords(x_), w_}; }

  core::Point x_;
  const rng::RandomOracle* oracle_;
  rng::TimelineParams params_;
  double w_ = 0.5;
};

struct InsertOptions {
  double epsilon = 0.25;
  double eta = 0.0;                       // weight backend slack; 0 = exact
  std::optional<std::size_t> n_hint;      // caps t_e at hint * lambda / eps
  std::optional<double> xi_override;      // testing knob for the check rate
  std::size_t seed_cap = 24;
};

struct InsertSpaceReport {
  std::size_t c_size = 0;
  std::size_t t_size = 0;
  std::size_t p_size = 0;
  std::size_t m = 0;
  std::size_t words = 0;  // declared-cost ledger
};

// The insertion-only engine: incremental weights, check-set and timeline-mask
// maintenance with per-insertion clean-up, preprocessing into the summary and
// seed, and post-stream assignment queries.
class InsertEngine {
 public:
  InsertEngine(std::size_t dim, std::int64_t delta, double p,
               const rng::RandomOracle& oracle, const InsertOptions& opts);

  void add_point(const core::Point& x);
  void preprocess();
  core::Row assign_query(const core::Point& x) const;

  bool preprocessed() const { return session_ != nullptr; }
  const greedy::GreedyParams& params() const { return params_; }
  double xi() const { return xi_; }
  std::size_t size() const { return weight_state_.count(); }

  InsertSpaceReport space_report() const;
  const greedy::Seed& seed() const { return seed_; }
  void set_seed_override(const greedy::Seed& seed);  // testing hook

  // Introspection for tests: current sampling weights in the check set and
  // the points with live timeline-mask state.
  const std::map<core::Point, double>& check_members() const { return check_; }
  std::vector<core::Point> timeline_points() const;

  double weight_of(const core::Point& x) const { return weight_state_.weight(x); }

 private:
  double check_prob(double sampling_weight) const;
  bool check_coin(const core::Point& x, double prob) const;
  std::optional<std::int64_t> activation_at_final(const core::Point& x) const;

  std::size_t dim_;
  std::int64_t delta_;
  double p_;
  const rng::RandomOracle* oracle_;
  InsertOptions opts_;
  greedy::GreedyParams params_;
  double xi_ = 0.0;

  PrefixWeightOracle weight_state_;
  std::map<core::Point, double> check_;            // x -> omega_i(x)/2
  std::map<core::Point, TimelineMaskDS> timelines_;  // the kept set T

  // Post-preprocess state.
  core::Dataset universe_;
  greedy::TimelineMaskSummary summary_;
  std::map<core::Point, std::uint32_t> universe_index_;
  std::unique_ptr<greedy::AssignSession> session_;
  greedy::Seed seed_;
  std::size_t claim_violations_ = 0;  // final-weight floor assertions
};

}  // namespace geocut::stream
