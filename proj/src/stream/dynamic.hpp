#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
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

struct GeoDraw {
  std::optional<core::Point> point;  // nullopt: the bot sample
  double p_star = 1.0;               // reported probability estimate
};

// Stand-in for the geometric sampling sketch: a draw succeeds with
// probability 1/D and then returns a survivor sampled proportionally to its
// weighted degree; the reported p* is the true marginal inflated by a keyed
// multiplier within (1 + eps_pr). Draws are deterministic functions of
// (key, survivor set, draw index), so insert-then-delete churn is invisible.
class ExactSimGeoSampler {
 public:
  ExactSimGeoSampler(double p, double big_d, double eps_pr, double delta,
                     const rng::RandomOracle& oracle);

  void update(bool insert, const core::Point& x);
  std::size_t size() const { return survivors_.size(); }
  bool distinct_pair_exists() const;

  GeoDraw draw(std::uint64_t index) const;

  // True marginal P[draw = x] (for tests), and the undetectable-failure flag
  // (logged out of band; outputs keep following the exact distribution).
  double marginal(const core::Point& x) const;
  bool failure_event() const;

 private:
  double p_;
  double big_d_;
  double eps_pr_;
  double delta_;
  const rng::RandomOracle* oracle_;
  std::set<core::Point> survivors_;
};

struct DynParams {
  greedy::GreedyParams greedy;
  double eps_pr = 0.0;
  std::size_t pool_size = 0;  // s
};

// Smallest parameters meeting t_e >= nD/eps, gamma >= (D ln t_e + 1)^2/eps^2,
// t0 >= max{sqrt(gamma) D/eps, 1/eps}, eps_pr <= eps/ln(t_e), and the
// Build-Summ pool s = ceil(8 (t0 + gamma ln t_e)/eps).
DynParams dyn_params(std::size_t n_or_cells, double eps, double big_d);

struct DynOptions {
  double epsilon = 0.3;
  double big_d = 2.0;
  std::optional<double> eps_pr;         // default eps/ln(t_e)
  std::optional<std::size_t> n_hint;    // parameter cardinality, default Delta^d
  std::size_t seed_cap = 24;
  std::size_t pair_budget_scale = 8;    // pairs consumed: ceil(scale (m+1)/eps^2)
};

struct DynReport {
  bool build_failed = false;
  std::size_t draws_consumed = 0;
  std::size_t summary_size = 0;
  std::size_t m = 0;
  std::size_t pairs_used = 0;
  std::size_t pair_successes = 0;
  bool seed_failed = false;      // no successful pair
  bool sampler_failure = false;  // out-of-band undetectable failure flag
};

// Dynamic-stream engine: linear updates feed the weight sketch and sampler;
// after the stream closes, Build-Summ materializes the correlated summary,
// the pair estimator selects the seed, and queries answer through the
// dynamic assignment rule.
class DynamicEngine {
 public:
  DynamicEngine(std::size_t dim, std::int64_t delta, double p,
                const rng::RandomOracle& oracle, const DynOptions& opts);

  void update(bool insert, const core::Point& x);
  void finalize();  // build summary + select seed
  core::Row assign_query(const core::Point& x) const;

  bool finalized() const { return session_ != nullptr; }
  const DynParams& params() const { return params_; }
  const DynReport& report() const { return report_; }
  const greedy::Seed& seed() const { return seed_; }
  void set_seed_override(const greedy::Seed& seed);

  std::size_t size() const { return survivors_.size(); }
  double weight_of(const core::Point& x) const;  // w(x), sandwich factor D

  // Activation time per Fig. 11: summary lookup first, then the oracle scan
  // over unkept slots at weight w(x)/(2D).
  std::optional<std::int64_t> activation_time(const core::Point& x,
                                              std::int64_t horizon) const;

  const ExactSimGeoSampler& sampler() const { return sampler_; }

 private:
  double scaled_weight(const core::Point& x) const;  // w(x)/(2D)
  bool mask_bit_at(std::int64_t t) const;

  std::size_t dim_;
  std::int64_t delta_;
  double p_;
  const rng::RandomOracle* oracle_;
  DynOptions opts_;
  DynParams params_;

  std::set<core::Point> survivors_;
  ExactSimGeoSampler sampler_;

  core::Dataset universe_;
  greedy::TimelineMaskSummary summary_;
  std::map<core::Point, std::uint32_t> universe_index_;
  std::map<core::Point, std::int64_t> recorded_act_;  // from summary tuples
  std::unique_ptr<greedy::AssignSession> session_;
  greedy::Seed seed_;
  DynReport report_;
};

struct CorrelatedProcessResult {
  core::Cut cut;
  std::size_t m = 0;
  greedy::Seed sigma;
  greedy::TimelineMaskSummary summary;
  std::vector<std::optional<std::int64_t>> act_times;
  std::size_t draws_consumed = 0;
};

// The sequential round process for the correlated timeline-mask, consuming
// the same oracle mask bits, sampler draws, and activation coins as the
// engine's Build-Summ. Points activated by t0 copy z*.
CorrelatedProcessResult correlated_greedy_oracle(const core::Dataset& ds,
                                                 const std::vector<double>& w_scaled,
                                                 const DynParams& params,
                                                 const core::Cut& z_star,
                                                 const rng::RandomOracle& oracle,
                                                 const ExactSimGeoSampler& sampler);

}  // namespace geocut::stream
