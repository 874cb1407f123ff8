#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/cut.hpp"
#include "core/dataset.hpp"
#include "greedy/assign.hpp"
#include "greedy/params.hpp"
#include "greedy/summary.hpp"
#include "seedselect/seedselect.hpp"
#include "weights/weights.hpp"

namespace geocut::greedy {

struct PipelineOptions {
  double epsilon = 0.5;
  weights::ModeSpec weight_mode;
  Addressing addressing = Addressing::kByRank;
  std::size_t seed_cap = 24;
  double delta_seed = 0.0;  // 0: use epsilon (the spec's default delta = eps)

  // Test harness overrides; every override replaces the derived quantity.
  std::optional<std::vector<double>> weight_override;  // already halved/scaled
  std::optional<double> lambda_override;
  std::optional<GreedyParams> params_override;
  std::optional<std::vector<double>> check_prob_override;
  std::optional<Seed> seed_override;
};

struct PipelineResult {
  core::Cut cut;
  double f = 0.0;
  double cut_value = 0.0;
  GreedyParams params;
  std::size_t summary_size = 0;
  std::size_t seed_length = 0;
  Seed seed;
  std::size_t check_size = 0;
  double xi = 0.0;
  bool seed_truncated = false;
  bool weight_failure_event = false;
  std::vector<std::optional<std::int64_t>> act_times;
  std::vector<double> weights_used;  // the (0,1/2] timeline weights
};

// Draws timelines and masks for every point, assembles the timeline-mask
// summary, picks the seed by importance-sampled estimation over the check
// set, and assigns every point (never-activated points default to the
// 0-side). Shared-memory reference for the MPC and streaming backends.
PipelineResult run_reference_pipeline(const core::Dataset& ds,
                                      const PipelineOptions& opts,
                                      const rng::RandomOracle& oracle);

}  // namespace geocut::greedy
