#pragma once

#include <vector>

#include "core/cut.hpp"
#include "core/dataset.hpp"
#include "greedy/assign.hpp"
#include "greedy/params.hpp"
#include "greedy/summary.hpp"

namespace geocut::greedy {

struct ProcessResult {
  core::Cut cut;              // (0,0) rows for never-activated points
  std::size_t m = 0;          // |S^t0|
  Seed sigma;                 // z* restricted to S^t0 in lexicographic order
  TimelineMaskSummary summary;
  std::vector<std::optional<std::int64_t>> act_times;
};

// The sequential round process: pinned to the same oracle addresses as
// build_summary so that, under a shared key, its cut on activated points is
// exactly the one the summary-plus-assignment route reconstructs. Points
// activated by t0 copy z*; later activations take the greedy side against
// the activated-and-kept prefix.
ProcessResult greedy_process_oracle(const core::Dataset& ds,
                                    const std::vector<double>& w,
                                    const GreedyParams& params,
                                    const core::Cut& z_star,
                                    const rng::RandomOracle& oracle,
                                    const std::vector<rng::OwnerId>& owners);

}  // namespace geocut::greedy
