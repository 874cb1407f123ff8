#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/cut.hpp"
#include "core/dataset.hpp"
#include "greedy/params.hpp"
#include "mpc/cluster.hpp"
#include "rng/oracle.hpp"
#include "weights/weights.hpp"

namespace geocut::mpc {

// A dataset partitioned across machines. Machines hold contiguous slices in
// input order; origin is the global input index.
struct World {
  const core::Dataset* ds = nullptr;
  MachineConfig cfg;
  std::vector<std::vector<std::size_t>> held;  // machine -> origins

  static World contiguous(const core::Dataset& ds, std::size_t machines,
                          std::size_t words);
};

// Declared word footprint of the distance-sketch state the weight backends
// stand in for.
std::size_t declared_sketch_words(std::size_t n, std::size_t d, double eps);

// Distributed rank computation: every holder learns the global rank of each
// held item under (coords lex, origin) order. Ties between duplicates are
// broken by origin, matching the stable single-machine sort.
std::vector<std::uint32_t> mpc_sort(Cluster& cluster, const World& world);

struct MpcWeights {
  std::vector<double> w;  // indexed by origin
  bool failure_event = false;
};

// The Compute-Weights protocol: ranks, sketch exchange, degree estimates,
// total aggregation, then w_i = min{(1+eps/3) d_i / D, 1} at each holder.
MpcWeights mpc_compute_weights(Cluster& cluster, const World& world,
                               const weights::ModeSpec& mode, double protocol_eps,
                               const rng::RandomOracle& oracle,
                               const std::vector<std::uint32_t>& ranks);

struct MpcResult {
  core::Cut cut;
  double f = 0.0;
  double cut_value = 0.0;
  greedy::GreedyParams params;
  std::size_t summary_size = 0;
  std::size_t seed_length = 0;
  std::size_t check_size = 0;
  bool seed_truncated = false;
  bool weight_failure_event = false;
  bool protocol_failed = false;
  std::string failure_reason;
  std::size_t rounds = 0;
  std::size_t peak_words = 0;
  std::vector<RoundRecord> round_log;
};

// The full protocol: weights, per-point timelines and masks, converge-cast of
// the summary and check tuples, seed selection at the root, broadcast, local
// assignment. On a recorded protocol failure every held point defaults to the
// 0-side and the failure is reported.
MpcResult mpc_e_max_cut(const World& world, double eps,
                        const weights::ModeSpec& weight_mode,
                        const rng::RandomOracle& oracle, std::size_t seed_cap = 24);

}  // namespace geocut::mpc
