#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "core/dataset.hpp"
#include "greedy/params.hpp"
#include "rng/oracle.hpp"

namespace geocut::greedy {

// How oracle randomness is addressed. Streaming engines must regenerate a
// point's bits from the value alone, so they address by coordinates; rank
// addressing uses the canonical (coords lex, input index) rank, which is what
// the distributed sort hands every holder and keeps duplicates independent.
enum class Addressing { kByRank, kByCoords };

// Rank of each point under (coords lex, input index) order.
std::vector<std::uint32_t> canonical_ranks(const core::Dataset& ds);

std::vector<rng::OwnerId> make_owners(const core::Dataset& ds, Addressing mode);

// One (point, kept time, weight-or-probability, activation time) tuple.
struct SummaryEntry {
  std::uint32_t point = 0;       // dataset index of the owner
  std::int64_t ell = 0;          // time with A*K = 1
  double weight_or_prob = 0.0;   // w_j in static mode, p*_ell in dynamic mode
  std::int64_t t_act = 0;        // activation time of the owner's timeline
};

// The global state driving the assignment rule. Entries are kept sorted by
// (ell, owner coords lex, owner index) so contribution sums are order-stable.
struct TimelineMaskSummary {
  std::vector<SummaryEntry> entries;
  std::int64_t t0 = 1;
};

struct BuildResult {
  TimelineMaskSummary summary;
  // Activation time per dataset point; nullopt when never activated by t_e.
  std::vector<std::optional<std::int64_t>> act_times;
};

// Scans each point's timeline and mask lazily over t = 1..t_e and records
// every activated-and-kept slot. Weights must already be in (0, 1/2].
BuildResult build_summary(const core::Dataset& ds, const std::vector<double>& w,
                          const GreedyParams& params, const rng::RandomOracle& oracle,
                          const std::vector<rng::OwnerId>& owners);

void sort_entries(const core::Dataset& ds, std::vector<SummaryEntry>& entries);

}  // namespace geocut::greedy
