#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "core/cut.hpp"
#include "core/dataset.hpp"
#include "greedy/summary.hpp"

namespace geocut::greedy {

// Side assignments for the points activated by the keeping time, indexed by
// the lexicographic order over those points.
struct Seed {
  std::vector<std::uint8_t> bits;

  std::size_t length() const { return bits.size(); }
  static Seed from_integer(std::uint64_t v, std::size_t m) {
    Seed s;
    s.bits.resize(m);
    for (std::size_t k = 0; k < m; ++k) s.bits[k] = (v >> k) & 1;
    return s;
  }
};

enum class AssignMode { kStatic, kDynamic };

// Materializes the assignment rule for one summary: resolves the sides of all
// summary participants in a single pass over (activation time, lex point)
// order, then answers queries for arbitrary points. Static mode sums the
// estimated contributions over entries with ell < t_i; dynamic mode over
// first-activation entries with t_j < t_i.
class AssignSession {
 public:
  AssignSession(const core::Dataset& ds, const TimelineMaskSummary& summary,
                const GreedyParams& params, AssignMode mode);

  // Points activated by t0, in seed (lexicographic) order.
  const std::vector<std::uint32_t>& base_points() const { return base_order_; }
  std::size_t seed_length() const { return base_order_.size(); }

  // Resolves all summary-point assignments under the given seed.
  void apply_seed(const Seed& seed);

  // Assignment for a dataset point with known activation time. The seed must
  // have been applied. Never-activated callers use Row::kSideZero themselves.
  core::Row assign(std::uint32_t point, std::int64_t t_act) const;

  // Assignment by coordinates, for queries that arrive as raw points.
  core::Row assign_coords(std::span<const double> coords, std::int64_t t_act) const;

  // Full cut: assign() where activated, default (1,0) where not.
  core::Cut full_cut(const std::vector<std::optional<std::int64_t>>& act_times) const;

 private:
  struct Participant {
    std::uint32_t point;
    std::int64_t t_act;
    core::Row side = core::Row::kUnassigned;
  };

  core::Row decide(std::span<const double> coords, std::int64_t t_act) const;
  core::Row decide_participant(std::size_t slot) const;
  double contribution_denominator(const SummaryEntry& e) const;

  const core::Dataset* ds_;
  const TimelineMaskSummary* summary_;
  GreedyParams params_;
  AssignMode mode_;
  bool seed_applied_ = false;

  std::vector<Participant> participants_;            // sorted by (t_act, lex)
  std::vector<std::int32_t> participant_of_point_;   // dataset index -> slot or -1
  std::vector<std::uint32_t> base_order_;            // S^{t0} in lex order
  std::vector<core::Row> side_of_point_;             // resolved sides by dataset index

  // Seed selection re-resolves participants for every candidate; the entry
  // terms are fixed, so distances and denominators are cached up front.
  std::vector<std::uint32_t> entry_owner_slot_;
  std::vector<double> entry_denominator_;
  std::vector<std::vector<double>> slot_distance_;  // [slot][entry]
};

}  // namespace geocut::greedy
