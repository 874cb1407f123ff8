#pragma once

#include <cstdint>
#include <vector>

#include "core/dataset.hpp"

namespace geocut::core {

// Row of the n x {0,1} cut matrix: (0,0) unassigned, (1,0) 0-side, (0,1) 1-side.
enum class Row : std::uint8_t { kUnassigned = 0, kSideZero = 1, kSideOne = 2 };

struct Cut {
  std::vector<Row> rows;

  static Cut unassigned(std::size_t n) { return Cut{std::vector<Row>(n, Row::kUnassigned)}; }
  bool complete() const {
    for (Row r : rows)
      if (r == Row::kUnassigned) return false;
    return true;
  }
};

// Sum of internal distances: (1/2) sum_{i,j} d(x_i,x_j) [same assigned side].
double objective_f(const Dataset& ds, const Cut& z);

// Total weight of cut edges over unordered pairs. Requires a complete cut;
// objective_f + cut_value = sum_{i<j} d(x_i, x_j).
double cut_value(const Dataset& ds, const Cut& z);

struct BruteForceResult {
  Cut cut;
  double f = 0.0;
};

// Enumerates all 2^(n-1) complete cuts (point 0 pinned to the 0-side) and
// returns the first minimizer of f in enumeration order. Refuses n > cap.
BruteForceResult brute_force_opt(const Dataset& ds, std::size_t cap = 20);

}  // namespace geocut::core
