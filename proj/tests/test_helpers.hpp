#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "core/cut.hpp"
#include "core/dataset.hpp"
#include "rng/oracle.hpp"

namespace testutil {

inline geocut::rng::RandomOracle oracle_for(std::uint64_t k) {
  std::array<std::uint8_t, 16> key{};
  for (int i = 0; i < 8; ++i) key[i] = static_cast<std::uint8_t>(k >> (8 * i));
  key[15] = 0x5e;
  return geocut::rng::RandomOracle(key);
}

// Deterministic random instances for tests; std RNG keeps them independent of
// the oracle streams under test.
inline geocut::core::Dataset random_dataset(std::uint64_t seed, std::size_t n,
                                            std::size_t d, double p,
                                            double span = 10.0) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> coord(0.0, span);
  geocut::core::Dataset ds;
  ds.p = p;
  for (std::size_t i = 0; i < n; ++i) {
    geocut::core::Point x(d);
    for (auto& c : x) c = coord(gen);
    ds.points.push_back(std::move(x));
  }
  return ds;
}

// Distinct integer grid points in [1, delta]^d, for streaming-mode tests.
inline geocut::core::Dataset random_grid_dataset(std::uint64_t seed, std::size_t n,
                                                 std::size_t d, double p,
                                                 std::int64_t delta) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<std::int64_t> coord(1, delta);
  geocut::core::Dataset ds;
  ds.p = p;
  ds.delta = delta;
  std::set<geocut::core::Point> seen;
  while (ds.points.size() < n) {
    geocut::core::Point x(d);
    for (auto& c : x) c = static_cast<double>(coord(gen));
    if (seen.insert(x).second) ds.points.push_back(std::move(x));
  }
  return ds;
}

inline geocut::core::Dataset triangle_unit() {
  geocut::core::Dataset ds;
  ds.p = 2.0;
  const double h = std::sqrt(3.0) / 2.0;
  ds.points = {{0.0, 0.0}, {1.0, 0.0}, {0.5, h}};
  return ds;
}

inline geocut::core::Cut random_complete_cut(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 gen(seed);
  geocut::core::Cut z = geocut::core::Cut::unassigned(n);
  for (auto& r : z.rows)
    r = (gen() & 1) ? geocut::core::Row::kSideOne : geocut::core::Row::kSideZero;
  return z;
}

}  // namespace testutil
