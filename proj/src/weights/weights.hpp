#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/dataset.hpp"
#include "rng/oracle.hpp"

namespace geocut::weights {

// Per-point sampling weights with the compatibility factor they claim.
struct WeightVector {
  std::vector<double> w;
  double lambda = 1.0;
};

enum class Mode { kExact, kSketched, kDynamic };

struct ModeSpec {
  Mode mode = Mode::kExact;
  double epsilon = 0.0;  // sketched: multiplicative slack
  double delta = 0.0;    // sketched: simulated failure probability
  double big_d = 1.0;    // dynamic: sandwich factor D

  // Parses "exact" | "sketched:<eps>:<delta>" | "dynamic:<D>".
  static std::optional<ModeSpec> parse(const std::string& s);
  std::string to_string() const;
};

// w_i = degrees[i] / total. Errors when all points coincide (zero total
// distance, every cut has value 0).
WeightVector exact_weights(const core::Dataset& ds);

struct SketchedWeights {
  WeightVector weights;
  bool failure_event = false;  // simulated sketch failure, for failure-path tests
};

// Exact weight times a keyed multiplier in [1, 1+eps], clamped at 1. Stands in
// for the cascaded-norm sketch behind the same sandwich contract. The owners
// vector addresses the per-point multipliers (empty: address by input index).
SketchedWeights sketched_weights(const core::Dataset& ds, double eps, double delta,
                                 const rng::RandomOracle& oracle,
                                 const std::vector<rng::OwnerId>& owners = {});

// Exact weight times a keyed multiplier in [1, D]; the caller divides by 2D.
SketchedWeights dynamic_weight_oracle(const core::Dataset& ds, double big_d,
                                      const rng::RandomOracle& oracle,
                                      const std::vector<rng::OwnerId>& owners = {});

// Halves all entries. lambda: 8 when the input sandwich factor is at most 2,
// 60 for the insertion-only final weights.
WeightVector compatible_transform(const WeightVector& in, double lambda = 8.0);

struct CompatibilityReport {
  bool ok = false;
  double worst_ratio = 0.0;  // max over pairs of d(x_i,x_j)/(w_j * sum_k d(x_i,x_k))
};

// Verifies d(x_i,x_j)/w_j <= lambda * sum_k d(x_i,x_k) over all ordered pairs.
CompatibilityReport check_compatibility(const core::Dataset& ds,
                                        const WeightVector& w, double lambda);

}  // namespace geocut::weights
