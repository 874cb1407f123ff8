#include "weights/weights.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace geocut::weights {

std::optional<ModeSpec> ModeSpec::parse(const std::string& s) {
  ModeSpec spec;
  if (s == "exact") return spec;
  if (s.rfind("sketched:", 0) == 0) {
    spec.mode = Mode::kSketched;
    std::istringstream in(s.substr(9));
    std::string eps, delta;
    if (!std::getline(in, eps, ':') || !std::getline(in, delta, ':')) return std::nullopt;
    try {
      spec.epsilon = std::stod(eps);
      spec.delta = std::stod(delta);
    } catch (...) {
      return std::nullopt;
    }
    if (spec.epsilon < 0 || spec.epsilon >= 1 || spec.delta < 0 || spec.delta >= 1)
      return std::nullopt;
    return spec;
  }
  if (s.rfind("dynamic:", 0) == 0) {
    spec.mode = Mode::kDynamic;
    try {
      spec.big_d = std::stod(s.substr(8));
    } catch (...) {
      return std::nullopt;
    }
    if (spec.big_d < 1.0) return std::nullopt;
    return spec;
  }
  return std::nullopt;
}

std::string ModeSpec::to_string() const {
  std::ostringstream out;
  switch (mode) {
    case Mode::kExact:
      out << "exact";
      break;
    case Mode::kSketched:
      out << "sketched:" << epsilon << ":" << delta;
      break;
    case Mode::kDynamic:
      out << "dynamic:" << big_d;
      break;
  }
  return out.str();
}

WeightVector exact_weights(const core::Dataset& ds) {
  const auto summary = core::distance_summary(ds);
  if (summary.total <= 0.0)
    throw std::invalid_argument("zero total distance, all cuts value 0");
  WeightVector out;
  out.w.resize(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i)
    out.w[i] = summary.degrees[i] / summary.total;
  out.lambda = 4.0;  // unhalved exact weights; halving gives 8
  return out;
}

namespace {

SketchedWeights perturbed_weights(const core::Dataset& ds, double hi_factor,
                                  double delta, const rng::RandomOracle& oracle,
                                  const std::vector<rng::OwnerId>& owners) {
  SketchedWeights out;
  out.weights = exact_weights(ds);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const rng::OwnerId owner =
        owners.empty() ? rng::OwnerId::by_index(i) : owners[i];
    const double u = oracle.uniform(owner, rng::StreamTag::kWeightMult, 0);
    const double mult = 1.0 + (hi_factor - 1.0) * u;
    out.weights.w[i] = std::min(out.weights.w[i] * mult, 1.0);
  }
  out.failure_event =
      delta > 0.0 &&
      oracle.uniform(rng::OwnerId::global(), rng::StreamTag::kWeightFail, 0) < delta;
  return out;
}

}  // namespace

SketchedWeights sketched_weights(const core::Dataset& ds, double eps, double delta,
                                 const rng::RandomOracle& oracle,
                                 const std::vector<rng::OwnerId>& owners) {
  if (eps < 0.0 || eps >= 1.0)
    throw std::invalid_argument("sketched_weights: eps must be in [0,1)");
  return perturbed_weights(ds, 1.0 + eps, delta, oracle, owners);
}

SketchedWeights dynamic_weight_oracle(const core::Dataset& ds, double big_d,
                                      const rng::RandomOracle& oracle,
                                      const std::vector<rng::OwnerId>& owners) {
  if (big_d < 1.0) throw std::invalid_argument("dynamic_weight_oracle: D must be >= 1");
  return perturbed_weights(ds, big_d, 0.0, oracle, owners);
}

WeightVector compatible_transform(const WeightVector& in, double lambda) {
  WeightVector out;
  out.w.resize(in.w.size());
  for (std::size_t i = 0; i < in.w.size(); ++i) out.w[i] = in.w[i] / 2.0;
  out.lambda = lambda;
  return out;
}

CompatibilityReport check_compatibility(const core::Dataset& ds,
                                        const WeightVector& w, double lambda) {
  const auto summary = core::distance_summary(ds);
  CompatibilityReport rep;
  rep.ok = true;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t j = 0; j < ds.size(); ++j) {
      if (i == j) continue;
      const double d = ds.dist(i, j);
      if (d == 0.0) continue;
      if (w.w[j] <= 0.0 || summary.degrees[i] <= 0.0) {
        rep.ok = false;
        rep.worst_ratio = std::numeric_limits<double>::infinity();
        return rep;
      }
      const double ratio = d / (w.w[j] * summary.degrees[i]);
      rep.worst_ratio = std::max(rep.worst_ratio, ratio);
    }
  }
  rep.ok = rep.worst_ratio <= lambda;
  return rep;
}

}  // namespace geocut::weights
