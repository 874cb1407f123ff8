#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace geocut::core {

using Point = std::vector<double>;

// lp distance, p >= 1. Throws on dimension mismatch.
double distance(std::span<const double> a, std::span<const double> b, double p);

// An indexed multiset of points with an lp metric. Streaming backends require
// integer coordinates in [1, delta] and pairwise-distinct points; reference
// and MPC mode accept duplicates and real coordinates.
struct Dataset {
  std::vector<Point> points;
  double p = 2.0;
  std::optional<std::int64_t> delta;  // grid bound, streaming mode only

  std::size_t size() const { return points.size(); }
  std::size_t dim() const { return points.empty() ? 0 : points.front().size(); }

  double dist(std::size_t i, std::size_t j) const {
    return distance(points[i], points[j], p);
  }
  double dist_to(std::size_t i, std::span<const double> x) const {
    return distance(points[i], x, p);
  }

  // Checks the streaming-mode invariants (grid coords, distinctness).
  // Returns an error message, or nullopt when valid.
  std::optional<std::string> streaming_violation() const;

  // True when at least two points differ (the weight routines' precondition).
  bool has_two_distinct() const;
};

struct DistanceSummary {
  double total = 0.0;               // sum over all ordered pairs
  std::vector<double> degrees;      // degrees[i] = sum_j d(x_i, x_j)
};

DistanceSummary distance_summary(const Dataset& ds);

// Dense pairwise distances; the backbone for desk-scale exact computations.
std::vector<std::vector<double>> distance_matrix(const Dataset& ds);

// True if a precedes b in lexicographic coordinate order.
bool lex_less(const Point& a, const Point& b);

}  // namespace geocut::core
