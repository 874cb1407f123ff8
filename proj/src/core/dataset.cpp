#include "core/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace geocut::core {

double distance(std::span<const double> a, std::span<const double> b, double p) {
  if (a.size() != b.size())
    throw std::invalid_argument("distance: dimension mismatch");
  if (p < 1.0) throw std::invalid_argument("distance: p must be >= 1");
  if (p == 1.0) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += std::abs(a[k] - b[k]);
    return s;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double d = a[k] - b[k];
      s += d * d;
    }
    return std::sqrt(s);
  }
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    s += std::pow(std::abs(a[k] - b[k]), p);
  return std::pow(s, 1.0 / p);
}

std::optional<std::string> Dataset::streaming_violation() const {
  if (!delta.has_value()) return "streaming mode requires a grid bound delta";
  for (const auto& x : points) {
    for (double c : x) {
      if (c < 1.0 || c > static_cast<double>(*delta) || c != std::floor(c))
        return "coordinates must be integers in [1, delta]";
    }
  }
  std::set<Point> seen;
  for (const auto& x : points) {
    if (!seen.insert(x).second) return "duplicate points are not allowed in streaming mode";
  }
  return std::nullopt;
}

bool Dataset::has_two_distinct() const {
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i] != points[0]) return true;
  return false;
}

DistanceSummary distance_summary(const Dataset& ds) {
  const std::size_t n = ds.size();
  DistanceSummary s;
  s.degrees.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = ds.dist(i, j);
      s.degrees[i] += d;
      s.degrees[j] += d;
    }
  }
  for (double deg : s.degrees) s.total += deg;
  return s;
}

std::vector<std::vector<double>> distance_matrix(const Dataset& ds) {
  const std::size_t n = ds.size();
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = ds.dist(i, j);
      m[i][j] = d;
      m[j][i] = d;
    }
  }
  return m;
}

bool lex_less(const Point& a, const Point& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace geocut::core
