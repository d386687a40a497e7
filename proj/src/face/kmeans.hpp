#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace captem::face {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Labels are 0 or 1.
using Partition = std::vector<int>;

struct LloydRun {
  Partition assignment;
  std::array<Point2, 2> centers{};
  /// Within-cluster SSE after each assignment step.
  std::vector<double> sse_trace;
  int iterations = 0;
};

inline constexpr int kMaxLloydIterations = 100;

/// Sum of squared distances of each point to its own cluster's centroid.
double within_cluster_sse(std::span<const Point2> points, const Partition& assignment);

/// Lloyd's 2-means from explicit centers until the assignment stops changing
/// or `max_iterations` is hit. A point equidistant from both centers joins
/// cluster 1; an emptied cluster keeps its previous center.
LloydRun lloyd_two_means(std::span<const Point2> points, Point2 center0, Point2 center1,
                         int max_iterations = kMaxLloydIterations);

/// Lloyd's 2-means seeded with the centroids of `seed` (both sides non-empty).
LloydRun lloyd_two_means(std::span<const Point2> points, const Partition& seed,
                         int max_iterations = kMaxLloydIterations);

/// Every partition obtainable by a straight line through two distinct points,
/// with the points on that line split by position along it. The optimal
/// 2-means partition is always linearly separable, so it is in this set.
std::vector<Partition> line_separable_seeds(std::span<const Point2> points);

/// Lloyd's run from centers (points[low_seed], points[high_seed]), then
/// restarted from every line-separable seed; the lowest-SSE fixpoint wins and
/// ties keep the earlier run.
LloydRun two_means(std::span<const Point2> points, std::size_t low_seed, std::size_t high_seed);

}  // namespace captem::face
