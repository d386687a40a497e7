#include "face/kmeans.hpp"

#include <algorithm>

#include "core/error.hpp"

namespace captem::face {

namespace {

double sq_dist(Point2 a, Point2 b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

std::array<Point2, 2> centroids(std::span<const Point2> points, const Partition& assignment,
                                std::array<Point2, 2> fallback) {
  std::array<Point2, 2> sum{};
  std::array<std::size_t, 2> count{};
  for (std::size_t i = 0; i < points.size(); ++i) {
    const int k = assignment[i];
    sum[k].x += points[i].x;
    sum[k].y += points[i].y;
    ++count[k];
  }
  for (int k = 0; k < 2; ++k) {
    if (count[k] == 0) continue;
    fallback[k] = {sum[k].x / static_cast<double>(count[k]),
                   sum[k].y / static_cast<double>(count[k])};
  }
  return fallback;
}

}  // namespace

double within_cluster_sse(std::span<const Point2> points, const Partition& assignment) {
  const auto c = centroids(points, assignment, {});
  double sse = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) sse += sq_dist(points[i], c[assignment[i]]);
  return sse;
}

LloydRun lloyd_two_means(std::span<const Point2> points, Point2 center0, Point2 center1,
                         int max_iterations) {
  LloydRun run;
  run.centers = {center0, center1};
  for (int it = 0; it < max_iterations; ++it) {
    Partition next(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      next[i] = sq_dist(points[i], run.centers[0]) < sq_dist(points[i], run.centers[1]) ? 0 : 1;
    }
    ++run.iterations;
    if (next == run.assignment) break;
    run.assignment = std::move(next);
    run.centers = centroids(points, run.assignment, run.centers);
    run.sse_trace.push_back(within_cluster_sse(points, run.assignment));
  }
  return run;
}

LloydRun lloyd_two_means(std::span<const Point2> points, const Partition& seed,
                         int max_iterations) {
  if (seed.size() != points.size()) {
    throw Error(ErrorCode::kInvalidArgument, "seed partition size mismatch");
  }
  const auto c = centroids(points, seed, {});
  return lloyd_two_means(points, c[0], c[1], max_iterations);
}

std::vector<Partition> line_separable_seeds(std::span<const Point2> points) {
  const std::size_t n = points.size();
  std::vector<Partition> seeds;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = points[j].x - points[i].x;
      const double dy = points[j].y - points[i].y;
      if (dx == 0.0 && dy == 0.0) continue;

      Partition base(n, 0);
      std::vector<std::size_t> on_line;
      for (std::size_t k = 0; k < n; ++k) {
        const double side = -dy * (points[k].x - points[i].x) + dx * (points[k].y - points[i].y);
        if (side > 0.0) {
          base[k] = 1;
        } else if (side == 0.0) {
          on_line.push_back(k);
        }
      }
      std::sort(on_line.begin(), on_line.end(), [&](std::size_t a, std::size_t b) {
        return dx * points[a].x + dy * points[a].y < dx * points[b].x + dy * points[b].y;
      });
      for (std::size_t cut = 0; cut <= on_line.size(); ++cut) {
        for (int first : {0, 1}) {
          Partition p = base;
          for (std::size_t r = 0; r < on_line.size(); ++r) {
            p[on_line[r]] = r < cut ? first : 1 - first;
          }
          const auto ones = std::count(p.begin(), p.end(), 1);
          if (ones == 0 || ones == static_cast<std::ptrdiff_t>(n)) continue;
          seeds.push_back(std::move(p));
        }
      }
    }
  }
  return seeds;
}

LloydRun two_means(std::span<const Point2> points, std::size_t low_seed, std::size_t high_seed) {
  if (points.empty()) return {};
  LloydRun best = lloyd_two_means(points, points[low_seed], points[high_seed]);
  double best_sse = within_cluster_sse(points, best.assignment);
  for (const auto& seed : line_separable_seeds(points)) {
    LloydRun run = lloyd_two_means(points, seed);
    const double sse = within_cluster_sse(points, run.assignment);
    if (sse < best_sse) {
      best_sse = sse;
      best = std::move(run);
    }
  }
  return best;
}

}  // namespace captem::face
