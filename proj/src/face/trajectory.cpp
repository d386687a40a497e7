#include "face/trajectory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iterator>
#include <limits>

#include <fmt/format.h>

#include "core/error.hpp"

namespace captem::face {

double iou(const BBox& a, const BBox& b) noexcept {
  const double ix = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
  const double iy = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

double cosine(std::span<const double> a, std::span<const double> b) noexcept {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<std::size_t> downsample_plan(double src_fps, std::size_t src_frame_count) {
  if (!(src_fps > 0.0) || !std::isfinite(src_fps)) {
    throw Error(ErrorCode::kInvalidArgument, "source fps must be a positive number");
  }
  std::vector<std::size_t> plan;
  if (src_fps <= kTargetFps) {
    plan.resize(src_frame_count);
    for (std::size_t i = 0; i < src_frame_count; ++i) plan[i] = i;
    return plan;
  }
  const double step = src_fps / kTargetFps;
  for (std::size_t k = 0;; ++k) {
    const auto idx = static_cast<std::size_t>(std::llround(static_cast<double>(k) * step));
    if (idx >= src_frame_count) break;
    if (plan.empty() || plan.back() != idx) plan.push_back(idx);
  }
  return plan;
}

namespace {

struct LiveTrack {
  Track track;
  std::vector<double> embedding_sum;
  std::size_t last_step = 0;
};

}  // namespace

std::vector<Track> associate_tracks(const std::vector<std::vector<Detection>>& frames,
                                    const AssociationParams& params,
                                    std::vector<AssociationStep>* trace) {
  std::vector<LiveTrack> all;
  std::optional<std::size_t> dim;

  for (std::size_t step = 0; step < frames.size(); ++step) {
    const auto& dets = frames[step];
    for (const auto& d : dets) {
      if (!dim) dim = d.embedding.size();
      if (d.embedding.size() != *dim) {
        throw Error(ErrorCode::kDimensionMismatch,
                    fmt::format("frame {}: embedding has {} dims, expected {}", d.frame_idx,
                                d.embedding.size(), *dim));
      }
    }

    std::vector<std::size_t> live;
    for (std::size_t t = 0; t < all.size(); ++t) {
      const std::size_t missed = step - all[t].last_step - 1;
      if (missed <= static_cast<std::size_t>(std::max(0, params.max_age))) live.push_back(t);
    }

    CostMatrix cost(live.size(), dets.size());
    for (std::size_t r = 0; r < live.size(); ++r) {
      const LiveTrack& lt = all[live[r]];
      const BBox& last = lt.track.detections.back().bbox;
      for (std::size_t c = 0; c < dets.size(); ++c) {
        cost(r, c) = params.lambda * (1.0 - iou(last, dets[c].bbox)) +
                     (1.0 - params.lambda) * (1.0 - cosine(lt.embedding_sum, dets[c].embedding));
      }
    }
    const std::vector<int> assignment = solve_assignment(cost);

    std::vector<bool> taken(dets.size(), false);
    for (std::size_t r = 0; r < live.size(); ++r) {
      const int c = assignment[r];
      if (c == kUnassigned || cost(r, c) > params.cost_gate) continue;
      LiveTrack& lt = all[live[r]];
      const Detection& d = dets[c];
      lt.track.detections.push_back(d);
      for (std::size_t k = 0; k < d.embedding.size(); ++k) lt.embedding_sum[k] += d.embedding[k];
      lt.last_step = step;
      taken[c] = true;
    }
    if (trace) {
      AssociationStep rec{{}, cost, assignment};
      for (auto t : live) rec.live_track_ids.push_back(all[t].track.track_id);
      trace->push_back(std::move(rec));
    }
    for (std::size_t c = 0; c < dets.size(); ++c) {
      if (taken[c]) continue;
      LiveTrack lt;
      lt.track.track_id = static_cast<int>(all.size());
      lt.track.detections.push_back(dets[c]);
      lt.embedding_sum = dets[c].embedding;
      lt.last_step = step;
      all.push_back(std::move(lt));
    }
  }

  std::vector<Track> out;
  out.reserve(all.size());
  for (auto& lt : all) out.push_back(std::move(lt.track));
  return out;
}

TrackFeatures track_features(const Track& track, std::size_t video_frame_count) {
  if (track.detections.empty()) {
    throw Error(ErrorCode::kEmptyTrack, fmt::format("track {} has no detections", track.track_id));
  }
  if (video_frame_count == 0) {
    throw Error(ErrorCode::kInvalidArgument, "video_frame_count must be positive");
  }
  TrackFeatures f;
  double area_sum = 0.0;
  for (const auto& d : track.detections) {
    area_sum += d.bbox.area() / (d.frame_size.width * d.frame_size.height);
  }
  f.total_area = area_sum / static_cast<double>(video_frame_count);

  const auto& dets = track.detections;
  if (dets.size() < 2) {
    f.avg_cos = 1.0;
    return f;
  }
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    for (std::size_t j = i + 1; j < dets.size(); ++j) {
      sum += cosine(dets[i].embedding, dets[j].embedding);
      ++pairs;
    }
  }
  f.avg_cos = sum / static_cast<double>(pairs);
  return f;
}

std::vector<Point2> normalize_features(
    const std::vector<std::pair<int, TrackFeatures>>& features) {
  std::vector<Point2> pts;
  pts.reserve(features.size());
  for (const auto& [id, f] : features) pts.push_back({f.total_area, f.avg_cos});
  if (pts.empty()) return pts;

  const auto rescale = [&](double Point2::*field) {
    double lo = pts[0].*field, hi = pts[0].*field;
    for (const auto& p : pts) {
      lo = std::min(lo, p.*field);
      hi = std::max(hi, p.*field);
    }
    for (auto& p : pts) p.*field = hi > lo ? (p.*field - lo) / (hi - lo) : 0.0;
  };
  rescale(&Point2::x);
  rescale(&Point2::y);
  return pts;
}

namespace {

std::size_t first_max_area(const std::vector<std::pair<int, TrackFeatures>>& features) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < features.size(); ++i) {
    if (features[i].second.total_area > features[best].second.total_area) best = i;
  }
  return best;
}

std::size_t first_min_area(const std::vector<std::pair<int, TrackFeatures>>& features) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < features.size(); ++i) {
    if (features[i].second.total_area < features[best].second.total_area) best = i;
  }
  return best;
}

}  // namespace

MainSelection label_partition(const std::vector<std::pair<int, TrackFeatures>>& features,
                              const Partition& partition) {
  std::array<Point2, 2> sum{};
  std::array<std::size_t, 2> count{};
  for (std::size_t i = 0; i < features.size(); ++i) {
    const int k = partition[i];
    sum[k].x += features[i].second.total_area;
    sum[k].y += features[i].second.avg_cos;
    ++count[k];
  }
  std::array<std::optional<Point2>, 2> mean;
  for (int k = 0; k < 2; ++k) {
    if (count[k]) {
      mean[k] = Point2{sum[k].x / static_cast<double>(count[k]),
                       sum[k].y / static_cast<double>(count[k])};
    }
  }

  int main_cluster;
  if (!mean[0]) {
    main_cluster = 1;
  } else if (!mean[1]) {
    main_cluster = 0;
  } else if (mean[0]->x != mean[1]->x) {
    main_cluster = mean[0]->x > mean[1]->x ? 0 : 1;
  } else {
    main_cluster = partition[first_max_area(features)];
  }

  MainSelection sel;
  for (std::size_t i = 0; i < features.size(); ++i) {
    (partition[i] == main_cluster ? sel.main_track_ids : sel.background_track_ids)
        .insert(features[i].first);
  }
  sel.main_center = *mean[main_cluster];
  sel.background_center = mean[1 - main_cluster];
  return sel;
}

MainSelection select_main_tracks(const std::vector<std::pair<int, TrackFeatures>>& features) {
  if (features.empty()) throw Error(ErrorCode::kInvalidArgument, "no tracks to select from");
  if (features.size() == 1) return label_partition(features, {0});
  if (features.size() == 2) return label_partition(features, {0, 1});

  const auto points = normalize_features(features);
  const LloydRun run = two_means(points, first_min_area(features), first_max_area(features));
  return label_partition(features, run.assignment);
}

std::vector<std::size_t> select_frames(std::size_t video_frame_count, std::size_t n,
                                       const std::set<std::size_t>& main_face_frames) {
  if (video_frame_count == 0 || n == 0) {
    throw Error(ErrorCode::kInvalidArgument, "select_frames needs N >= 1 and n >= 1");
  }
  std::set<std::size_t> faces;
  for (auto f : main_face_frames) {
    if (f < video_frame_count) faces.insert(f);
  }

  std::vector<std::size_t> picks(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t pick = j * video_frame_count / n;
    picks[j] = pick;
    if (faces.empty() || faces.count(pick)) continue;
    const auto above = faces.lower_bound(pick);
    if (above == faces.begin()) {
      picks[j] = *above;
    } else if (above == faces.end()) {
      picks[j] = *std::prev(above);
    } else {
      const std::size_t below = *std::prev(above);
      picks[j] = (pick - below) <= (*above - pick) ? below : *above;
    }
  }
  return picks;
}

}  // namespace captem::face
