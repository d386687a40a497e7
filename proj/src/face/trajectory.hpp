#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "face/hungarian.hpp"
#include "face/kmeans.hpp"

namespace captem::face {

inline constexpr double kTargetFps = 16.0;

struct BBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double area() const noexcept { return w * h; }
};

struct FrameSize {
  double width = 0.0;
  double height = 0.0;
};

struct Detection {
  std::size_t frame_idx = 0;
  BBox bbox;
  FrameSize frame_size;
  std::vector<double> embedding;  // unit length
  double confidence = 0.0;
};

struct Track {
  int track_id = 0;
  std::vector<Detection> detections;  // strictly increasing frame_idx
};

struct TrackFeatures {
  double total_area = 0.0;
  double avg_cos = 1.0;
};

struct AssociationParams {
  double lambda = 0.5;
  double cost_gate = 0.7;
  int max_age = 8;
};

struct MainSelection {
  std::set<int> main_track_ids;
  std::set<int> background_track_ids;
  /// Mean raw (total_area, avg_cos) of each cluster. The background cluster
  /// can be empty (e.g. every track has identical features).
  Point2 main_center;
  std::optional<Point2> background_center;
};

double iou(const BBox& a, const BBox& b) noexcept;
double cosine(std::span<const double> a, std::span<const double> b) noexcept;

/// Source frame indices round(k * src_fps / 16), k = 0, 1, ..., below
/// src_frame_count. src_fps <= 16 keeps every frame. Throws kInvalidArgument
/// for src_fps <= 0.
std::vector<std::size_t> downsample_plan(double src_fps, std::size_t src_frame_count);

/// Per-frame record of what associate_tracks decided.
struct AssociationStep {
  std::vector<int> live_track_ids;  // cost matrix rows
  CostMatrix cost{0, 0};            // rows: live tracks, cols: detections
  std::vector<int> assignment;      // row -> col or kUnassigned, before gating
};

/// Frame-by-frame Hungarian association. Cost of pairing track t with
/// detection d is  lambda * (1 - IoU(last box of t, d))
///               + (1 - lambda) * (1 - cos(mean embedding of t, d));
/// pairs above cost_gate are dropped, unmatched detections open new tracks,
/// and a track unmatched for more than max_age consecutive frames is retired.
/// Tracks are returned in creation order with ids 0, 1, ...
/// Throws kDimensionMismatch if embedding sizes differ.
std::vector<Track> associate_tracks(const std::vector<std::vector<Detection>>& frames,
                                    const AssociationParams& params = {},
                                    std::vector<AssociationStep>* trace = nullptr);

/// total_area = sum(bbox area / frame area) / video_frame_count;
/// avg_cos = mean cosine over unordered distinct pairs (1 for one detection).
/// Throws kEmptyTrack.
TrackFeatures track_features(const Track& track, std::size_t video_frame_count);

/// Min-max normalised features, 2-means (see two_means), main cluster is the
/// one with the larger mean raw total_area; on a tie, the cluster holding the
/// first track with the largest total_area. One track is main; two tracks are
/// split one per cluster.
MainSelection select_main_tracks(const std::vector<std::pair<int, TrackFeatures>>& features);

/// Normalised points fed to two_means, in input order.
std::vector<Point2> normalize_features(const std::vector<std::pair<int, TrackFeatures>>& features);

/// Main/background labelling rule applied to a fixed partition. Exposed so
/// tests can apply it to oracle partitions.
MainSelection label_partition(const std::vector<std::pair<int, TrackFeatures>>& features,
                              const Partition& partition);

/// Uniform picks floor(j * N / n); any pick without a main face moves to the
/// nearest frame that has one (ties go to the earlier frame).
std::vector<std::size_t> select_frames(std::size_t video_frame_count, std::size_t n,
                                       const std::set<std::size_t>& main_face_frames);

}  // namespace captem::face
