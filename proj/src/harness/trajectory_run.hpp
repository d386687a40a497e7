#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "face/trajectory.hpp"

namespace captem::harness {

struct TrajectoryOptions {
  double src_fps = face::kTargetFps;
  std::size_t frames = 16;
  /// Source video length. Defaults to max frame_idx + 1, or to `frames`
  /// when there are no detections.
  std::optional<std::size_t> frame_count;
  face::AssociationParams association;
};

struct TrackSummary {
  int track_id = 0;
  std::vector<std::size_t> frames;  // source frame indices
  face::TrackFeatures features;
  bool is_main = false;
};

struct TrajectoryResult {
  std::vector<TrackSummary> tracks;
  std::vector<std::size_t> selected_frames;  // source frame indices
  std::vector<std::string> warnings;
};

/// downsample_plan, associate_tracks, track_features, select_main_tracks,
/// select_frames. Frame selection runs over the downsampled timeline and the
/// result is mapped back to source indices. Detections on frames outside the
/// plan are ignored (with a warning).
TrajectoryResult run_trajectory(const std::vector<face::Detection>& detections,
                                const TrajectoryOptions& options);

TrajectoryResult run_trajectory_file(const std::filesystem::path& detections,
                                     const TrajectoryOptions& options);

/// {tracks:[{track_id, frames, total_area, avg_cos, is_main}], selected_frames}
std::string trajectory_to_json(const TrajectoryResult& result);

}  // namespace captem::harness
